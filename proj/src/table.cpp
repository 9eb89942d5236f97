#include "meps/table.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace meps {

namespace {

int span_compare(std::span<const ClipId> a, std::span<const ClipId> b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    if (a.size() == b.size()) return 0;
    return a.size() < b.size() ? -1 : 1;
}

std::string io_to_string(IoPair io) {
    std::ostringstream out;
    out << "(" << io.in << "," << io.out << ")";
    return out.str();
}

// Calls f(ids) for every k-subset of [0, n) in lexicographic order.
template <typename F>
void for_each_combination(std::size_t n, std::size_t k, F&& f) {
    if (k == 0 || k > n) return;
    std::vector<ClipId> c(k);
    std::iota(c.begin(), c.end(), ClipId{0});
    for (;;) {
        f(std::span<const ClipId>(c.data(), c.size()));
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (c[i] + (k - i) < n) break;
            if (i == 0) return;
        }
        if (c[i] + (k - i) >= n) return;
        ++c[i];
        for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    }
}

// Same, over an arbitrary sorted pool of clip ids.
template <typename F>
void for_each_pool_combination(std::span<const ClipId> pool, std::size_t k, F&& f) {
    for_each_combination(pool.size(), k, [&](std::span<const ClipId> idx) {
        thread_local std::vector<ClipId> ids;
        ids.resize(idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) ids[j] = pool[idx[j]];
        f(std::span<const ClipId>(ids.data(), ids.size()));
    });
}

} // namespace

ProbabilityRule ProbabilityRule::standard(double h_min) {
    if (!(h_min >= 0.0))
        raise(Errc::config, "standard probability rule requires h_min >= 0");
    ProbabilityRule rule;
    rule.kind = Kind::standard_rule;
    rule.h_min = h_min;
    return rule;
}

ProbabilityRule ProbabilityRule::softmax(double beta) {
    if (!std::isfinite(beta)) raise(Errc::config, "softmax beta must be finite");
    ProbabilityRule rule;
    rule.kind = Kind::softmax;
    rule.beta = beta;
    return rule;
}

EdgePredicate predicate_all() {
    return [](std::span<const ClipId>, std::span<const ClipId>) { return true; };
}

EdgePredicate predicate_feed_forward(std::shared_ptr<const ClipTable> clips) {
    if (!clips->layered())
        raise(Errc::config, "feed-forward predicate requires a layered clip table");
    return [clips](std::span<const ClipId> dom, std::span<const ClipId> cod) {
        const int layer = clips->layer_of(dom[0]);
        for (ClipId id : dom)
            if (clips->layer_of(id) != layer) return false;
        for (ClipId id : cod)
            if (clips->layer_of(id) != layer + 1) return false;
        return true;
    };
}

EdgePredicate predicate_category_cutoffs(std::shared_ptr<const ClipTable> clips,
                                         std::vector<std::pair<int, int>> domain_limits,
                                         std::vector<std::pair<int, int>> codomain_limits) {
    auto check = [clips](std::span<const ClipId> ids,
                         const std::vector<std::pair<int, int>>& limits) {
        thread_local std::vector<int> counts;
        counts.assign(limits.size(), 0);
        for (ClipId id : ids) {
            const int cat = clips->at(id).category;
            bool known = false;
            for (std::size_t j = 0; j < limits.size(); ++j) {
                if (limits[j].first == cat) {
                    counts[j] += 1;
                    known = true;
                    break;
                }
            }
            if (!known) return false;
        }
        for (std::size_t j = 0; j < limits.size(); ++j) {
            if (counts[j] < 1 || counts[j] > limits[j].second) return false;
        }
        return true;
    };
    return [clips, domain_limits = std::move(domain_limits),
            codomain_limits = std::move(codomain_limits),
            check](std::span<const ClipId> dom, std::span<const ClipId> cod) {
        return check(dom, domain_limits) && check(cod, codomain_limits);
    };
}

EdgePredicate predicate_and(EdgePredicate a, EdgePredicate b) {
    return [a = std::move(a), b = std::move(b)](std::span<const ClipId> dom,
                                                std::span<const ClipId> cod) {
        return a(dom, cod) && b(dom, cod);
    };
}

ManyBodyTable::Builder::Builder(std::shared_ptr<const ClipTable> clips, double h_init)
    : clips_(std::move(clips)), h_init_(h_init) {
    if (!clips_) raise(Errc::contract, "clip table must not be null");
}

std::size_t ManyBodyTable::Builder::bucket_for(IoPair io) {
    if (io.in < 1 || io.out < 1)
        raise(Errc::config, "io pair entries must be positive: " + io_to_string(io));
    for (std::size_t b = 0; b < buckets_.size(); ++b)
        if (buckets_[b].io == io) return b;
    Bucket bucket;
    bucket.io = io;
    bucket.width = static_cast<std::uint32_t>(io.in + io.out);
    buckets_.push_back(std::move(bucket));
    return buckets_.size() - 1;
}

void ManyBodyTable::Builder::reserve(IoPair io, std::size_t edges) {
    Bucket& bucket = buckets_[bucket_for(io)];
    bucket.ids.reserve(bucket.ids.size() + edges * bucket.width);
    bucket.cells.reserve(bucket.cells.size() + edges);
}

void ManyBodyTable::Builder::add(IoPair io, std::span<const ClipId> dom,
                                 std::span<const ClipId> cod) {
    add(io, dom, cod, h_init_, h_init_, 0.0);
}

void ManyBodyTable::Builder::add(IoPair io, std::span<const ClipId> dom,
                                 std::span<const ClipId> cod, double h, double h_init,
                                 double glow) {
    Bucket& bucket = buckets_[bucket_for(io)];
    if (dom.size() != static_cast<std::size_t>(io.in) ||
        cod.size() != static_cast<std::size_t>(io.out))
        raise(Errc::contract, "edge arity does not match io pair " + io_to_string(io));
    auto validate = [&](std::span<const ClipId> ids) {
        for (std::size_t j = 0; j < ids.size(); ++j) {
            if (ids[j] >= clips_->size()) raise(Errc::contract, "edge clip id out of range");
            if (j > 0 && ids[j] <= ids[j - 1])
                raise(Errc::contract, "edge clip ids must be strictly ascending");
        }
    };
    validate(dom);
    validate(cod);
    if (io.in == io.out && std::equal(dom.begin(), dom.end(), cod.begin()))
        raise(Errc::contract, "hyperedge domain must differ from its codomain");
    bucket.ids.insert(bucket.ids.end(), dom.begin(), dom.end());
    bucket.ids.insert(bucket.ids.end(), cod.begin(), cod.end());
    EdgeCells cells;
    cells.h = h;
    cells.h_init = h_init;
    cells.glow = glow;
    bucket.cells.push_back(cells);
}

ManyBodyTable ManyBodyTable::Builder::finish() {
    std::sort(buckets_.begin(), buckets_.end(),
              [](const Bucket& a, const Bucket& b) { return a.io < b.io; });
    for (Bucket& bucket : buckets_) {
        const std::size_t count = bucket.size();
        auto edge_span = [&](std::size_t k) {
            return std::span<const ClipId>(bucket.ids.data() + k * bucket.width,
                                           bucket.width);
        };
        bool sorted = true;
        for (std::size_t k = 1; k < count; ++k) {
            if (span_compare(edge_span(k - 1), edge_span(k)) >= 0) {
                sorted = false;
                break;
            }
        }
        if (!sorted) {
            std::vector<std::uint32_t> perm(count);
            std::iota(perm.begin(), perm.end(), 0u);
            std::sort(perm.begin(), perm.end(), [&](std::uint32_t a, std::uint32_t b) {
                return span_compare(edge_span(a), edge_span(b)) < 0;
            });
            std::vector<ClipId> ids(bucket.ids.size());
            std::vector<EdgeCells> cells(count);
            for (std::size_t k = 0; k < count; ++k) {
                const auto src = edge_span(perm[k]);
                std::copy(src.begin(), src.end(), ids.begin() + k * bucket.width);
                cells[k] = bucket.cells[perm[k]];
            }
            bucket.ids = std::move(ids);
            bucket.cells = std::move(cells);
            for (std::size_t k = 1; k < count; ++k) {
                if (span_compare(edge_span(k - 1), edge_span(k)) == 0)
                    raise(Errc::integrity,
                          "duplicate hyperedge in bucket " + io_to_string(bucket.io));
            }
        }
    }
    ManyBodyTable table;
    table.clips_ = std::move(clips_);
    table.buckets_ = std::move(buckets_);
    return table;
}

std::vector<IoPair> ManyBodyTable::io_set() const {
    std::vector<IoPair> io;
    io.reserve(buckets_.size());
    for (const Bucket& bucket : buckets_) io.push_back(bucket.io);
    return io;
}

std::size_t ManyBodyTable::parameter_count() const {
    std::size_t count = 0;
    for (const Bucket& bucket : buckets_) count += bucket.size();
    return count;
}

std::pair<std::size_t, std::size_t> ManyBodyTable::domain_range(
    std::size_t bucket, std::span<const ClipId> dom) const {
    const Bucket& b = buckets_[bucket];
    if (dom.size() != static_cast<std::size_t>(b.io.in)) return {0, 0};
    std::size_t lo = 0, hi = b.size();
    while (lo < hi) { // first edge with dom(k) >= dom
        const std::size_t mid = lo + (hi - lo) / 2;
        if (span_compare(b.dom(mid), dom) < 0)
            lo = mid + 1;
        else
            hi = mid;
    }
    const std::size_t first = lo;
    hi = b.size();
    while (lo < hi) { // first edge with dom(k) > dom
        const std::size_t mid = lo + (hi - lo) / 2;
        if (span_compare(b.dom(mid), dom) <= 0)
            lo = mid + 1;
        else
            hi = mid;
    }
    return {first, lo};
}

std::optional<EdgeRef> ManyBodyTable::find(IoPair io, std::span<const ClipId> dom,
                                           std::span<const ClipId> cod) const {
    for (std::size_t b = 0; b < buckets_.size(); ++b) {
        if (!(buckets_[b].io == io)) continue;
        auto [first, last] = domain_range(b, dom);
        std::size_t lo = first, hi = last;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (span_compare(buckets_[b].cod(mid), cod) < 0)
                lo = mid + 1;
            else
                hi = mid;
        }
        if (lo < last && span_compare(buckets_[b].cod(lo), cod) == 0)
            return EdgeRef{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(lo)};
        return std::nullopt;
    }
    return std::nullopt;
}

Hyperedge ManyBodyTable::edge(EdgeRef ref) const {
    const Bucket& bucket = buckets_[ref.bucket];
    auto dom = bucket.dom(ref.index);
    auto cod = bucket.cod(ref.index);
    return Hyperedge{ExcitationConfig::unchecked({dom.begin(), dom.end()}),
                     ExcitationConfig::unchecked({cod.begin(), cod.end()})};
}

double ManyBodyTable::materialize_h(const EdgeCells& cell, std::uint32_t epoch) const {
    double x = cell.h;
    if (cell.h_step < epoch && lazy_gamma_ != 0.0) {
        const double keep =
            std::pow(1.0 - lazy_gamma_, static_cast<double>(epoch - cell.h_step));
        x = cell.h_init + keep * (cell.h - cell.h_init);
    }
    if (clamp_min_ && x < *clamp_min_) x = *clamp_min_;
    return x;
}

double ManyBodyTable::materialize_glow(const EdgeCells& cell) const {
    if (cell.glow_step == glow_epoch_) return cell.glow;
    return cell.glow *
           std::pow(1.0 - lazy_eta_, static_cast<double>(glow_epoch_ - cell.glow_step));
}

double ManyBodyTable::effective_h(EdgeRef ref) const {
    return materialize_h(buckets_[ref.bucket].cells[ref.index], h_epoch_);
}

double ManyBodyTable::effective_glow(EdgeRef ref) const {
    return materialize_glow(buckets_[ref.bucket].cells[ref.index]);
}

void ManyBodyTable::flush_h() {
    for (Bucket& bucket : buckets_) {
        for (EdgeCells& cell : bucket.cells) {
            cell.h = materialize_h(cell, h_epoch_);
            cell.h_step = h_epoch_;
        }
    }
}

void ManyBodyTable::flush_glow() {
    for (Bucket& bucket : buckets_) {
        for (EdgeCells& cell : bucket.cells) {
            cell.glow = materialize_glow(cell);
            cell.glow_step = glow_epoch_;
        }
    }
}

void ManyBodyTable::glow_begin(double eta) {
    if (eta != lazy_eta_) {
        flush_glow();
        lazy_eta_ = eta;
    }
    glow_epoch_ += 1;
    walk_touched_.clear();
}

void ManyBodyTable::glow_touch(EdgeRef ref) {
    EdgeCells& cell = buckets_[ref.bucket].cells[ref.index];
    if (cell.glow_step == glow_epoch_ && cell.glow == 1.0) return; // already marked
    cell.glow = 1.0;
    cell.glow_step = glow_epoch_;
    walk_touched_.push_back(ref);
}

void ManyBodyTable::h_update(double reward, double gamma, std::optional<double> clamp_min) {
    if (gamma != lazy_gamma_ || clamp_min != clamp_min_) {
        flush_h();
        lazy_gamma_ = gamma;
        clamp_min_ = clamp_min;
    }
    h_epoch_ += 1;
    auto step = [&](EdgeCells& cell, double glow) {
        double x = materialize_h(cell, h_epoch_ - 1);
        x = cell.h_init + (1.0 - gamma) * (x - cell.h_init) + reward * glow;
        if (clamp_min && x < *clamp_min) x = *clamp_min;
        cell.h = x;
        cell.h_step = h_epoch_;
    };
    if (lazy_eta_ == 1.0) {
        // Untraversed glows are exactly zero, so only this walk's edges move
        // beyond plain forgetting.
        for (EdgeRef ref : walk_touched_) {
            EdgeCells& cell = buckets_[ref.bucket].cells[ref.index];
            step(cell, materialize_glow(cell));
            if (touch_tracking_valid_) history_touched_.push_back(ref);
        }
        if (gamma != 0.0) touch_tracking_valid_ = false;
    } else {
        touch_tracking_valid_ = false;
        for (Bucket& bucket : buckets_) {
            for (EdgeCells& cell : bucket.cells) {
                const double glow = materialize_glow(cell);
                cell.glow = glow;
                cell.glow_step = glow_epoch_;
                step(cell, glow);
            }
        }
    }
}

std::pair<bool, std::vector<EdgeRef>> ManyBodyTable::drain_touched() {
    const bool valid = touch_tracking_valid_;
    std::vector<EdgeRef> refs;
    refs.swap(history_touched_);
    std::sort(refs.begin(), refs.end());
    refs.erase(std::unique(refs.begin(), refs.end()), refs.end());
    touch_tracking_valid_ = true;
    if (!valid) refs.clear();
    return {valid, std::move(refs)};
}

ManyBodyTable build_table(std::shared_ptr<const ClipTable> clips,
                          const std::set<IoPair>& io_set,
                          const EdgePredicate& predicate, double h_init) {
    if (io_set.empty()) raise(Errc::config, "io set must be nonempty");
    ManyBodyTable::Builder builder(clips, h_init);
    const std::size_t n = clips->size();
    for (IoPair io : io_set) {
        if (io.in < 1 || io.out < 1)
            raise(Errc::config, "io pair entries must be positive: " + io_to_string(io));
        std::size_t added = 0;
        for_each_combination(n, static_cast<std::size_t>(io.in),
                             [&](std::span<const ClipId> dom) {
            for_each_combination(n, static_cast<std::size_t>(io.out),
                                 [&](std::span<const ClipId> cod) {
                if (io.in == io.out && std::equal(dom.begin(), dom.end(), cod.begin()))
                    return;
                if (predicate(dom, cod)) {
                    builder.add(io, dom, cod);
                    ++added;
                }
            });
        });
        if (added == 0)
            raise(Errc::config, "no admissible hyperedges for io pair " + io_to_string(io));
    }
    return builder.finish();
}

void collect_relevant(const ExcitationConfig& config, const ManyBodyTable& table,
                      BiasKind bias, MatchMode mode, std::uint32_t table_index,
                      std::vector<RelevantEdge>& out) {
    if (config.empty()) raise(Errc::contract, "configuration must be nonempty");
    if (bias != BiasKind::mb1 && !table.clips().layered())
        raise(Errc::config, "layered inductive biases require a layered clip table");

    std::vector<ClipId> shallow;
    std::span<const ClipId> pool(config.ids());
    if (bias == BiasKind::sf && mode == MatchMode::subset) {
        int min_layer = std::numeric_limits<int>::max();
        for (ClipId id : config.ids())
            min_layer = std::min(min_layer, table.clips().layer_of(id));
        for (ClipId id : config.ids())
            if (table.clips().layer_of(id) == min_layer) shallow.push_back(id);
        pool = shallow;
    }

    const auto& buckets = table.buckets();
    for (std::size_t b = 0; b < buckets.size(); ++b) {
        const auto& bucket = buckets[b];
        auto push_range = [&](std::pair<std::size_t, std::size_t> range) {
            for (std::size_t k = range.first; k < range.second; ++k) {
                EdgeRef ref{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(k)};
                out.push_back(RelevantEdge{table_index, ref, table.effective_h(ref)});
            }
        };
        if (mode == MatchMode::exact) {
            if (bucket.io.in != static_cast<int>(config.size())) continue;
            push_range(table.domain_range(b, config.ids()));
        } else {
            if (static_cast<std::size_t>(bucket.io.in) > pool.size()) continue;
            for_each_pool_combination(pool, static_cast<std::size_t>(bucket.io.in),
                                      [&](std::span<const ClipId> dom) {
                push_range(table.domain_range(b, dom));
            });
        }
    }
}

std::vector<RelevantEdge> relevant_hvalues(const ExcitationConfig& config,
                                           const ManyBodyTable& table, BiasKind bias,
                                           MatchMode mode) {
    std::vector<RelevantEdge> out;
    collect_relevant(config, table, bias, mode, 0, out);
    return out;
}

std::vector<double> to_probabilities(const std::vector<double>& hs,
                                     const ProbabilityRule& rule) {
    if (hs.empty()) raise(Errc::contract, "cannot normalize an empty h-value list");
    std::vector<double> probs(hs.size());
    if (rule.kind == ProbabilityRule::Kind::standard_rule) {
        double total = 0.0;
        for (double h : hs) {
            if (!(h > 0.0))
                raise(Errc::numeric,
                      "standard probability rule requires strictly positive h-values");
            total += h;
        }
        for (std::size_t k = 0; k < hs.size(); ++k) probs[k] = hs[k] / total;
    } else {
        double shift = -std::numeric_limits<double>::infinity();
        for (double h : hs) shift = std::max(shift, rule.beta * h);
        double total = 0.0;
        for (std::size_t k = 0; k < hs.size(); ++k) {
            probs[k] = std::exp(rule.beta * hs[k] - shift);
            total += probs[k];
        }
        for (double& p : probs) p /= total;
    }
    return probs;
}

} // namespace meps
