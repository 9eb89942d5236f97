#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "meps/types.hpp"

namespace meps {

// Inductive-bias variants. mb1 is the plain many-body bias; ff adds the
// feed-forward layer condition; sf restricts transitions to the shallowest
// occupied layer; dp discards passive excitations after each step.
enum class BiasKind { mb1, ff, sf, dp };

// How relevant edges are matched against the current configuration. `subset`
// is the standard rule (domain contained in the configuration); `exact`
// models agents that always consume the full configuration, such as the
// unrestricted maintenance agent.
enum class MatchMode { subset, exact };

struct ProbabilityRule {
    enum class Kind { standard_rule, softmax };

    Kind kind = Kind::softmax;
    double h_min = 0.0; // standard rule only
    double beta = 1.0;  // softmax only

    static ProbabilityRule standard(double h_min);
    static ProbabilityRule softmax(double beta);
};

using EdgePredicate =
    std::function<bool(std::span<const ClipId>, std::span<const ClipId>)>;

// Built-in admissibility predicates.
EdgePredicate predicate_all();
EdgePredicate predicate_feed_forward(std::shared_ptr<const ClipTable> clips);
// Per-category limits on domain and codomain membership: a missing category
// entry means "not allowed". Counts per category must be >= 1 and <= limit.
EdgePredicate predicate_category_cutoffs(std::shared_ptr<const ClipTable> clips,
                                         std::vector<std::pair<int, int>> domain_limits,
                                         std::vector<std::pair<int, int>> codomain_limits);
EdgePredicate predicate_and(EdgePredicate a, EdgePredicate b);

// Trainable state of one stored hyperedge. `h_step`/`glow_step` support lazy
// materialization of forgetting and glow damping (see learning.hpp).
struct EdgeCells {
    double h = 0.0;
    double h_init = 0.0;
    double glow = 0.0;
    std::uint32_t h_step = 0;
    std::uint32_t glow_step = 0;
};

struct EdgeRef {
    std::uint32_t bucket = 0;
    std::uint32_t index = 0;

    bool operator==(const EdgeRef& other) const {
        return bucket == other.bucket && index == other.index;
    }
    bool operator<(const EdgeRef& other) const {
        if (bucket != other.bucket) return bucket < other.bucket;
        return index < other.index;
    }
};

// Sparse store of many-body h-values keyed by (i,o) and hyperedge. Edges of
// one (i,o) live in a contiguous bucket sorted lexicographically by
// (domain, codomain), so domain lookups are binary searches and iteration
// order is canonical.
class ManyBodyTable {
public:
    struct Bucket {
        IoPair io;
        std::uint32_t width = 0; // io.in + io.out ids per edge
        std::vector<ClipId> ids; // edge k occupies [k*width, (k+1)*width)
        std::vector<EdgeCells> cells;

        std::size_t size() const { return cells.size(); }
        std::span<const ClipId> dom(std::size_t k) const {
            return {ids.data() + k * width, static_cast<std::size_t>(io.in)};
        }
        std::span<const ClipId> cod(std::size_t k) const {
            return {ids.data() + k * width + io.in, static_cast<std::size_t>(io.out)};
        }
    };

    class Builder {
    public:
        Builder(std::shared_ptr<const ClipTable> clips, double h_init);

        void reserve(IoPair io, std::size_t edges);
        void add(IoPair io, std::span<const ClipId> dom, std::span<const ClipId> cod);
        void add(IoPair io, std::span<const ClipId> dom, std::span<const ClipId> cod,
                 double h, double h_init, double glow);
        ManyBodyTable finish(); // sorts buckets, rejects duplicate edges

    private:
        std::shared_ptr<const ClipTable> clips_;
        double h_init_;
        std::vector<Bucket> buckets_;
        std::size_t bucket_for(IoPair io);
    };

    const ClipTable& clips() const { return *clips_; }
    const std::shared_ptr<const ClipTable>& clips_ptr() const { return clips_; }

    const std::vector<Bucket>& buckets() const { return buckets_; }
    std::vector<IoPair> io_set() const;
    std::size_t parameter_count() const;

    std::optional<EdgeRef> find(IoPair io, std::span<const ClipId> dom,
                                std::span<const ClipId> cod) const;
    Hyperedge edge(EdgeRef ref) const;
    IoPair io_of(EdgeRef ref) const { return buckets_[ref.bucket].io; }
    std::span<const ClipId> dom_of(EdgeRef ref) const {
        return buckets_[ref.bucket].dom(ref.index);
    }
    std::span<const ClipId> cod_of(EdgeRef ref) const {
        return buckets_[ref.bucket].cod(ref.index);
    }

    // Trainable-state reads; lazily pending forgetting/damping is
    // materialized into the returned value without mutating the table.
    double effective_h(EdgeRef ref) const;
    double effective_glow(EdgeRef ref) const;
    double h_init_of(EdgeRef ref) const {
        return buckets_[ref.bucket].cells[ref.index].h_init;
    }

    // --- update machinery (driven by learning.hpp) ---

    // Starts one glow update: bumps the glow epoch and fixes eta for the
    // pending span. Traversed edges are then marked with glow_touch.
    void glow_begin(double eta);
    void glow_touch(EdgeRef ref);
    // Applies one h update to every stored edge. When eta == 1 untraversed
    // glows are zero and the update runs in O(traversed); otherwise a full
    // sweep materializes every edge.
    void h_update(double reward, double gamma, std::optional<double> clamp_min);

    // Edges whose h changed since the last drain, sorted and deduplicated.
    // `first` is false when per-edge tracking was invalidated (an update ran
    // with gamma != 0 or eta != 1, touching every edge).
    std::pair<bool, std::vector<EdgeRef>> drain_touched();

    // First edge index in the bucket whose domain equals `dom`, plus the
    // one-past-last index; empty range if absent.
    std::pair<std::size_t, std::size_t> domain_range(std::size_t bucket,
                                                     std::span<const ClipId> dom) const;

private:
    friend class Builder;

    std::shared_ptr<const ClipTable> clips_;
    std::vector<Bucket> buckets_;

    std::uint32_t h_epoch_ = 0;
    std::uint32_t glow_epoch_ = 0;
    double lazy_gamma_ = 0.0;
    double lazy_eta_ = 1.0;
    std::optional<double> clamp_min_;

    std::vector<EdgeRef> walk_touched_;    // marked by glow_touch this epoch
    std::vector<EdgeRef> history_touched_; // accumulated for drain_touched
    bool touch_tracking_valid_ = true;

    double materialize_h(const EdgeCells& cell, std::uint32_t epoch) const;
    double materialize_glow(const EdgeCells& cell) const;
    void flush_h();
    void flush_glow();
};

// Enumerates E^(i,o)_all filtered by `predicate` with size-bounded subset
// loops and returns the table with every surviving edge at h = h_init,
// glow = 0. Configuration error if some (i,o) produces no edges.
ManyBodyTable build_table(std::shared_ptr<const ClipTable> clips,
                          const std::set<IoPair>& io_set,
                          const EdgePredicate& predicate, double h_init);

struct RelevantEdge {
    std::uint32_t table = 0; // index within a multi-table agent
    EdgeRef ref;
    double h = 0.0;
};

// Edges applicable to `config`: domain contained in the configuration
// (domain equal to it under MatchMode::exact), restricted to the shallowest
// occupied layer under the sf bias. Deterministic order: (i,o), then domain,
// then codomain.
std::vector<RelevantEdge> relevant_hvalues(const ExcitationConfig& config,
                                           const ManyBodyTable& table, BiasKind bias,
                                           MatchMode mode = MatchMode::subset);
void collect_relevant(const ExcitationConfig& config, const ManyBodyTable& table,
                      BiasKind bias, MatchMode mode, std::uint32_t table_index,
                      std::vector<RelevantEdge>& out);

// Normalized probability vector from raw h-values. Standard rule requires
// strictly positive entries; softmax is computed with max-subtraction.
std::vector<double> to_probabilities(const std::vector<double>& hs,
                                     const ProbabilityRule& rule);

inline std::size_t count_parameters(const ManyBodyTable& table) {
    return table.parameter_count();
}

} // namespace meps
