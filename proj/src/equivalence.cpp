#include "meps/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "meps/walk.hpp"

namespace meps {

namespace {

// Own subset test and transition arithmetic so the oracle does not share code
// with the sampling path it is checking.
bool sorted_subset(std::span<const ClipId> small, std::span<const ClipId> big) {
    std::size_t j = 0;
    for (ClipId id : small) {
        while (j < big.size() && big[j] < id) ++j;
        if (j == big.size() || big[j] != id) return false;
        ++j;
    }
    return true;
}

ExcitationConfig oracle_result(const ExcitationConfig& c_in, std::span<const ClipId> dom,
                               std::span<const ClipId> cod, BiasKind bias) {
    if (bias == BiasKind::dp)
        return ExcitationConfig::unchecked({cod.begin(), cod.end()});
    std::vector<ClipId> out;
    for (ClipId id : c_in.ids()) {
        if (!std::binary_search(dom.begin(), dom.end(), id)) out.push_back(id);
    }
    for (ClipId id : cod) {
        auto it = std::lower_bound(out.begin(), out.end(), id);
        if (it == out.end() || *it != id) out.insert(it, id);
    }
    return ExcitationConfig::unchecked(std::move(out));
}

std::vector<ClipId> sf_pool(const ExcitationConfig& config, const ClipTable& clips) {
    int min_layer = std::numeric_limits<int>::max();
    for (ClipId id : config.ids()) min_layer = std::min(min_layer, clips.layer_of(id));
    std::vector<ClipId> pool;
    for (ClipId id : config.ids())
        if (clips.layer_of(id) == min_layer) pool.push_back(id);
    return pool;
}

} // namespace

StandardEcm induce_standard(const ManyBodyTable& table, BiasKind bias,
                            const std::vector<ExcitationConfig>& config_universe,
                            std::size_t cap) {
    if (config_universe.size() > cap)
        raise(Errc::unsupported,
              "config universe of size " + std::to_string(config_universe.size()) +
                  " exceeds the enumeration cap of " + std::to_string(cap));
    if (bias != BiasKind::mb1 && !table.clips().layered())
        raise(Errc::config, "layered inductive biases require a layered clip table");

    StandardEcm ecm;
    for (const ExcitationConfig& c_in : config_universe) {
        if (c_in.empty()) raise(Errc::contract, "config universe entries must be nonempty");
        std::vector<ClipId> pool_ids(c_in.ids());
        if (bias == BiasKind::sf) pool_ids = sf_pool(c_in, table.clips());
        const std::span<const ClipId> pool(pool_ids);
        for (const auto& bucket : table.buckets()) {
            for (std::size_t k = 0; k < bucket.size(); ++k) {
                const auto dom = bucket.dom(k);
                if (!sorted_subset(dom, pool)) continue;
                ExcitationConfig c_out = oracle_result(c_in, dom, bucket.cod(k), bias);
                ecm.edges[{c_in, c_out}] += table.effective_h(
                    EdgeRef{static_cast<std::uint32_t>(&bucket - table.buckets().data()),
                            static_cast<std::uint32_t>(k)});
            }
        }
    }
    return ecm;
}

std::map<ExcitationConfig, double> exact_step_distribution(const ExcitationConfig& config,
                                                           const ManyBodyTable& table,
                                                           BiasKind bias,
                                                           const ProbabilityRule& rule) {
    const std::vector<RelevantEdge> relevant = relevant_hvalues(config, table, bias);
    if (relevant.empty())
        raise(Errc::numeric, "configuration has no relevant h-values (dead end)");
    std::vector<double> hs(relevant.size());
    for (std::size_t k = 0; k < relevant.size(); ++k) hs[k] = relevant[k].h;
    const std::vector<double> probs = to_probabilities(hs, rule);

    std::map<ExcitationConfig, double> distribution;
    for (std::size_t k = 0; k < relevant.size(); ++k) {
        ExcitationConfig next = apply_edge(config, table.dom_of(relevant[k].ref),
                                           table.cod_of(relevant[k].ref), bias);
        distribution[next] += probs[k];
    }
    return distribution;
}

double check_equivalence(const ManyBodyTable& table, BiasKind bias,
                         const ExcitationConfig& config, const ProbabilityRule& rule) {
    if (rule.kind != ProbabilityRule::Kind::standard_rule)
        raise(Errc::unsupported,
              "inference equivalence holds under the standard probability assignment only");

    const auto many_body = exact_step_distribution(config, table, bias, rule);

    const StandardEcm ecm = induce_standard(table, bias, {config});
    double total = 0.0;
    std::map<ExcitationConfig, double> standard;
    for (const auto& [key, h] : ecm.edges) {
        standard[key.second] = h;
        total += h;
    }
    if (!(total > 0.0))
        raise(Errc::numeric, "induced standard row has no positive weight");
    for (auto& [key, h] : standard) h /= total;

    double max_deviation = 0.0;
    for (const auto& [next, p] : many_body) {
        auto it = standard.find(next);
        const double q = it == standard.end() ? 0.0 : it->second;
        max_deviation = std::max(max_deviation, std::abs(p - q));
    }
    for (const auto& [next, q] : standard) {
        if (many_body.count(next) == 0) max_deviation = std::max(max_deviation, q);
    }
    return max_deviation;
}

} // namespace meps
