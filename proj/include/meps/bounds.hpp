#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "meps/table.hpp"
#include "meps/walk.hpp"

namespace meps {

// One analytic-vs-observed check emitted by the auditor.
struct BoundReport {
    std::string bound_name;
    long long analytic_value = 0;
    bool analytic_refused = false; // value exceeded the 2^63 refusal threshold
    long long observed_value = 0;
    bool lower_bound = false;
    bool satisfied = false;
};

// max I * max O * |V|^{max IO}; refuses results above 2^63 - 1.
unsigned long long param_bound(const std::set<IoPair>& io_set, std::size_t v_size);

// Costs of the unrestricted agent: ((2^v - 1)^2, 2^v - 1). Refuses v > 40 and
// any value above 2^63 - 1.
std::pair<unsigned long long, unsigned long long> unrestricted_costs(int v_size);

// Analytic walk-length bound per bias. mb1 walks are unbounded (nullopt).
// ff: prod_{j<D} (|L_j|+1), or (D-1) * sum_j |L_j| when every io pair has
// o <= i; sf: sum_{j<D} |L_j|; dp: D-1.
std::optional<unsigned long long> walk_length_bound(BiasKind bias,
                                                    const std::vector<int>& layer_sizes,
                                                    const std::set<IoPair>& io_set);

// Deterministic deep-to-shallow avalanche walk with IO = {(1, o)}; its length
// is s * (o^{D-1} - 1) / (o - 1) >= o^{D-1} for s >= o starting excitations.
struct AvalancheWalk {
    std::shared_ptr<const ClipTable> clips;
    WalkRecord walk;
};
AvalancheWalk avalanche_walk(const std::vector<int>& layer_sizes, int o,
                             int start_excitations);

struct MaintenanceCutoffs {
    int n_s = 0;  // symptoms per domain, percept layer
    int n_hc = 0; // components per hidden choice
    int n_c = 0;  // causes per hidden choice
    int n_ac = 0; // components per action choice
    int n_f = 0;  // fixes per action choice
};

struct MaintenanceSizes {
    int symptoms = 10;
    int components = 5;
    int causes = 5;
    int fixes = 4;
};

// Exact count of trainable parameters of the layered maintenance agent.
unsigned long long nl_formula(const MaintenanceCutoffs& cutoffs,
                              const MaintenanceSizes& sizes);

} // namespace meps
