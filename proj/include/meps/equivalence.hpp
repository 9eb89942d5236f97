#pragma once

#include <map>

#include "meps/table.hpp"

namespace meps {

// Standard-ECM weights induced from a many-body table: one h-value per pair
// of full excitation configurations with at least one contributing summand.
struct StandardEcm {
    std::map<std::pair<ExcitationConfig, ExcitationConfig>, double> edges;
};

// Builds the induced standard h-values over the given configuration universe.
// This is a test instrument: it enumerates summands by brute force with its
// own subset and transition arithmetic, independent of the sampling path.
// Refuses universes larger than `cap`.
StandardEcm induce_standard(const ManyBodyTable& table, BiasKind bias,
                            const std::vector<ExcitationConfig>& config_universe,
                            std::size_t cap = std::size_t{1} << 16);

// Exact next-configuration distribution of one step: relevant edges grouped
// by their resulting configuration, probabilities summed per group.
std::map<ExcitationConfig, double> exact_step_distribution(const ExcitationConfig& config,
                                                           const ManyBodyTable& table,
                                                           BiasKind bias,
                                                           const ProbabilityRule& rule);

// Maximum absolute deviation between the many-body step distribution and the
// induced standard-ECM distribution from `config`. Only defined under the
// standard probability rule; refuses softmax.
double check_equivalence(const ManyBodyTable& table, BiasKind bias,
                         const ExcitationConfig& config, const ProbabilityRule& rule);

} // namespace meps
