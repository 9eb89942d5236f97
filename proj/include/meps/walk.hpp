#pragma once

#include <functional>
#include <optional>
#include <set>
#include <span>

#include "meps/rng.hpp"
#include "meps/table.hpp"

namespace meps {

enum class WalkEnd { action_coupled_out, step_cap, dead_end };

struct WalkStep {
    std::uint32_t table = 0;
    EdgeRef ref;
    IoPair io;
    Hyperedge edge;
};

// One deliberation: the visited configurations (first entry is the coupled-in
// percept configuration) and the sampled hyperedges between them.
struct WalkRecord {
    std::vector<ExcitationConfig> configs;
    std::vector<WalkStep> steps;
    WalkEnd terminated_by = WalkEnd::dead_end;
};

// Input/output coupling. The trigger decides when deliberation stops and the
// output map converts the final configuration into an action.
struct CouplingMaps {
    std::function<ExcitationConfig(const Observation&)> input_map;
    std::function<bool(const ExcitationConfig&, const ClipTable&)> output_trigger;
    std::function<Action(const ExcitationConfig&, const ClipTable&)> output_map;
};

// Built-in triggers: the feed-forward default (all excitations in the final
// layer), the invasion-game variant (couple out as soon as any final-layer
// clip is excited), and an explicit OUT set.
std::function<bool(const ExcitationConfig&, const ClipTable&)> trigger_all_final_layer();
std::function<bool(const ExcitationConfig&, const ClipTable&)> trigger_any_final_layer();
std::function<bool(const ExcitationConfig&, const ClipTable&)> trigger_config_in_set(
    std::set<ExcitationConfig> out_set);

ExcitationConfig couple_in(const Observation& observation, const CouplingMaps& maps);

// Applies a sampled hyperedge: removes the domain excitations and excites the
// codomain (already-excited clips keep a single excitation). Under dp all
// passive excitations are discarded, leaving exactly the codomain.
ExcitationConfig apply_edge(const ExcitationConfig& config, const Hyperedge& edge,
                            BiasKind bias);
ExcitationConfig apply_edge(const ExcitationConfig& config, std::span<const ClipId> dom,
                            std::span<const ClipId> cod, BiasKind bias);

struct StepSample {
    RelevantEdge edge;
    ExcitationConfig next;
};

// One random-walk step over a set of tables (one per layer pair for layered
// agents; a single-element span otherwise). Draws from the agent stream
// exactly once. Returns nullopt on a dead end.
std::optional<StepSample> step(const ExcitationConfig& config,
                               std::span<const ManyBodyTable* const> tables,
                               BiasKind bias, const ProbabilityRule& rule, MatchMode mode,
                               Rng& rng);

struct WalkParams {
    BiasKind bias = BiasKind::mb1;
    ProbabilityRule rule;
    MatchMode mode = MatchMode::subset;
    int step_cap = 1000;
    // Analytic walk-length bound; when set, exceeding it raises a contract
    // error (assertion mode).
    std::optional<unsigned long long> length_bound;
};

struct WalkOutcome {
    WalkRecord record;
    std::optional<Action> action;
};

// Full deliberation: couple in, step until the output trigger fires, the step
// cap is hit, or no relevant edge exists. Dead ends and cap hits are recorded
// in the outcome, not raised.
WalkOutcome walk(const Observation& observation,
                 std::span<const ManyBodyTable* const> tables, const CouplingMaps& maps,
                 const WalkParams& params, Rng& rng);

} // namespace meps
