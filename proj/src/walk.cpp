#include "meps/walk.hpp"

#include <algorithm>

namespace meps {

std::function<bool(const ExcitationConfig&, const ClipTable&)> trigger_all_final_layer() {
    return [](const ExcitationConfig& config, const ClipTable& clips) {
        const int depth = clips.depth();
        for (ClipId id : config.ids())
            if (clips.layer_of(id) != depth) return false;
        return !config.empty();
    };
}

std::function<bool(const ExcitationConfig&, const ClipTable&)> trigger_any_final_layer() {
    return [](const ExcitationConfig& config, const ClipTable& clips) {
        const int depth = clips.depth();
        for (ClipId id : config.ids())
            if (clips.layer_of(id) == depth) return true;
        return false;
    };
}

std::function<bool(const ExcitationConfig&, const ClipTable&)> trigger_config_in_set(
    std::set<ExcitationConfig> out_set) {
    return [out_set = std::move(out_set)](const ExcitationConfig& config,
                                          const ClipTable&) {
        return out_set.count(config) != 0;
    };
}

ExcitationConfig couple_in(const Observation& observation, const CouplingMaps& maps) {
    ExcitationConfig config = maps.input_map(observation);
    if (config.empty())
        raise(Errc::mapping, "input coupling produced an empty excitation configuration");
    return config;
}

ExcitationConfig apply_edge(const ExcitationConfig& config, std::span<const ClipId> dom,
                            std::span<const ClipId> cod, BiasKind bias) {
    if (!config.contains_all(dom))
        raise(Errc::contract, "edge domain is not contained in the configuration");
    if (bias == BiasKind::dp)
        return ExcitationConfig::unchecked({cod.begin(), cod.end()});
    std::vector<ClipId> kept;
    kept.reserve(config.size() + cod.size());
    std::set_difference(config.ids().begin(), config.ids().end(), dom.begin(), dom.end(),
                        std::back_inserter(kept));
    std::vector<ClipId> merged;
    merged.reserve(kept.size() + cod.size());
    std::set_union(kept.begin(), kept.end(), cod.begin(), cod.end(),
                   std::back_inserter(merged));
    return ExcitationConfig::unchecked(std::move(merged));
}

ExcitationConfig apply_edge(const ExcitationConfig& config, const Hyperedge& edge,
                            BiasKind bias) {
    return apply_edge(config, edge.domain.ids(), edge.codomain.ids(), bias);
}

namespace {

std::size_t sample_index(const std::vector<double>& probs, Rng& rng) {
    const double u = rng.uniform();
    double cumulative = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        cumulative += probs[k];
        if (u < cumulative) return k;
    }
    return probs.size() - 1;
}

} // namespace

std::optional<StepSample> step(const ExcitationConfig& config,
                               std::span<const ManyBodyTable* const> tables,
                               BiasKind bias, const ProbabilityRule& rule, MatchMode mode,
                               Rng& rng) {
    std::vector<RelevantEdge> relevant;
    for (std::size_t t = 0; t < tables.size(); ++t)
        collect_relevant(config, *tables[t], bias, mode, static_cast<std::uint32_t>(t),
                         relevant);
    if (relevant.empty()) return std::nullopt;

    std::vector<double> hs(relevant.size());
    for (std::size_t k = 0; k < relevant.size(); ++k) hs[k] = relevant[k].h;
    const std::vector<double> probs = to_probabilities(hs, rule);
    const std::size_t pick = sample_index(probs, rng);

    const RelevantEdge& chosen = relevant[pick];
    const ManyBodyTable& table = *tables[chosen.table];
    ExcitationConfig next = apply_edge(config, table.dom_of(chosen.ref),
                                       table.cod_of(chosen.ref), bias);
    return StepSample{chosen, std::move(next)};
}

WalkOutcome walk(const Observation& observation,
                 std::span<const ManyBodyTable* const> tables, const CouplingMaps& maps,
                 const WalkParams& params, Rng& rng) {
    if (params.step_cap < 1) raise(Errc::config, "walk step cap must be >= 1");
    if (tables.empty()) raise(Errc::contract, "walk requires at least one table");

    WalkOutcome outcome;
    WalkRecord& record = outcome.record;
    ExcitationConfig config = couple_in(observation, maps);
    record.configs.push_back(config);
    const ClipTable& clips = tables[0]->clips();

    for (;;) {
        if (maps.output_trigger(config, clips)) {
            record.terminated_by = WalkEnd::action_coupled_out;
            outcome.action = maps.output_map(config, clips);
            return outcome;
        }
        if (record.steps.size() >= static_cast<std::size_t>(params.step_cap)) {
            record.terminated_by = WalkEnd::step_cap;
            return outcome;
        }
        std::optional<StepSample> sample = step(config, tables, params.bias, params.rule,
                                                params.mode, rng);
        if (!sample) {
            record.terminated_by = WalkEnd::dead_end;
            return outcome;
        }
        const ManyBodyTable& table = *tables[sample->edge.table];
        WalkStep walk_step;
        walk_step.table = sample->edge.table;
        walk_step.ref = sample->edge.ref;
        walk_step.io = table.io_of(sample->edge.ref);
        walk_step.edge = table.edge(sample->edge.ref);
        record.steps.push_back(std::move(walk_step));
        config = std::move(sample->next);
        record.configs.push_back(config);
        if (params.length_bound && record.steps.size() > *params.length_bound)
            raise(Errc::contract,
                  "walk exceeded its analytic length bound of " +
                      std::to_string(*params.length_bound));
    }
}

} // namespace meps
