#include "meps/learning.hpp"

namespace meps {

void LearningParams::validate() const {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        raise(Errc::config, "gamma must lie in [0, 1]");
    if (!(eta >= 0.0 && eta <= 1.0)) raise(Errc::config, "eta must lie in [0, 1]");
    if (!(h_min >= 0.0)) raise(Errc::config, "h_min must be >= 0");
}

void update_glow(ManyBodyTable& table, const WalkRecord& walk, double eta,
                 std::uint32_t table_index) {
    if (!(eta >= 0.0 && eta <= 1.0)) raise(Errc::config, "eta must lie in [0, 1]");
    table.glow_begin(eta);
    for (const WalkStep& step : walk.steps) {
        if (step.table != table_index) continue;
        std::optional<EdgeRef> ref =
            table.find(step.io, step.edge.domain.ids(), step.edge.codomain.ids());
        if (!ref)
            raise(Errc::integrity, "walk traversed a hyperedge absent from the table");
        table.glow_touch(*ref);
    }
}

void update_h(ManyBodyTable& table, double reward, const LearningParams& params,
              const ProbabilityRule& rule) {
    params.validate();
    std::optional<double> clamp;
    if (rule.kind == ProbabilityRule::Kind::standard_rule)
        clamp = std::max(params.h_min, rule.h_min);
    table.h_update(reward, params.gamma, clamp);
}

void update_split(std::span<ManyBodyTable*> tables, std::span<const double> rewards,
                  const WalkRecord& walk, const LearningParams& params,
                  const ProbabilityRule& rule) {
    if (tables.size() != rewards.size())
        raise(Errc::contract, "update_split requires one reward per table");
    for (std::size_t t = 0; t < tables.size(); ++t) {
        update_glow(*tables[t], walk, params.eta, static_cast<std::uint32_t>(t));
        update_h(*tables[t], rewards[t], params, rule);
    }
}

} // namespace meps
