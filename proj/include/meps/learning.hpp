#pragma once

#include <span>

#include "meps/table.hpp"
#include "meps/walk.hpp"

namespace meps {

struct LearningParams {
    double gamma = 0.0; // forgetting
    double eta = 1.0;   // glow damping
    double h_min = 0.0; // clamp floor, standard rule only

    void validate() const;
};

// Sets glow = 1 on the walk's edges stored in `table` (those whose step index
// carries `table_index`) and damps every other edge's glow by (1 - eta).
// Integrity error if a walk edge is absent from the table.
void update_glow(ManyBodyTable& table, const WalkRecord& walk, double eta,
                 std::uint32_t table_index = 0);

// h <- h - gamma (h - h_init) + R g for every stored edge; under the standard
// probability rule the result is clamped to h_min. update_glow must have run
// for the current walk.
void update_h(ManyBodyTable& table, double reward, const LearningParams& params,
              const ProbabilityRule& rule);

// Reward-split update for layered agents: table k receives the walk's edges
// tagged with table index k and its own reward (glow handles attribution when
// a table has no traversed edge).
void update_split(std::span<ManyBodyTable*> tables, std::span<const double> rewards,
                  const WalkRecord& walk, const LearningParams& params,
                  const ProbabilityRule& rule);

} // namespace meps
