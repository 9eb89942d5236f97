#pragma once

#include <optional>
#include <vector>

#include "meps/error.hpp"
#include "meps/rng.hpp"

namespace meps {

// Dense tabular Q-table over an indexed (state, action) product space.
// Selection is a pure argmax with uniform random tie-breaking; there is no
// epsilon exploration.
class QTable {
public:
    QTable(std::size_t n_states, std::size_t n_actions, double alpha, double lambda,
           double q_init);

    std::size_t n_states() const { return n_states_; }
    std::size_t n_actions() const { return n_actions_; }
    double alpha() const { return alpha_; }
    double lambda() const { return lambda_; }

    double at(std::size_t state, std::size_t action) const;
    std::size_t select(std::size_t state, Rng& rng) const;
    std::vector<std::size_t> argmax_set(std::size_t state) const;
    double row_max(std::size_t state) const;

    // Q <- (1-alpha) Q + alpha (R + lambda max_a' Q(next, a')); the next-state
    // term is 0 when `next_state` is absent (contextual-bandit updates).
    void update(std::size_t state, std::size_t action, double reward,
                std::optional<std::size_t> next_state);

    const std::vector<double>& raw() const { return q_; }

private:
    std::size_t n_states_;
    std::size_t n_actions_;
    double alpha_;
    double lambda_;
    std::vector<double> q_;

    void check_state(std::size_t state) const;
};

// PS-inspired multi-layer Q agent: one table per adjacent layer pair, the
// argmax of each layer feeding the next.
class MultiLayerQAgent {
public:
    explicit MultiLayerQAgent(std::vector<QTable> tables);

    const std::vector<QTable>& tables() const { return tables_; }
    QTable& table(std::size_t k) { return tables_[k]; }

    // Greedy chain C*_1 .. C*_n from the percept key.
    std::vector<std::size_t> select_chain(std::size_t percept_key, Rng& rng) const;

    // Applies each layer's update with that layer's reward. chain[k] is the
    // key chosen by table k from state chain[k-1] (percept_key for k = 0).
    void update_chain(std::size_t percept_key, const std::vector<std::size_t>& chain,
                      const std::vector<double>& rewards);

private:
    std::vector<QTable> tables_;
};

} // namespace meps
