#include "meps/qlearn.hpp"

#include <algorithm>

namespace meps {

QTable::QTable(std::size_t n_states, std::size_t n_actions, double alpha, double lambda,
               double q_init)
    : n_states_(n_states), n_actions_(n_actions), alpha_(alpha), lambda_(lambda),
      q_(n_states * n_actions, q_init) {
    if (n_states_ == 0 || n_actions_ == 0)
        raise(Errc::config, "q-table dimensions must be positive");
    if (!(alpha_ >= 0.0 && alpha_ <= 1.0)) raise(Errc::config, "alpha must lie in [0, 1]");
    if (!(lambda_ >= 0.0 && lambda_ <= 1.0))
        raise(Errc::config, "lambda must lie in [0, 1]");
}

void QTable::check_state(std::size_t state) const {
    if (state >= n_states_) raise(Errc::mapping, "q-table state key out of range");
}

double QTable::at(std::size_t state, std::size_t action) const {
    check_state(state);
    if (action >= n_actions_) raise(Errc::mapping, "q-table action key out of range");
    return q_[state * n_actions_ + action];
}

double QTable::row_max(std::size_t state) const {
    check_state(state);
    const double* row = q_.data() + state * n_actions_;
    return *std::max_element(row, row + n_actions_);
}

std::size_t QTable::select(std::size_t state, Rng& rng) const {
    check_state(state);
    const double* row = q_.data() + state * n_actions_;
    double best = row[0];
    std::size_t ties = 1;
    for (std::size_t a = 1; a < n_actions_; ++a) {
        if (row[a] > best) {
            best = row[a];
            ties = 1;
        } else if (row[a] == best) {
            ++ties;
        }
    }
    std::size_t pick = ties == 1 ? 0 : rng.bounded(ties);
    for (std::size_t a = 0; a < n_actions_; ++a) {
        if (row[a] == best) {
            if (pick == 0) return a;
            --pick;
        }
    }
    raise(Errc::contract, "argmax selection failed");
}

std::vector<std::size_t> QTable::argmax_set(std::size_t state) const {
    check_state(state);
    const double* row = q_.data() + state * n_actions_;
    const double best = row_max(state);
    std::vector<std::size_t> set;
    for (std::size_t a = 0; a < n_actions_; ++a)
        if (row[a] == best) set.push_back(a);
    return set;
}

void QTable::update(std::size_t state, std::size_t action, double reward,
                    std::optional<std::size_t> next_state) {
    check_state(state);
    if (action >= n_actions_) raise(Errc::mapping, "q-table action key out of range");
    const double future = next_state ? row_max(*next_state) : 0.0;
    double& cell = q_[state * n_actions_ + action];
    cell = (1.0 - alpha_) * cell + alpha_ * (reward + lambda_ * future);
}

MultiLayerQAgent::MultiLayerQAgent(std::vector<QTable> tables)
    : tables_(std::move(tables)) {
    if (tables_.empty()) raise(Errc::config, "multi-layer q agent requires tables");
    for (std::size_t k = 1; k < tables_.size(); ++k) {
        if (tables_[k - 1].n_actions() != tables_[k].n_states())
            raise(Errc::config,
                  "table " + std::to_string(k) + " state space must equal table " +
                      std::to_string(k - 1) + " action space");
    }
}

std::vector<std::size_t> MultiLayerQAgent::select_chain(std::size_t percept_key,
                                                        Rng& rng) const {
    std::vector<std::size_t> chain;
    chain.reserve(tables_.size());
    std::size_t key = percept_key;
    for (const QTable& table : tables_) {
        key = table.select(key, rng);
        chain.push_back(key);
    }
    return chain;
}

void MultiLayerQAgent::update_chain(std::size_t percept_key,
                                    const std::vector<std::size_t>& chain,
                                    const std::vector<double>& rewards) {
    if (chain.size() != tables_.size() || rewards.size() != tables_.size())
        raise(Errc::contract, "chain and rewards must cover every layer table");
    std::size_t state = percept_key;
    for (std::size_t k = 0; k < tables_.size(); ++k) {
        tables_[k].update(state, chain[k], rewards[k], std::nullopt);
        state = chain[k];
    }
}

} // namespace meps
