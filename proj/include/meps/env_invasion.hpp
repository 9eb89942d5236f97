#pragma once

#include <array>

#include "meps/rng.hpp"
#include "meps/types.hpp"

namespace meps {

// Invasion Game with Distraction: percepts (v1, v2, v3) in {0..9}^3 drawn
// i.i.d. uniform each round, two doors, the right door is (v1 + v2) mod 2;
// v3 carries no information.
double distraction_reward(const std::array<int, 3>& percept, int action);

class DistractionEnv {
public:
    static constexpr int kObservables = 3;
    static constexpr int kValues = 10;
    static constexpr int kActions = 2;

    void reset(Rng& rng);
    const std::array<int, 3>& percept() const { return percept_; }
    Observation observation() const { return {percept_[0], percept_[1], percept_[2]}; }
    double reward(int action) const { return distraction_reward(percept_, action); }

private:
    std::array<int, 3> percept_{0, 0, 0};
};

// Deceptive Invasion Game: v1 in 0..9 announces a door, v2 in 10..13 sets the
// parity with v1, v3 in 0..9 is a distraction. Even parity: the announced
// door pays +2, every other door -11. Odd parity: the next door over (mod 10)
// pays +2, the announced door -11, every other door -10.
struct DeceptionState {
    int announced = 0;   // v1
    int modifier = 10;   // v2
    int distraction = 0; // v3
};

double deception_reward(const DeceptionState& state, int action);

class DeceptionEnv {
public:
    static constexpr int kActions = 10;

    void reset(Rng& rng);
    const DeceptionState& state() const { return state_; }
    Observation observation() const {
        return {state_.announced, state_.modifier, state_.distraction};
    }
    double reward(int action) const { return deception_reward(state_, action); }

private:
    DeceptionState state_;
};

} // namespace meps
