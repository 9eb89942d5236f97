#include "meps/env_invasion.hpp"

#include "meps/error.hpp"

namespace meps {

double distraction_reward(const std::array<int, 3>& percept, int action) {
    if (action != 0 && action != 1)
        raise(Errc::contract, "distraction action must be 0 or 1");
    const int right = (percept[0] + percept[1]) % 2;
    return action == right ? 1.0 : -10.0;
}

void DistractionEnv::reset(Rng& rng) {
    for (int& value : percept_) value = static_cast<int>(rng.bounded(kValues));
}

double deception_reward(const DeceptionState& state, int action) {
    if (action < 0 || action >= DeceptionEnv::kActions)
        raise(Errc::contract, "deception action must lie in 0..9");
    const int parity = (state.announced + state.modifier) % 2;
    if (parity == 0) {
        if (action == state.announced) return 2.0;
        return -11.0; // -10 plus the even-case deterrent of -1
    }
    const int right = (state.announced + 1) % 10;
    if (action == right) return 2.0;
    if (action == state.announced) return -11.0; // deceived by the attacker
    return -10.0;
}

void DeceptionEnv::reset(Rng& rng) {
    state_.announced = static_cast<int>(rng.bounded(10));
    state_.modifier = 10 + static_cast<int>(rng.bounded(4));
    state_.distraction = static_cast<int>(rng.bounded(10));
}

} // namespace meps
