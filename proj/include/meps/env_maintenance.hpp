#pragma once

#include <map>
#include <string>
#include <vector>

#include "meps/bounds.hpp"
#include "meps/rng.hpp"
#include "meps/types.hpp"

namespace meps {

// Integer encodings of the Computer Maintenance world: symptoms 1-10,
// fixes 11-14, components 15-19, causes 20-24.
inline constexpr int kSymptomFirst = 1, kSymptomLast = 10;
inline constexpr int kFixFirst = 11, kFixLast = 14;
inline constexpr int kComponentFirst = 15, kComponentLast = 19;
inline constexpr int kCauseFirst = 20, kCauseLast = 24;

// Clip categories used by maintenance agents.
inline constexpr int kCatSymptom = 0;
inline constexpr int kCatComponent = 1;
inline constexpr int kCatCause = 2;
inline constexpr int kCatActionComponent = 3;
inline constexpr int kCatFix = 4;

const std::string& maintenance_code_name(int code);

// Ground truth of one episode: the symptom set shown to the agent and the
// component/cause/fix sets it must reproduce exactly.
struct Scenario {
    std::vector<int> symptoms;
    std::vector<int> components;
    std::vector<int> causes;
    std::vector<int> fixes;
};

// fix code -> causes, any of which justifies applying the fix.
using CompatTable = std::map<int, std::vector<int>>;

CompatTable default_compat();
CompatTable load_compat(const std::string& path);
void save_compat(const CompatTable& compat, const std::string& path);

struct HiddenChoice {
    std::vector<int> components;
    std::vector<int> causes;
};

struct ActionChoice {
    std::vector<int> components;
    std::vector<int> fixes;
};

// +5 when both hidden sets match the scenario exactly, otherwise -10; in both
// cases minus an excess term that reaches -1 when the agent picks the maximal
// cutoff-allowed surplus of elements.
double hypothesis_reward(const HiddenChoice& hidden, const Scenario& scenario,
                         const MaintenanceCutoffs& cutoffs);

// Sum of the action-layer match term (excess penalty quadrupled), the
// hidden/action component consistency term (+1 exact, +0.25 subset, -2
// otherwise) and the per-fix causal term (+0.3/n_fix justified, -4/n_fix not).
double plausibility_reward(const HiddenChoice& hidden, const ActionChoice& action,
                           const Scenario& scenario, const CompatTable& compat,
                           const MaintenanceCutoffs& cutoffs);

struct MatchBonus {
    double hypothesis = 0.0;
    double plausibility = 0.0;
    bool done = false;
};

MatchBonus exact_match_bonus(const HiddenChoice& hidden, const ActionChoice& action,
                             const Scenario& scenario);

// f(R; b) = max(R - theta(b) * ln(b+1)/4, -16) with b = steps - a_max.
double shape_reward(double reward, long long steps, long long a_max);

void validate_scenarios(const std::vector<Scenario>& scenarios,
                        const CompatTable& compat, std::size_t expected_count = 44);
std::vector<Scenario> load_scenarios(const std::string& path, const CompatTable& compat,
                                     std::size_t expected_count = 44);
void save_scenarios(const std::vector<Scenario>& scenarios, const std::string& path);

// Deterministic scenario sampler honoring all file invariants: distinct
// symptom pairs (the Fig.-5 scenario ships first), component sets of size
// 1..3, cause sets of size 1..2 justifying every chosen fix, distinct
// (components, causes) pairs.
std::vector<Scenario> generate_scenarios(Rng& rng, const CompatTable& compat,
                                         std::size_t count = 44);

struct MaintenanceOutcome {
    double hypothesis_reward = 0.0;
    double plausibility_reward = 0.0;
    bool done = false;
};

class MaintenanceEnv {
public:
    MaintenanceEnv(std::vector<Scenario> scenarios, CompatTable compat,
                   MaintenanceCutoffs cutoffs, long long a_max, long long step_cap);

    void reset(Rng& rng);
    Observation observation() const; // the episode's symptom codes
    MaintenanceOutcome step(const HiddenChoice& hidden, const ActionChoice& action);

    long long steps_taken() const { return steps_taken_; }
    bool solved() const { return solved_; }
    const Scenario& current() const;
    const std::vector<Scenario>& scenarios() const { return scenarios_; }
    const CompatTable& compat() const { return compat_; }
    const MaintenanceCutoffs& cutoffs() const { return cutoffs_; }

private:
    std::vector<Scenario> scenarios_;
    CompatTable compat_;
    MaintenanceCutoffs cutoffs_;
    long long a_max_ = 500;
    long long step_cap_ = 1000;
    std::size_t current_ = 0;
    long long steps_taken_ = 0;
    bool solved_ = false;
    bool episode_open_ = false;
    bool has_episode_ = false;
};

} // namespace meps
