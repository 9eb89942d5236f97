#include "meps/env_maintenance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "meps/error.hpp"

namespace meps {

namespace {

const std::map<int, std::string> kCodeNames = {
    {1, "PC overheating"},
    {2, "files disappearing"},
    {3, "visible markings on components"},
    {4, "unexpected shutdowns"},
    {5, "slow performance"},
    {6, "old hardware"},
    {7, "strange noises"},
    {8, "software glitches"},
    {9, "blue screen"},
    {10, "no internet"},
    {11, "replace components"},
    {12, "install missing software"},
    {13, "cooldown computer"},
    {14, "run antivirus"},
    {15, "CPU"},
    {16, "SSD"},
    {17, "MoBo"},
    {18, "PSU"},
    {19, "OS"},
    {20, "physical damage"},
    {21, "software damage"},
    {22, "malware"},
    {23, "faulty"},
    {24, "not connected"},
};

bool sorted_unique(const std::vector<int>& values) {
    for (std::size_t j = 1; j < values.size(); ++j)
        if (values[j] <= values[j - 1]) return false;
    return true;
}

void check_subset(const std::vector<int>& values, int first, int last,
                  const char* what) {
    if (values.empty())
        raise(Errc::config, std::string("scenario ") + what + " set must be nonempty");
    if (values.size() > 3)
        raise(Errc::config,
              std::string("scenario ") + what + " set exceeds 3 elements");
    if (!sorted_unique(values))
        raise(Errc::config,
              std::string("scenario ") + what + " set must be sorted and duplicate-free");
    for (int code : values) {
        if (code < first || code > last)
            raise(Errc::config, std::string("scenario ") + what + " code " +
                                    std::to_string(code) + " outside its range");
    }
}

// Surplus elements relative to the scenario, as a fraction of the largest
// surplus the cutoffs allow, scaled to [-scale, 0].
double excess_penalty(std::size_t chosen_a, std::size_t target_a, int cutoff_a,
                      std::size_t chosen_b, std::size_t target_b, int cutoff_b,
                      double scale) {
    const auto surplus = [](std::size_t chosen, std::size_t target) {
        return chosen > target ? chosen - target : std::size_t{0};
    };
    const auto allowed = [](int cutoff, std::size_t target) {
        const std::size_t c = static_cast<std::size_t>(cutoff);
        return c > target ? c - target : std::size_t{0};
    };
    const std::size_t excess = surplus(chosen_a, target_a) + surplus(chosen_b, target_b);
    const std::size_t max_excess = allowed(cutoff_a, target_a) + allowed(cutoff_b, target_b);
    if (excess == 0 || max_excess == 0) return 0.0;
    const double fraction =
        std::min(1.0, static_cast<double>(excess) / static_cast<double>(max_excess));
    return -scale * fraction;
}

} // namespace

const std::string& maintenance_code_name(int code) {
    auto it = kCodeNames.find(code);
    if (it == kCodeNames.end())
        raise(Errc::mapping, "unknown maintenance code " + std::to_string(code));
    return it->second;
}

CompatTable default_compat() {
    return CompatTable{
        {11, {20, 23}}, // replace components: hardware is damaged or faulty
        {12, {21}},     // install missing software: software damage
        {13, {20, 23}}, // cooldown computer: overheating hardware
        {14, {22}},     // run antivirus: malware
    };
}

CompatTable load_compat(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io, "cannot open compat table: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        raise(Errc::io, "cannot parse compat table " + path + ": " + e.what());
    }
    CompatTable compat;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const int fix = std::stoi(it.key());
        if (fix < kFixFirst || fix > kFixLast)
            raise(Errc::config, "compat table fix code out of range: " + it.key());
        std::vector<int> causes = it.value().get<std::vector<int>>();
        std::sort(causes.begin(), causes.end());
        for (int cause : causes) {
            if (cause < kCauseFirst || cause > kCauseLast)
                raise(Errc::config, "compat table cause code out of range: " +
                                        std::to_string(cause));
        }
        compat[fix] = std::move(causes);
    }
    return compat;
}

void save_compat(const CompatTable& compat, const std::string& path) {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& [fix, causes] : compat) doc[std::to_string(fix)] = causes;
    std::ofstream out(path);
    if (!out) raise(Errc::io, "cannot write compat table: " + path);
    out << doc.dump(2) << "\n";
}

double hypothesis_reward(const HiddenChoice& hidden, const Scenario& scenario,
                         const MaintenanceCutoffs& cutoffs) {
    const bool match = hidden.components == scenario.components &&
                       hidden.causes == scenario.causes;
    double reward = match ? 5.0 : -10.0;
    reward += excess_penalty(hidden.components.size(), scenario.components.size(),
                             cutoffs.n_hc, hidden.causes.size(), scenario.causes.size(),
                             cutoffs.n_c, 1.0);
    return reward;
}

double plausibility_reward(const HiddenChoice& hidden, const ActionChoice& action,
                           const Scenario& scenario, const CompatTable& compat,
                           const MaintenanceCutoffs& cutoffs) {
    const bool match = action.components == scenario.components &&
                       action.fixes == scenario.fixes;
    double reward = match ? 5.0 : -10.0;
    reward += excess_penalty(action.components.size(), scenario.components.size(),
                             cutoffs.n_ac, action.fixes.size(), scenario.fixes.size(),
                             cutoffs.n_f, 4.0);

    // Internal consistency between hypothesis and action components.
    if (action.components == hidden.components) {
        reward += 1.0;
    } else if (std::includes(hidden.components.begin(), hidden.components.end(),
                             action.components.begin(), action.components.end()) &&
               hidden.components.size() > action.components.size()) {
        reward += 0.25;
    } else {
        reward += -2.0;
    }

    // Causal term: each chosen fix must be justified by one of the causes the
    // agent identified.
    const double n_fix = static_cast<double>(scenario.fixes.size());
    for (int fix : action.fixes) {
        auto it = compat.find(fix);
        if (it == compat.end())
            raise(Errc::mapping, "fix code " + std::to_string(fix) +
                                     " missing from the compat table");
        bool justified = false;
        for (int cause : it->second) {
            if (std::binary_search(hidden.causes.begin(), hidden.causes.end(), cause)) {
                justified = true;
                break;
            }
        }
        reward += justified ? 0.3 / n_fix : -4.0 / n_fix;
    }
    return reward;
}

MatchBonus exact_match_bonus(const HiddenChoice& hidden, const ActionChoice& action,
                             const Scenario& scenario) {
    MatchBonus bonus;
    if (hidden.components == scenario.components && hidden.causes == scenario.causes &&
        action.components == scenario.components && action.fixes == scenario.fixes) {
        bonus.hypothesis = 15.0;
        bonus.plausibility = 15.0;
        bonus.done = true;
    }
    return bonus;
}

double shape_reward(double reward, long long steps, long long a_max) {
    if (steps < 0) raise(Errc::contract, "step count must be >= 0");
    const long long b = steps - a_max;
    if (b > 0) reward -= 0.25 * std::log(static_cast<double>(b) + 1.0);
    return std::max(reward, -16.0);
}

void validate_scenarios(const std::vector<Scenario>& scenarios,
                        const CompatTable& compat, std::size_t expected_count) {
    if (scenarios.size() != expected_count)
        raise(Errc::config, "scenario file holds " + std::to_string(scenarios.size()) +
                                " scenarios, expected " + std::to_string(expected_count));
    std::set<std::vector<int>> symptom_sets;
    std::set<std::pair<std::vector<int>, std::vector<int>>> hidden_pairs;
    for (const Scenario& scenario : scenarios) {
        check_subset(scenario.symptoms, kSymptomFirst, kSymptomLast, "symptom");
        check_subset(scenario.components, kComponentFirst, kComponentLast, "component");
        check_subset(scenario.causes, kCauseFirst, kCauseLast, "cause");
        check_subset(scenario.fixes, kFixFirst, kFixLast, "fix");
        if (!symptom_sets.insert(scenario.symptoms).second)
            raise(Errc::config, "scenario symptom sets must be distinct");
        if (!hidden_pairs.insert({scenario.components, scenario.causes}).second)
            raise(Errc::config, "scenario (components, causes) pairs must be distinct");
        for (int fix : scenario.fixes) {
            auto it = compat.find(fix);
            if (it == compat.end())
                raise(Errc::config,
                      "scenario fix " + std::to_string(fix) + " missing from compat");
            bool justified = false;
            for (int cause : it->second)
                justified = justified || std::binary_search(scenario.causes.begin(),
                                                            scenario.causes.end(), cause);
            if (!justified)
                raise(Errc::config, "scenario fix " + std::to_string(fix) +
                                        " is not justified by the scenario causes");
        }
    }
}

std::vector<Scenario> load_scenarios(const std::string& path, const CompatTable& compat,
                                     std::size_t expected_count) {
    std::ifstream in(path);
    if (!in) raise(Errc::io, "cannot open scenario file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        raise(Errc::io, "cannot parse scenario file " + path + ": " + e.what());
    }
    if (!doc.is_array()) raise(Errc::config, "scenario file must hold a JSON array");
    std::vector<Scenario> scenarios;
    for (const auto& entry : doc) {
        Scenario scenario;
        scenario.symptoms = entry.at("symptoms").get<std::vector<int>>();
        scenario.components = entry.at("components").get<std::vector<int>>();
        scenario.causes = entry.at("causes").get<std::vector<int>>();
        scenario.fixes = entry.at("fixes").get<std::vector<int>>();
        auto canonical = [](std::vector<int>& v) { std::sort(v.begin(), v.end()); };
        canonical(scenario.symptoms);
        canonical(scenario.components);
        canonical(scenario.causes);
        canonical(scenario.fixes);
        scenarios.push_back(std::move(scenario));
    }
    validate_scenarios(scenarios, compat, expected_count);
    return scenarios;
}

void save_scenarios(const std::vector<Scenario>& scenarios, const std::string& path) {
    nlohmann::json doc = nlohmann::json::array();
    for (const Scenario& scenario : scenarios) {
        doc.push_back({{"symptoms", scenario.symptoms},
                       {"components", scenario.components},
                       {"causes", scenario.causes},
                       {"fixes", scenario.fixes}});
    }
    std::ofstream out(path);
    if (!out) raise(Errc::io, "cannot write scenario file: " + path);
    out << doc.dump(2) << "\n";
}

std::vector<Scenario> generate_scenarios(Rng& rng, const CompatTable& compat,
                                         std::size_t count) {
    std::vector<std::vector<int>> pairs;
    for (int a = kSymptomFirst; a <= kSymptomLast; ++a)
        for (int b = a + 1; b <= kSymptomLast; ++b)
            if (!(a == 2 && b == 3)) pairs.push_back({a, b});
    if (count > pairs.size() + 1)
        raise(Errc::config, "cannot generate more scenarios than distinct symptom pairs");

    std::vector<Scenario> scenarios;
    // The worked example from the paper's walkthrough ships verbatim.
    scenarios.push_back(Scenario{{2, 3}, {16, 17}, {20, 21}, {11}});

    std::set<std::pair<std::vector<int>, std::vector<int>>> hidden_pairs;
    hidden_pairs.insert({scenarios[0].components, scenarios[0].causes});

    // Draw symptom pairs without replacement.
    for (std::size_t j = pairs.size(); j > 1; --j)
        std::swap(pairs[j - 1], pairs[rng.bounded(j)]);

    std::vector<int> all_fixes, all_causes, all_components;
    for (int f = kFixFirst; f <= kFixLast; ++f) all_fixes.push_back(f);
    for (int c = kCauseFirst; c <= kCauseLast; ++c) all_causes.push_back(c);
    for (int c = kComponentFirst; c <= kComponentLast; ++c) all_components.push_back(c);

    auto pick_subset = [&](const std::vector<int>& pool, std::size_t size) {
        std::vector<int> local = pool;
        for (std::size_t j = local.size(); j > 1; --j)
            std::swap(local[j - 1], local[rng.bounded(j)]);
        local.resize(size);
        std::sort(local.begin(), local.end());
        return local;
    };

    std::size_t pair_index = 0;
    while (scenarios.size() < count) {
        if (pair_index >= pairs.size())
            raise(Errc::config, "scenario generation ran out of symptom pairs");
        Scenario scenario;
        scenario.symptoms = pairs[pair_index++];
        for (int attempt = 0; attempt < 64; ++attempt) {
            scenario.fixes = pick_subset(all_fixes, 1 + rng.bounded(2));
            // Minimal cause set justifying every fix, then an optional extra.
            std::set<int> causes;
            for (int fix : scenario.fixes) {
                const auto& justifiers = compat.at(fix);
                bool covered = false;
                for (int cause : justifiers) covered = covered || causes.count(cause) > 0;
                if (!covered)
                    causes.insert(justifiers[rng.bounded(justifiers.size())]);
            }
            if (causes.size() < 2 && rng.bounded(2) == 0) {
                std::vector<int> extras;
                for (int cause : all_causes)
                    if (causes.count(cause) == 0) extras.push_back(cause);
                causes.insert(extras[rng.bounded(extras.size())]);
            }
            scenario.causes.assign(causes.begin(), causes.end());
            scenario.components = pick_subset(all_components, 1 + rng.bounded(3));
            if (hidden_pairs.insert({scenario.components, scenario.causes}).second)
                break;
            if (attempt == 63)
                raise(Errc::config, "scenario generation could not find a fresh "
                                    "(components, causes) pair");
        }
        scenarios.push_back(std::move(scenario));
    }
    validate_scenarios(scenarios, compat, count);
    return scenarios;
}

MaintenanceEnv::MaintenanceEnv(std::vector<Scenario> scenarios, CompatTable compat,
                               MaintenanceCutoffs cutoffs, long long a_max,
                               long long step_cap)
    : scenarios_(std::move(scenarios)), compat_(std::move(compat)), cutoffs_(cutoffs),
      a_max_(a_max), step_cap_(step_cap) {
    if (scenarios_.empty()) raise(Errc::config, "maintenance requires scenarios");
    if (a_max_ < 1 || step_cap_ < 1)
        raise(Errc::config, "a_max and step_cap must be positive");
}

void MaintenanceEnv::reset(Rng& rng) {
    current_ = rng.bounded(scenarios_.size());
    steps_taken_ = 0;
    solved_ = false;
    episode_open_ = true;
    has_episode_ = true;
}

Observation MaintenanceEnv::observation() const {
    if (!has_episode_) raise(Errc::contract, "no episode; call reset first");
    return scenarios_[current_].symptoms;
}

const Scenario& MaintenanceEnv::current() const {
    if (!has_episode_) raise(Errc::contract, "no episode; call reset first");
    return scenarios_[current_];
}

MaintenanceOutcome MaintenanceEnv::step(const HiddenChoice& hidden,
                                        const ActionChoice& action) {
    if (!episode_open_) raise(Errc::contract, "no open episode; call reset first");
    steps_taken_ += 1;
    const Scenario& scenario = scenarios_[current_];
    const MatchBonus bonus = exact_match_bonus(hidden, action, scenario);
    MaintenanceOutcome outcome;
    outcome.hypothesis_reward =
        shape_reward(hypothesis_reward(hidden, scenario, cutoffs_) + bonus.hypothesis,
                     steps_taken_, a_max_);
    outcome.plausibility_reward = shape_reward(
        plausibility_reward(hidden, action, scenario, compat_, cutoffs_) +
            bonus.plausibility,
        steps_taken_, a_max_);
    solved_ = bonus.done;
    outcome.done = bonus.done || steps_taken_ >= step_cap_;
    if (outcome.done) episode_open_ = false;
    return outcome;
}

} // namespace meps
