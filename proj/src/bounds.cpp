#include "meps/bounds.hpp"

#include <algorithm>
#include <string>

namespace meps {

namespace {

constexpr unsigned long long kRefusal = 0x7fffffffffffffffULL; // 2^63 - 1

unsigned long long checked_mul(unsigned long long a, unsigned long long b,
                               const char* what) {
    const unsigned __int128 wide = static_cast<unsigned __int128>(a) * b;
    if (wide > kRefusal)
        raise(Errc::numeric, std::string(what) + " exceeds the 2^63 refusal threshold");
    return static_cast<unsigned long long>(wide);
}

unsigned long long checked_add(unsigned long long a, unsigned long long b,
                               const char* what) {
    if (a > kRefusal - b)
        raise(Errc::numeric, std::string(what) + " exceeds the 2^63 refusal threshold");
    return a + b;
}

unsigned long long checked_pow(unsigned long long base, unsigned exponent,
                               const char* what) {
    unsigned long long value = 1;
    for (unsigned k = 0; k < exponent; ++k) value = checked_mul(value, base, what);
    return value;
}

unsigned long long binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned long long value = 1;
    for (unsigned j = 1; j <= k; ++j) {
        value = checked_mul(value, n - k + j, "binomial coefficient");
        value /= j;
    }
    return value;
}

void validate_layers(const std::vector<int>& layer_sizes) {
    if (layer_sizes.empty()) raise(Errc::config, "layer sizes must be nonempty");
    for (int size : layer_sizes)
        if (size < 1) raise(Errc::config, "layer sizes must be positive");
}

} // namespace

unsigned long long param_bound(const std::set<IoPair>& io_set, std::size_t v_size) {
    if (io_set.empty()) raise(Errc::config, "io set must be nonempty");
    unsigned long long max_i = 0, max_o = 0, max_io = 0;
    for (IoPair io : io_set) {
        if (io.in < 1 || io.out < 1)
            raise(Errc::config, "io pair entries must be positive");
        max_i = std::max<unsigned long long>(max_i, io.in);
        max_o = std::max<unsigned long long>(max_o, io.out);
        max_io = std::max<unsigned long long>(max_io, io.in + io.out);
    }
    unsigned long long bound = checked_pow(v_size, static_cast<unsigned>(max_io),
                                           "parameter bound");
    bound = checked_mul(bound, max_i, "parameter bound");
    bound = checked_mul(bound, max_o, "parameter bound");
    return bound;
}

std::pair<unsigned long long, unsigned long long> unrestricted_costs(int v_size) {
    if (v_size < 1) raise(Errc::config, "v_size must be >= 1");
    if (v_size > 40)
        raise(Errc::numeric, "unrestricted costs overflow for v_size > 40");
    const unsigned __int128 configs = (static_cast<unsigned __int128>(1) << v_size) - 1;
    const unsigned __int128 params = configs * configs;
    if (params > kRefusal || configs > kRefusal)
        raise(Errc::numeric,
              "unrestricted costs exceed the 2^63 refusal threshold for v_size = " +
                  std::to_string(v_size));
    return {static_cast<unsigned long long>(params),
            static_cast<unsigned long long>(configs)};
}

std::optional<unsigned long long> walk_length_bound(BiasKind bias,
                                                    const std::vector<int>& layer_sizes,
                                                    const std::set<IoPair>& io_set) {
    if (bias == BiasKind::mb1) return std::nullopt; // cycles make walks unbounded
    validate_layers(layer_sizes);
    const std::size_t depth = layer_sizes.size();
    switch (bias) {
    case BiasKind::ff: {
        bool no_new_excitations = !io_set.empty();
        for (IoPair io : io_set)
            if (io.out > io.in) no_new_excitations = false;
        if (no_new_excitations) {
            unsigned long long total = 0;
            for (int size : layer_sizes)
                total = checked_add(total, static_cast<unsigned long long>(size),
                                    "walk length bound");
            return checked_mul(total, depth - 1, "walk length bound");
        }
        unsigned long long bound = 1;
        for (std::size_t j = 0; j + 1 < depth; ++j)
            bound = checked_mul(bound, static_cast<unsigned long long>(layer_sizes[j]) + 1,
                                "walk length bound");
        return bound;
    }
    case BiasKind::sf: {
        unsigned long long bound = 0;
        for (std::size_t j = 0; j + 1 < depth; ++j)
            bound = checked_add(bound, static_cast<unsigned long long>(layer_sizes[j]),
                                "walk length bound");
        return bound;
    }
    case BiasKind::dp:
        return static_cast<unsigned long long>(depth - 1);
    default:
        raise(Errc::contract, "unknown bias kind");
    }
}

AvalancheWalk avalanche_walk(const std::vector<int>& layer_sizes, int o,
                             int start_excitations) {
    validate_layers(layer_sizes);
    const std::size_t depth = layer_sizes.size();
    if (depth < 2) raise(Errc::config, "avalanche walk requires at least two layers");
    if (o < 2) raise(Errc::config, "avalanche walk requires o >= 2");
    for (std::size_t j = 1; j < depth; ++j) {
        if (layer_sizes[j] < o)
            raise(Errc::config,
                  "avalanche walk requires o <= |L_j| for every layer j >= 2");
    }
    if (start_excitations < o)
        raise(Errc::config, "avalanche walk requires at least o starting excitations");
    if (start_excitations > layer_sizes[0])
        raise(Errc::config, "starting excitations exceed the first layer size");

    auto clips = std::make_shared<ClipTable>();
    std::vector<std::vector<ClipId>> layers(depth);
    for (std::size_t j = 0; j < depth; ++j) {
        for (int k = 0; k < layer_sizes[j]; ++k) {
            layers[j].push_back(clips->add(
                "L" + std::to_string(j + 1) + ":" + std::to_string(k),
                static_cast<int>(j + 1)));
        }
    }

    AvalancheWalk result;
    result.clips = clips;
    WalkRecord& walk = result.walk;

    std::vector<ClipId> start(layers[0].begin(), layers[0].begin() + start_excitations);
    ExcitationConfig config(std::move(start));
    walk.configs.push_back(config);

    for (;;) {
        // deepest non-final layer that still carries an excitation
        int source_layer = 0;
        ClipId source = 0;
        for (ClipId id : config.ids()) {
            const int layer = clips->layer_of(id);
            if (layer < static_cast<int>(depth) && layer > source_layer) {
                source_layer = layer;
                source = id;
            }
        }
        if (source_layer == 0) break; // everything sits in the final layer

        std::vector<ClipId> cod(layers[static_cast<std::size_t>(source_layer)].begin(),
                                layers[static_cast<std::size_t>(source_layer)].begin() + o);
        const ClipId dom[1] = {source};
        ExcitationConfig next = apply_edge(config, std::span<const ClipId>(dom, 1),
                                           std::span<const ClipId>(cod), BiasKind::ff);
        WalkStep step;
        step.table = 0;
        step.ref = EdgeRef{0, 0}; // synthetic walk, no backing table
        step.io = IoPair{1, o};
        step.edge = Hyperedge{ExcitationConfig({source}), ExcitationConfig(cod)};
        walk.steps.push_back(std::move(step));
        config = std::move(next);
        walk.configs.push_back(config);
    }
    walk.terminated_by = WalkEnd::action_coupled_out;
    return result;
}

unsigned long long nl_formula(const MaintenanceCutoffs& cutoffs,
                              const MaintenanceSizes& sizes) {
    if (cutoffs.n_s < 1 || cutoffs.n_hc < 1 || cutoffs.n_c < 1 || cutoffs.n_ac < 1 ||
        cutoffs.n_f < 1)
        raise(Errc::config, "maintenance cutoffs must be positive");
    if (cutoffs.n_s > sizes.symptoms || cutoffs.n_hc > sizes.components ||
        cutoffs.n_c > sizes.causes || cutoffs.n_ac > sizes.components ||
        cutoffs.n_f > sizes.fixes)
        raise(Errc::config, "maintenance cutoffs exceed category sizes");

    auto subset_sum = [](int size, int cutoff) {
        unsigned long long total = 0;
        for (int k = 1; k <= cutoff; ++k)
            total = checked_add(total, binomial(size, k), "nl formula");
        return total;
    };

    unsigned long long hidden = 0;
    for (int k2 = 1; k2 <= cutoffs.n_hc; ++k2) {
        for (int k3 = 1; k3 <= cutoffs.n_c; ++k3) {
            hidden = checked_add(hidden,
                                 checked_mul(binomial(sizes.components, k2),
                                             binomial(sizes.causes, k3), "nl formula"),
                                 "nl formula");
        }
    }
    const unsigned long long percept = subset_sum(sizes.symptoms, cutoffs.n_s);
    unsigned long long action = 0;
    for (int k1 = 1; k1 <= cutoffs.n_ac; ++k1) {
        for (int k4 = 1; k4 <= cutoffs.n_f; ++k4) {
            action = checked_add(action,
                                 checked_mul(binomial(sizes.components, k1),
                                             binomial(sizes.fixes, k4), "nl formula"),
                                 "nl formula");
        }
    }
    return checked_mul(hidden, checked_add(percept, action, "nl formula"), "nl formula");
}

} // namespace meps
