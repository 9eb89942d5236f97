#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "meps/error.hpp"

namespace meps {

using ClipId = std::uint32_t;

// An atomic clip: one vertex of the episodic memory. `layer` is 1-based
// (0 = unlayered); `category` is an environment tag such as an observable
// index or a symptom/component/cause/fix class (-1 = none).
struct Clip {
    ClipId id = 0;
    std::string label;
    int layer = 0;
    int category = -1;
};

class ClipTable {
public:
    ClipId add(std::string label, int layer = 0, int category = -1);

    std::size_t size() const { return clips_.size(); }
    const Clip& at(ClipId id) const;
    const std::vector<Clip>& all() const { return clips_; }

    bool has_label(const std::string& label) const;
    ClipId id_of(const std::string& label) const; // mapping error if absent

    // Layer queries. A table is layered when every clip carries a layer;
    // mixing layered and unlayered clips is a configuration error.
    bool layered() const;
    int depth() const { return max_layer_; }
    int layer_of(ClipId id) const { return at(id).layer; }
    std::vector<int> layer_sizes() const; // index j holds |L_{j+1}|

private:
    std::vector<Clip> clips_;
    std::unordered_map<std::string, ClipId> by_label_;
    int max_layer_ = 0;
    bool any_unlayered_ = false;
};

// A duplicate-free set of clip ids in canonical ascending order; the state of
// the random walk.
class ExcitationConfig {
public:
    ExcitationConfig() = default;
    explicit ExcitationConfig(std::vector<ClipId> ids); // sorts; rejects duplicates
    ExcitationConfig(std::initializer_list<ClipId> ids)
        : ExcitationConfig(std::vector<ClipId>(ids)) {}

    // Caller guarantees `ids` is sorted and duplicate-free.
    static ExcitationConfig unchecked(std::vector<ClipId> ids);

    const std::vector<ClipId>& ids() const { return ids_; }
    std::size_t size() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }

    bool contains(ClipId id) const;
    bool contains_all(std::span<const ClipId> sorted_ids) const;

    bool operator==(const ExcitationConfig& other) const { return ids_ == other.ids_; }
    bool operator<(const ExcitationConfig& other) const { return ids_ < other.ids_; }

private:
    std::vector<ClipId> ids_;
};

struct Hyperedge {
    ExcitationConfig domain;
    ExcitationConfig codomain;

    bool operator==(const Hyperedge& other) const {
        return domain == other.domain && codomain == other.codomain;
    }
    bool operator<(const Hyperedge& other) const {
        if (domain == other.domain) return codomain < other.codomain;
        return domain < other.domain;
    }
};

// Numbers of ingoing and outgoing excitations of an elementary transition.
struct IoPair {
    int in = 0;
    int out = 0;

    bool operator==(const IoPair& other) const { return in == other.in && out == other.out; }
    bool operator<(const IoPair& other) const {
        if (in != other.in) return in < other.in;
        return out < other.out;
    }
};

// Environment observations and actions travel as small integer vectors; each
// environment documents its own encoding.
using Observation = std::vector<int>;
using Action = std::vector<int>;

} // namespace meps
