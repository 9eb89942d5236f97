#pragma once

#include <map>
#include <string>
#include <vector>

#include "meps/table.hpp"

namespace meps {

struct ChangedEdge {
    IoPair io;
    std::vector<ClipId> dom;
    std::vector<ClipId> cod;
    double h = 0.0;

    bool operator<(const ChangedEdge& other) const;
    bool operator==(const ChangedEdge& other) const;
};

struct Leaf {
    long long t = 0;
    std::vector<ChangedEdge> changed; // sorted by (io, dom, cod)
};

// Training history as an ordered family of weight-function snapshots. Leaves
// after the first are delta-encoded (edges whose h changed since the previous
// leaf); every K-th leaf is stored in full so folding stays cheap. Glows are
// not part of a leaf.
class DynamicHypergraph {
public:
    explicit DynamicHypergraph(std::size_t full_every = 100)
        : full_every_(full_every) {}

    // Appends leaf `t` with the table's current h-values. `t` must exceed the
    // last recorded index (ordering error otherwise). The first snapshot is
    // always full.
    void snapshot(ManyBodyTable& table, long long t);

    const std::vector<Leaf>& leaves() const { return leaves_; }
    bool empty() const { return leaves_.empty(); }
    long long last_t() const { return last_t_; }

    // Folds deltas up to and including leaf index `t`.
    std::map<std::tuple<IoPair, std::vector<ClipId>, std::vector<ClipId>>, double>
    reconstruct(long long t) const;

    bool operator==(const DynamicHypergraph& other) const {
        return leaves_ == other.leaves_;
    }

    // Used by import; appends a pre-built leaf without consulting a table.
    void append_leaf(Leaf leaf);

private:
    std::size_t full_every_;
    std::vector<Leaf> leaves_;
    long long last_t_ = -1;
    std::size_t since_full_ = 0;
    // Effective h at the previous snapshot, rebuilt only when per-edge touch
    // tracking is unavailable (gamma != 0 or eta != 1 updates).
    std::map<std::tuple<IoPair, std::vector<ClipId>, std::vector<ClipId>>, double> prev_;
    bool prev_valid_ = false;

    std::vector<ChangedEdge> full_scan(const ManyBodyTable& table) const;
};

bool operator==(const Leaf& a, const Leaf& b);

// JSON-lines export: one line per leaf {"t": int, "changed": [...]}; the
// first line is the full initialization. Round-trips losslessly.
void export_history(const DynamicHypergraph& store, const std::string& path);
DynamicHypergraph import_history(const std::string& path);

// Generic hypergraph-interchange document: clip table plus fully materialized
// leaves, for external visualization tools.
std::string history_interchange_json(const DynamicHypergraph& store,
                                     const ClipTable& clips);

} // namespace meps
