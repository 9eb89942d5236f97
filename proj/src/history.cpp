#include "meps/history.hpp"

#include <algorithm>
#include <fstream>
#include <tuple>

#include <json.hpp>

namespace meps {

bool ChangedEdge::operator<(const ChangedEdge& other) const {
    return std::tie(io, dom, cod) < std::tie(other.io, other.dom, other.cod);
}

bool ChangedEdge::operator==(const ChangedEdge& other) const {
    return io == other.io && dom == other.dom && cod == other.cod && h == other.h;
}

bool operator==(const Leaf& a, const Leaf& b) {
    return a.t == b.t && a.changed == b.changed;
}

std::vector<ChangedEdge> DynamicHypergraph::full_scan(const ManyBodyTable& table) const {
    std::vector<ChangedEdge> edges;
    edges.reserve(table.parameter_count());
    const auto& buckets = table.buckets();
    for (std::size_t b = 0; b < buckets.size(); ++b) {
        for (std::size_t k = 0; k < buckets[b].size(); ++k) {
            const EdgeRef ref{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(k)};
            ChangedEdge edge;
            edge.io = buckets[b].io;
            auto dom = buckets[b].dom(k);
            auto cod = buckets[b].cod(k);
            edge.dom.assign(dom.begin(), dom.end());
            edge.cod.assign(cod.begin(), cod.end());
            edge.h = table.effective_h(ref);
            edges.push_back(std::move(edge));
        }
    }
    return edges;
}

void DynamicHypergraph::snapshot(ManyBodyTable& table, long long t) {
    if (t <= last_t_)
        raise(Errc::ordering, "snapshot index " + std::to_string(t) +
                                  " does not exceed the last recorded index " +
                                  std::to_string(last_t_));
    auto [tracked, touched] = table.drain_touched();
    auto key_of = [](const ChangedEdge& edge) {
        return std::make_tuple(edge.io, edge.dom, edge.cod);
    };

    Leaf leaf;
    leaf.t = t;
    const bool want_full = leaves_.empty() || since_full_ + 1 >= full_every_;

    if (want_full) {
        leaf.changed = full_scan(table);
        since_full_ = 0;
        prev_.clear();
        for (const ChangedEdge& edge : leaf.changed) prev_[key_of(edge)] = edge.h;
        prev_valid_ = true;
    } else if (tracked) {
        for (const EdgeRef& ref : touched) {
            ChangedEdge edge;
            edge.io = table.io_of(ref);
            auto dom = table.dom_of(ref);
            auto cod = table.cod_of(ref);
            edge.dom.assign(dom.begin(), dom.end());
            edge.cod.assign(cod.begin(), cod.end());
            edge.h = table.effective_h(ref);
            prev_[key_of(edge)] = edge.h;
            leaf.changed.push_back(std::move(edge));
        }
        std::sort(leaf.changed.begin(), leaf.changed.end());
        since_full_ += 1;
    } else {
        // Per-edge tracking was invalidated; diff a full scan against the
        // previous materialized state.
        if (!prev_valid_)
            raise(Errc::integrity, "cannot delta-encode without a previous snapshot");
        for (ChangedEdge& edge : full_scan(table)) {
            auto key = key_of(edge);
            auto it = prev_.find(key);
            if (it == prev_.end() || it->second != edge.h) {
                prev_[std::move(key)] = edge.h;
                leaf.changed.push_back(std::move(edge));
            }
        }
        since_full_ += 1;
    }
    last_t_ = t;
    leaves_.push_back(std::move(leaf));
}

void DynamicHypergraph::append_leaf(Leaf leaf) {
    if (leaf.t <= last_t_)
        raise(Errc::ordering, "leaf indices must be strictly increasing");
    std::sort(leaf.changed.begin(), leaf.changed.end());
    last_t_ = leaf.t;
    leaves_.push_back(std::move(leaf));
}

std::map<std::tuple<IoPair, std::vector<ClipId>, std::vector<ClipId>>, double>
DynamicHypergraph::reconstruct(long long t) const {
    std::map<std::tuple<IoPair, std::vector<ClipId>, std::vector<ClipId>>, double> state;
    bool found = false;
    for (const Leaf& leaf : leaves_) {
        if (leaf.t > t) break;
        for (const ChangedEdge& edge : leaf.changed)
            state[std::make_tuple(edge.io, edge.dom, edge.cod)] = edge.h;
        found = true;
    }
    if (!found) raise(Errc::ordering, "no leaf at or before index " + std::to_string(t));
    return state;
}

namespace {

nlohmann::json leaf_to_json(const Leaf& leaf) {
    nlohmann::json changed = nlohmann::json::array();
    for (const ChangedEdge& edge : leaf.changed) {
        changed.push_back({{"io", {edge.io.in, edge.io.out}},
                           {"dom", edge.dom},
                           {"cod", edge.cod},
                           {"h", edge.h}});
    }
    return {{"t", leaf.t}, {"changed", std::move(changed)}};
}

Leaf leaf_from_json(const nlohmann::json& doc) {
    Leaf leaf;
    leaf.t = doc.at("t").get<long long>();
    for (const auto& entry : doc.at("changed")) {
        ChangedEdge edge;
        const auto io = entry.at("io");
        edge.io = IoPair{io.at(0).get<int>(), io.at(1).get<int>()};
        edge.dom = entry.at("dom").get<std::vector<ClipId>>();
        edge.cod = entry.at("cod").get<std::vector<ClipId>>();
        edge.h = entry.at("h").get<double>();
        leaf.changed.push_back(std::move(edge));
    }
    return leaf;
}

} // namespace

void export_history(const DynamicHypergraph& store, const std::string& path) {
    if (store.empty()) raise(Errc::contract, "cannot export an empty history");
    std::ofstream out(path);
    if (!out) raise(Errc::io, "cannot write history file: " + path);
    for (const Leaf& leaf : store.leaves()) out << leaf_to_json(leaf).dump() << "\n";
    if (!out) raise(Errc::io, "failed while writing history file: " + path);
}

DynamicHypergraph import_history(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io, "cannot open history file: " + path);
    DynamicHypergraph store;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            raise(Errc::io, "cannot parse history line in " + path + ": " + e.what());
        }
        store.append_leaf(leaf_from_json(doc));
    }
    if (store.empty()) raise(Errc::io, "history file holds no leaves: " + path);
    return store;
}

std::string history_interchange_json(const DynamicHypergraph& store,
                                     const ClipTable& clips) {
    nlohmann::json doc;
    nlohmann::json clip_list = nlohmann::json::array();
    for (const Clip& clip : clips.all()) {
        nlohmann::json entry = {{"id", clip.id}, {"label", clip.label}};
        if (clip.layer > 0) entry["layer"] = clip.layer;
        if (clip.category >= 0) entry["category"] = clip.category;
        clip_list.push_back(std::move(entry));
    }
    doc["clips"] = std::move(clip_list);

    nlohmann::json leaves = nlohmann::json::array();
    for (const Leaf& leaf : store.leaves()) {
        const auto state = store.reconstruct(leaf.t);
        nlohmann::json edges = nlohmann::json::array();
        for (const auto& [key, h] : state) {
            const auto& [io, dom, cod] = key;
            edges.push_back(
                {{"io", {io.in, io.out}}, {"dom", dom}, {"cod", cod}, {"h", h}});
        }
        leaves.push_back({{"t", leaf.t}, {"edges", std::move(edges)}});
    }
    doc["leaves"] = std::move(leaves);
    return doc.dump(2);
}

} // namespace meps
