#include "meps/serialize.hpp"

#include <json.hpp>

namespace meps {

namespace {

nlohmann::json clips_to_json_value(const ClipTable& clips) {
    nlohmann::json list = nlohmann::json::array();
    for (const Clip& clip : clips.all()) {
        nlohmann::json entry = {{"id", clip.id}, {"label", clip.label}};
        if (clip.layer > 0) entry["layer"] = clip.layer;
        if (clip.category >= 0) entry["category"] = clip.category;
        list.push_back(std::move(entry));
    }
    return list;
}

std::vector<std::string> labels_of(std::span<const ClipId> ids, const ClipTable& clips) {
    std::vector<std::string> labels;
    labels.reserve(ids.size());
    for (ClipId id : ids) labels.push_back(clips.at(id).label);
    return labels;
}

} // namespace

std::string clip_table_to_json(const ClipTable& clips) {
    return clips_to_json_value(clips).dump(2);
}

std::string table_to_json(const ManyBodyTable& table) {
    nlohmann::json doc;
    doc["clips"] = clips_to_json_value(table.clips());
    nlohmann::json io_list = nlohmann::json::array();
    for (IoPair io : table.io_set()) io_list.push_back({io.in, io.out});
    doc["io"] = std::move(io_list);

    nlohmann::json edges = nlohmann::json::array();
    const auto& buckets = table.buckets();
    for (std::size_t b = 0; b < buckets.size(); ++b) {
        for (std::size_t k = 0; k < buckets[b].size(); ++k) {
            const EdgeRef ref{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(k)};
            const auto dom = buckets[b].dom(k);
            const auto cod = buckets[b].cod(k);
            edges.push_back({{"io", {buckets[b].io.in, buckets[b].io.out}},
                             {"dom", std::vector<ClipId>(dom.begin(), dom.end())},
                             {"cod", std::vector<ClipId>(cod.begin(), cod.end())},
                             {"h", table.effective_h(ref)},
                             {"h_init", table.h_init_of(ref)},
                             {"glow", table.effective_glow(ref)}});
        }
    }
    doc["edges"] = std::move(edges);
    return doc.dump();
}

ManyBodyTable table_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        raise(Errc::io, std::string("cannot parse table document: ") + e.what());
    }
    auto clips = std::make_shared<ClipTable>();
    for (const auto& entry : doc.at("clips")) {
        clips->add(entry.at("label").get<std::string>(),
                   entry.value("layer", 0), entry.value("category", -1));
    }
    ManyBodyTable::Builder builder(clips, 0.0);
    for (const auto& entry : doc.at("edges")) {
        const auto io_value = entry.at("io");
        const IoPair io{io_value.at(0).get<int>(), io_value.at(1).get<int>()};
        const auto dom = entry.at("dom").get<std::vector<ClipId>>();
        const auto cod = entry.at("cod").get<std::vector<ClipId>>();
        builder.add(io, dom, cod, entry.at("h").get<double>(),
                    entry.at("h_init").get<double>(), entry.value("glow", 0.0));
    }
    return builder.finish();
}

std::string walk_to_json_line(const WalkRecord& walk, const ClipTable& clips,
                              const Action* action) {
    nlohmann::json doc;
    nlohmann::json configs = nlohmann::json::array();
    for (const ExcitationConfig& config : walk.configs)
        configs.push_back(labels_of(config.ids(), clips));
    doc["configs"] = std::move(configs);

    nlohmann::json edges = nlohmann::json::array();
    for (const WalkStep& step : walk.steps) {
        edges.push_back({{"io", {step.io.in, step.io.out}},
                         {"dom", labels_of(step.edge.domain.ids(), clips)},
                         {"cod", labels_of(step.edge.codomain.ids(), clips)}});
    }
    doc["edges"] = std::move(edges);

    switch (walk.terminated_by) {
    case WalkEnd::action_coupled_out: doc["terminated_by"] = "action_coupled_out"; break;
    case WalkEnd::step_cap: doc["terminated_by"] = "step_cap"; break;
    case WalkEnd::dead_end: doc["terminated_by"] = "dead_end"; break;
    }
    if (action != nullptr) doc["action"] = *action;
    return doc.dump();
}

std::string q_table_to_json(
    const QTable& table,
    const std::function<std::vector<ClipId>(std::size_t)>& state_ids,
    const std::function<std::vector<ClipId>(std::size_t)>& action_ids) {
    nlohmann::json doc;
    doc["alpha"] = table.alpha();
    doc["lambda"] = table.lambda();
    nlohmann::json edges = nlohmann::json::array();
    for (std::size_t s = 0; s < table.n_states(); ++s) {
        const std::vector<ClipId> dom = state_ids(s);
        for (std::size_t a = 0; a < table.n_actions(); ++a) {
            edges.push_back(
                {{"dom", dom}, {"cod", action_ids(a)}, {"q", table.at(s, a)}});
        }
    }
    doc["edges"] = std::move(edges);
    return doc.dump();
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string fnv1a64_hex(const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t hash = fnv1a64(bytes);
    std::string out(16, '0');
    for (int j = 15; j >= 0; --j) {
        out[static_cast<std::size_t>(j)] = digits[hash & 0xf];
        hash >>= 4;
    }
    return out;
}

} // namespace meps
