#include "meps/types.hpp"

#include <algorithm>

namespace meps {

ClipId ClipTable::add(std::string label, int layer, int category) {
    if (label.empty()) raise(Errc::config, "clip label must be nonempty");
    if (by_label_.count(label) != 0)
        raise(Errc::config, "duplicate clip label: " + label);
    if (layer < 0) raise(Errc::config, "clip layer must be >= 0");
    ClipId id = static_cast<ClipId>(clips_.size());
    clips_.push_back(Clip{id, label, layer, category});
    by_label_.emplace(clips_.back().label, id);
    max_layer_ = std::max(max_layer_, layer);
    if (layer == 0) any_unlayered_ = true;
    return id;
}

const Clip& ClipTable::at(ClipId id) const {
    if (id >= clips_.size()) raise(Errc::contract, "clip id out of range");
    return clips_[id];
}

bool ClipTable::has_label(const std::string& label) const {
    return by_label_.count(label) != 0;
}

ClipId ClipTable::id_of(const std::string& label) const {
    auto it = by_label_.find(label);
    if (it == by_label_.end()) raise(Errc::mapping, "unknown clip label: " + label);
    return it->second;
}

bool ClipTable::layered() const {
    return !clips_.empty() && max_layer_ > 0 && !any_unlayered_;
}

std::vector<int> ClipTable::layer_sizes() const {
    if (!layered()) raise(Errc::config, "clip table is not layered");
    std::vector<int> sizes(static_cast<std::size_t>(max_layer_), 0);
    for (const auto& clip : clips_) sizes[static_cast<std::size_t>(clip.layer - 1)] += 1;
    for (std::size_t j = 0; j < sizes.size(); ++j) {
        if (sizes[j] == 0)
            raise(Errc::config, "layer " + std::to_string(j + 1) + " is empty");
    }
    return sizes;
}

ExcitationConfig::ExcitationConfig(std::vector<ClipId> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
        raise(Errc::contract, "excitation configuration contains duplicate clip ids");
}

ExcitationConfig ExcitationConfig::unchecked(std::vector<ClipId> ids) {
    ExcitationConfig config;
    config.ids_ = std::move(ids);
    return config;
}

bool ExcitationConfig::contains(ClipId id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
}

bool ExcitationConfig::contains_all(std::span<const ClipId> sorted_ids) const {
    return std::includes(ids_.begin(), ids_.end(), sorted_ids.begin(), sorted_ids.end());
}

} // namespace meps
