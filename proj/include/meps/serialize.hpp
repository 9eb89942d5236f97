#pragma once

#include <string>

#include "meps/qlearn.hpp"
#include "meps/table.hpp"
#include "meps/walk.hpp"

namespace meps {

// Table document: {"clips": [...], "io": [[i,o],...], "edges": [{"io":[i,o],
// "dom":[ids], "cod":[ids], "h":x, "h_init":x, "glow":x}, ...]}. h and glow
// are materialized on export; round-trips are bit-exact.
std::string table_to_json(const ManyBodyTable& table);
ManyBodyTable table_from_json(const std::string& text);

std::string clip_table_to_json(const ClipTable& clips);

// One human-readable walk per JSON line, with clip labels in place of ids.
std::string walk_to_json_line(const WalkRecord& walk, const ClipTable& clips,
                              const Action* action = nullptr);

// Q-tables share the table envelope with "q" in place of "h". The callers
// provide the id lists naming each state/action key.
std::string q_table_to_json(
    const QTable& table,
    const std::function<std::vector<ClipId>(std::size_t)>& state_ids,
    const std::function<std::vector<ClipId>(std::size_t)>& action_ids);

// FNV-1a 64-bit, used to pin shipped data files and embed config hashes.
std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

} // namespace meps
