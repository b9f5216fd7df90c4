// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "placement/game.hpp"

namespace placement {

/// The scenes known to a server, and which one each round uses.
struct SceneCatalog {
    std::map<std::string, Scene> scenes;
    std::vector<std::string> rounds;

    const Scene& get(const std::string& scene_id) const;
    /// Rounds are 1-based.
    const Scene& for_round(int round) const;
    int round_count() const { return static_cast<int>(rounds.size()); }
};

/// Built-in kitchen (round 1) and living room (round 2).
SceneCatalog default_scenes();

Scene scene_from_json(const nlohmann::json& doc);
nlohmann::json scene_to_json(const Scene& scene);

/// Reads either a single scene document or {"rounds": [...], "scenes": [...]}.
/// Throws GameError on invalid content.
SceneCatalog scenes_from_json(const nlohmann::json& doc);
SceneCatalog load_scenes(const std::filesystem::path& path);

} // namespace placement
