// SPDX-License-Identifier: Apache-2.0
#include "placement/scenes.hpp"

#include <fstream>

namespace placement {

namespace {

const std::vector<std::string> kObjects = {"pillow", "pants", "garbage", "cap", "cowboy"};

} // namespace

const Scene& SceneCatalog::get(const std::string& scene_id) const {
    auto it = scenes.find(scene_id);
    if (it == scenes.end()) {
        throw GameError("unknown scene: " + scene_id);
    }
    return it->second;
}

const Scene& SceneCatalog::for_round(int round) const {
    if (round < 1 || round > round_count()) {
        throw GameError("no scene for round " + std::to_string(round));
    }
    return get(rounds[static_cast<std::size_t>(round - 1)]);
}

SceneCatalog default_scenes() {
    Scene kitchen;
    kitchen.scene_id = "kitchen";
    kitchen.objects = kObjects;
    kitchen.landmarks = {
        {"fridge", {15, 40}}, {"toaster", {45, 30}}, {"lamp", {75, 15}},
        {"oven", {25, 80}},   {"stove", {55, 75}},   {"counter", {80, 45}},
        {"sink", {80, 80}},
    };

    Scene livingroom;
    livingroom.scene_id = "livingroom";
    livingroom.objects = kObjects;
    livingroom.landmarks = {
        {"bookshelf", {15, 25}}, {"window", {45, 15}},    {"tv", {75, 30}},
        {"sofa", {20, 70}},      {"table", {50, 55}},     {"fireplace", {50, 85}},
        {"plant", {85, 75}},
    };

    SceneCatalog catalog;
    catalog.scenes.emplace(kitchen.scene_id, kitchen);
    catalog.scenes.emplace(livingroom.scene_id, livingroom);
    catalog.rounds = {"kitchen", "livingroom"};
    return catalog;
}

Scene scene_from_json(const nlohmann::json& doc) {
    try {
        Scene scene;
        scene.scene_id = doc.at("scene_id").get<std::string>();
        scene.width = doc.at("width").get<std::int64_t>();
        scene.height = doc.at("height").get<std::int64_t>();
        scene.object_extent = doc.value("object_extent", std::int64_t{10});
        scene.objects = doc.at("objects").get<std::vector<std::string>>();
        for (const auto& [name, p] : doc.at("landmarks").items()) {
            scene.landmarks[name] = Point{p.at("x").get<std::int64_t>(), p.at("y").get<std::int64_t>()};
        }
        check_scene(scene);
        return scene;
    } catch (const nlohmann::json::exception& e) {
        throw GameError(std::string("malformed scene document: ") + e.what());
    }
}

nlohmann::json scene_to_json(const Scene& scene) {
    nlohmann::json landmarks = nlohmann::json::object();
    for (const auto& [name, p] : scene.landmarks) {
        landmarks[name] = {{"x", p.x}, {"y", p.y}};
    }
    return {
        {"scene_id", scene.scene_id},
        {"width", scene.width},
        {"height", scene.height},
        {"object_extent", scene.object_extent},
        {"objects", scene.objects},
        {"landmarks", landmarks},
    };
}

SceneCatalog scenes_from_json(const nlohmann::json& doc) {
    SceneCatalog catalog;
    if (doc.is_object() && doc.contains("scene_id")) {
        Scene scene = scene_from_json(doc);
        catalog.rounds = {scene.scene_id};
        catalog.scenes.emplace(scene.scene_id, std::move(scene));
        return catalog;
    }
    if (!doc.is_object() || !doc.contains("scenes") || !doc["scenes"].is_array()) {
        throw GameError("scene config needs a \"scenes\" array");
    }
    for (const auto& item : doc["scenes"]) {
        Scene scene = scene_from_json(item);
        const std::string id = scene.scene_id;
        if (!catalog.scenes.emplace(id, std::move(scene)).second) {
            throw GameError("duplicate scene id: " + id);
        }
    }
    if (doc.contains("rounds")) {
        catalog.rounds = doc["rounds"].get<std::vector<std::string>>();
    } else {
        catalog.rounds = {"kitchen", "livingroom"};
    }
    if (catalog.rounds.empty()) {
        throw GameError("scene config lists no rounds");
    }
    for (const auto& id : catalog.rounds) {
        catalog.get(id);
    }
    return catalog;
}

SceneCatalog load_scenes(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw GameError("cannot open scene config " + path.string());
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw GameError("scene config " + path.string() + ": " + e.what());
    }
    return scenes_from_json(doc);
}

} // namespace placement
