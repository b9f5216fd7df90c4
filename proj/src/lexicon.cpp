// SPDX-License-Identifier: Apache-2.0
#include "placement/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "json.hpp"

namespace placement {

std::string_view to_string(Direction direction) {
    switch (direction) {
    case Direction::on: return "on";
    case Direction::next_to: return "next_to";
    case Direction::above: return "above";
    case Direction::below: return "below";
    }
    return "on";
}

std::string_view to_phrase(Direction direction) {
    return direction == Direction::next_to ? "next to" : to_string(direction);
}

std::optional<Direction> parse_direction(std::string_view text) {
    for (Direction d : kDirections) {
        if (text == to_string(d) || text == to_phrase(d)) {
            return d;
        }
    }
    return std::nullopt;
}

Point resolve_position(Point landmark, Direction direction, std::int64_t scale) {
    const std::int64_t offset = kStepOffset * scale;
    switch (direction) {
    case Direction::on: return landmark;
    case Direction::next_to: return {landmark.x + offset, landmark.y};
    case Direction::above: return {landmark.x, landmark.y - offset};
    case Direction::below: return {landmark.x, landmark.y + offset};
    }
    return landmark;
}

SynonymTable default_synonyms() {
    return {
        {"jeans", "pants"},
        {"cushion", "pillow"},
        {"garbagebag", "garbage"},
        {"garbage bag", "garbage"},
        {"trash bag", "garbage"},
        {"water faucet", "sink"},
        {"ceiling light", "lamp"},
        {"lamp stand", "lamp"},
        {"blue hat", "cap"},
        {"peaky blinders hat", "cap"},
        {"cowboy hat", "cowboy"},
    };
}

SynonymTable load_synonyms(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw GameError("cannot open synonym table " + path.string());
    }
    auto doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw GameError("synonym table " + path.string() + " is not a JSON object");
    }
    SynonymTable table = default_synonyms();
    for (const auto& [phrase, canonical] : doc.items()) {
        if (!canonical.is_string()) {
            throw GameError("synonym '" + phrase + "' must map to a string");
        }
        std::string key;
        for (const auto& word : tokenize(phrase)) {
            key += (key.empty() ? "" : " ") + word;
        }
        table[key] = canonical.get<std::string>();
    }
    return table;
}

Lexicon Lexicon::for_scene(const Scene& scene, const SynonymTable& synonyms) {
    Lexicon lex;
    lex.targets = scene.objects;
    for (const auto& [name, p] : scene.landmarks) {
        lex.landmarks.push_back(name);
    }
    for (const auto& [phrase, canonical] : synonyms) {
        if (lex.is_target(canonical) || lex.is_landmark(canonical)) {
            lex.synonyms[phrase] = canonical;
        }
    }
    return lex;
}

bool Lexicon::is_target(std::string_view term) const {
    return std::find(targets.begin(), targets.end(), term) != targets.end();
}

bool Lexicon::is_landmark(std::string_view term) const {
    return std::find(landmarks.begin(), landmarks.end(), term) != landmarks.end();
}

std::vector<std::string> Lexicon::synonyms_of(std::string_view canonical) const {
    std::vector<std::string> out;
    for (const auto& [phrase, target] : synonyms) {
        if (target == canonical) {
            out.push_back(phrase);
        }
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    for (char raw : text) {
        const auto c = static_cast<unsigned char>(raw);
        if (std::isalnum(c) != 0 || (c == '\'' && !current.empty()) || c >= 0x80) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        words.push_back(std::move(current));
    }
    for (auto& w : words) {
        while (!w.empty() && w.back() == '\'') {
            w.pop_back();
        }
    }
    return words;
}

} // namespace placement
