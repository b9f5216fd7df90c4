// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "placement/game.hpp"

namespace placement {

enum class Direction { on, next_to, above, below };

/// Canonical identifier: on, next_to, above, below.
std::string_view to_string(Direction direction);
/// Surface phrase: on, next to, above, below.
std::string_view to_phrase(Direction direction);
/// Accepts either form.
std::optional<Direction> parse_direction(std::string_view text);

inline constexpr Direction kDirections[] = {Direction::on, Direction::next_to, Direction::above,
                                            Direction::below};

/// Offset of one movement step in grid units.
inline constexpr std::int64_t kStepOffset = 10;

/// Landmark-relative target position. `scale` multiplies the offset, so
/// scale 2 puts the object twice as far from the landmark.
Point resolve_position(Point landmark, Direction direction, std::int64_t scale = 1);

struct ParsedInstruction {
    std::string target;
    std::string landmark;
    Direction direction = Direction::on;

    friend bool operator==(const ParsedInstruction&, const ParsedInstruction&) = default;
};

/// Surface phrase -> canonical object or landmark name.
using SynonymTable = std::map<std::string, std::string>;

SynonymTable default_synonyms();

/// Reads a JSON object of phrase -> canonical term and layers it over the
/// defaults. Throws GameError on malformed input.
SynonymTable load_synonyms(const std::filesystem::path& path);

/// Closed vocabularies the parser maps onto for one scene.
struct Lexicon {
    std::vector<std::string> targets;
    std::vector<std::string> landmarks;
    SynonymTable synonyms;

    /// Scene objects and landmarks, plus the synonyms that point at them.
    static Lexicon for_scene(const Scene& scene, const SynonymTable& synonyms);

    bool is_target(std::string_view term) const;
    bool is_landmark(std::string_view term) const;
    /// Surface phrases mapping to `canonical`, in table order.
    std::vector<std::string> synonyms_of(std::string_view canonical) const;
};

/// Lowercased words; apostrophes stay inside words, other punctuation splits.
std::vector<std::string> tokenize(std::string_view text);

} // namespace placement
