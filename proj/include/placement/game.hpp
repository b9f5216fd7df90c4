// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace placement {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
    return boost::rational_cast<double>(r);
}

/// Grid position. Origin is the top-left corner, y grows downward.
struct Point {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

class GameError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownObject : public GameError {
public:
    explicit UnknownObject(const std::string& name)
        : GameError("unknown object: " + name), object(name) {}
    std::string object;
};

/// A round definition: background, board size and the fixed landmarks.
///
/// Every movable object occupies a square of side `object_extent` centred on
/// its placement point.
struct Scene {
    std::string scene_id;
    std::int64_t width = 100;
    std::int64_t height = 100;
    std::map<std::string, Point> landmarks;
    std::vector<std::string> objects;
    std::int64_t object_extent = 10;

    bool has_object(std::string_view name) const;
    std::int64_t max_distance() const { return width + height; }

    friend bool operator==(const Scene&, const Scene&) = default;
};

/// Throws GameError if the scene breaks one of its invariants.
void check_scene(const Scene& scene);

/// One player's private arrangement of the movable objects.
struct Board {
    std::map<std::string, Point> placements;

    const Point& at(const std::string& object) const;

    friend bool operator==(const Board&, const Board&) = default;
};

struct Score {
    Rational value{100};
    bool bonus = true;

    friend bool operator==(const Score&, const Score&) = default;
};

enum class PlacementCheck { ok, overlap, out_of_bounds };

std::string_view to_string(PlacementCheck check);

std::int64_t manhattan(Point p, Point q);

/// Exact mean of the per-object Manhattan distances. Throws GameError when
/// the boards do not place the same objects.
Rational mean_pair_distance(const Board& a, const Board& b);

/// Linear map of the mean distance onto [0, 100]; distance 0 scores 100 and
/// anything at or beyond width + height scores 0.
Score normalize_score(const Rational& mean_dist, const Scene& scene);

/// Joint score of two boards on the same scene.
Score score_boards(const Board& a, const Board& b, const Scene& scene);

bool inside_scene(const Scene& scene, Point center);
bool boxes_overlap(const Scene& scene, Point a, Point b);

/// Checks whether `object` may be moved to `p`, against every other object on
/// the board. Throws UnknownObject if the scene has no such object.
PlacementCheck validate_placement(const Scene& scene, const Board& board,
                                  const std::string& object, Point p);

/// Re-checks every placement of a complete board. Returns the first problem.
std::optional<std::string> board_violation(const Scene& scene, const Board& board);

/// Uniform rejection sampling of a non-overlapping layout, deterministic for
/// a given (scene, seed). Throws GameError if the scene is too crowded.
Board random_initial_placements(const Scene& scene, std::uint64_t seed);

/// splitmix64 finaliser, used for all seed derivations.
std::uint64_t mix_seed(std::uint64_t value);

/// Unbiased draw from [0, bound). Unlike std::uniform_int_distribution the
/// result does not depend on the standard library implementation.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound);

} // namespace placement
