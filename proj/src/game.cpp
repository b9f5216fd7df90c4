// SPDX-License-Identifier: Apache-2.0
#include "placement/game.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <random>
#include <set>

namespace placement {

namespace {

constexpr int kMaxLayoutAttempts = 10000;

} // namespace

std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()
                                - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t value = rng();
    while (value >= limit) {
        value = rng();
    }
    return value % bound;
}

bool Scene::has_object(std::string_view name) const {
    return std::find(objects.begin(), objects.end(), name) != objects.end();
}

void check_scene(const Scene& scene) {
    if (scene.scene_id.empty()) {
        throw GameError("scene without id");
    }
    if (scene.width <= 0 || scene.height <= 0) {
        throw GameError("scene " + scene.scene_id + ": non-positive dimensions");
    }
    if (scene.object_extent <= 0 || scene.object_extent > scene.width
        || scene.object_extent > scene.height) {
        throw GameError("scene " + scene.scene_id + ": bad object extent");
    }
    std::set<std::string> seen;
    for (const auto& name : scene.objects) {
        if (name.empty() || !seen.insert(name).second) {
            throw GameError("scene " + scene.scene_id + ": duplicate or empty object '" + name + "'");
        }
    }
    for (const auto& [name, p] : scene.landmarks) {
        if (p.x < 0 || p.x >= scene.width || p.y < 0 || p.y >= scene.height) {
            throw GameError("scene " + scene.scene_id + ": landmark '" + name + "' outside the board");
        }
        if (seen.count(name) != 0) {
            throw GameError("scene " + scene.scene_id + ": '" + name + "' is both object and landmark");
        }
    }
}

const Point& Board::at(const std::string& object) const {
    auto it = placements.find(object);
    if (it == placements.end()) {
        throw UnknownObject(object);
    }
    return it->second;
}

std::string_view to_string(PlacementCheck check) {
    switch (check) {
    case PlacementCheck::ok: return "ok";
    case PlacementCheck::overlap: return "overlap";
    case PlacementCheck::out_of_bounds: return "out_of_bounds";
    }
    return "unknown";
}

std::int64_t manhattan(Point p, Point q) {
    return std::abs(p.x - q.x) + std::abs(p.y - q.y);
}

Rational mean_pair_distance(const Board& a, const Board& b) {
    if (a.placements.size() != b.placements.size()) {
        throw GameError("boards place different numbers of objects");
    }
    if (a.placements.empty()) {
        throw GameError("boards place no objects");
    }
    std::int64_t total = 0;
    for (const auto& [name, p] : a.placements) {
        auto it = b.placements.find(name);
        if (it == b.placements.end()) {
            throw GameError("object '" + name + "' missing from second board");
        }
        total += manhattan(p, it->second);
    }
    return Rational(total, static_cast<std::int64_t>(a.placements.size()));
}

Score normalize_score(const Rational& mean_dist, const Scene& scene) {
    if (mean_dist < 0) {
        throw GameError("negative mean distance");
    }
    Rational value = Rational(100) * (Rational(1) - mean_dist / Rational(scene.max_distance()));
    value = std::clamp(value, Rational(0), Rational(100));
    return Score{value, value > Rational(99)};
}

Score score_boards(const Board& a, const Board& b, const Scene& scene) {
    return normalize_score(mean_pair_distance(a, b), scene);
}

bool inside_scene(const Scene& scene, Point c) {
    // Compare on doubled coordinates so odd extents stay exact.
    const std::int64_t e = scene.object_extent;
    return 2 * c.x - e >= 0 && 2 * c.x + e <= 2 * scene.width
           && 2 * c.y - e >= 0 && 2 * c.y + e <= 2 * scene.height;
}

bool boxes_overlap(const Scene& scene, Point a, Point b) {
    // Equal squares share positive area iff both axis gaps are below the side.
    return std::abs(a.x - b.x) < scene.object_extent
           && std::abs(a.y - b.y) < scene.object_extent;
}

PlacementCheck validate_placement(const Scene& scene, const Board& board,
                                  const std::string& object, Point p) {
    if (!scene.has_object(object)) {
        throw UnknownObject(object);
    }
    if (!inside_scene(scene, p)) {
        return PlacementCheck::out_of_bounds;
    }
    for (const auto& [name, q] : board.placements) {
        if (name != object && boxes_overlap(scene, p, q)) {
            return PlacementCheck::overlap;
        }
    }
    return PlacementCheck::ok;
}

std::optional<std::string> board_violation(const Scene& scene, const Board& board) {
    for (const auto& name : scene.objects) {
        if (board.placements.count(name) == 0) {
            return "missing placement for " + name;
        }
    }
    if (board.placements.size() != scene.objects.size()) {
        return std::string("board places objects outside the scene roster");
    }
    for (const auto& [name, p] : board.placements) {
        auto check = validate_placement(scene, board, name, p);
        if (check != PlacementCheck::ok) {
            return name + ": " + std::string(to_string(check));
        }
    }
    return std::nullopt;
}

std::uint64_t mix_seed(std::uint64_t value) {
    value += 0x9e3779b97f4a7c15ULL;
    value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
    value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
    return value ^ (value >> 31);
}

Board random_initial_placements(const Scene& scene, std::uint64_t seed) {
    std::mt19937_64 rng(mix_seed(seed));
    const std::int64_t e = scene.object_extent;
    // Centres whose box fits: 2x - e >= 0 and 2x + e <= 2w.
    const std::int64_t min_x = (e + 1) / 2;
    const std::int64_t max_x = (2 * scene.width - e) / 2;
    const std::int64_t min_y = (e + 1) / 2;
    const std::int64_t max_y = (2 * scene.height - e) / 2;
    if (max_x < min_x || max_y < min_y) {
        throw GameError("scene " + scene.scene_id + " cannot fit a single object");
    }

    Board board;
    int attempts = 0;
    for (const auto& name : scene.objects) {
        while (true) {
            if (++attempts > kMaxLayoutAttempts) {
                throw GameError("no valid layout found for scene " + scene.scene_id);
            }
            Point p{min_x + static_cast<std::int64_t>(draw_below(rng, max_x - min_x + 1)),
                    min_y + static_cast<std::int64_t>(draw_below(rng, max_y - min_y + 1))};
            if (validate_placement(scene, board, name, p) == PlacementCheck::ok) {
                board.placements[name] = p;
                break;
            }
        }
    }
    return board;
}

} // namespace placement
