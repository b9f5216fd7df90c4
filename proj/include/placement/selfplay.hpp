// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "placement/analysis.hpp"
#include "placement/scripts.hpp"
#include "placement/session.hpp"

namespace placement {

struct HarnessOptions {
    SceneCatalog scenes = default_scenes();
    std::string room_id = "selfplay";
    /// Consecutive sweeps without any frame or action before giving up.
    int idle_limit = 50;
    int max_sweeps = 100000;
};

struct GameRecord {
    std::uint64_t seed = 0;
    std::string room_id;
    std::array<std::string, 2> policy_ids;
    std::vector<Score> scores;
    std::vector<Transcript> transcripts;
    /// The room log, line-delimited JSON.
    std::string log;
    GameState final_state;
    bool aborted = false;
    std::string abort_reason;
    /// Every frame each seat received, in order.
    std::array<std::vector<nlohmann::json>, 2> received;
    /// Frames that exposed one seat's board to the other seat.
    int privacy_violations = 0;
};

/// Plays one complete game in-process through a RoomSession. Every frame
/// is serialized and parsed again on its way, like on a socket.
/// Deterministic for fixed policies and seed.
GameRecord run_game(Policy& first, Policy& second, std::uint64_t seed,
                    const HarnessOptions& options = {});

struct Matchup {
    std::string first;
    std::string second;

    std::string name() const { return first + ":" + second; }
};

/// "a:b"; throws std::invalid_argument otherwise.
Matchup parse_matchup(const std::string& text);

struct BatchConfig {
    std::vector<Matchup> matchups;
    std::vector<std::uint64_t> seeds;
    PolicyContext context;
    analysis::ReportOptions report;
    /// When set, each game's log is written to <out_dir>/<room_id>.log.
    std::optional<std::filesystem::path> out_dir;
};

struct MatchupSummary {
    Matchup matchup;
    int games = 0;
    int aborted = 0;
    std::array<double, 2> mean_score{};
    /// Mean dominance difference per round over games with chat in both.
    std::array<double, 2> mean_dominance_diff{};
};

struct BatchResult {
    std::vector<GameRecord> records;
    std::vector<MatchupSummary> summaries;
    std::optional<analysis::ReportTable> report;

    const MatchupSummary& summary(const std::string& matchup_name) const;
};

/// Room id used for a game: "<a>-vs-<b>-<seed>".
std::string selfplay_room_id(const Matchup& matchup, std::uint64_t seed);

BatchResult batch_run(const BatchConfig& config);

} // namespace placement
