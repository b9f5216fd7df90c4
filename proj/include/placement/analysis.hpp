// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "placement/event_log.hpp"
#include "placement/game.hpp"
#include "placement/transcript.hpp"

namespace placement::analysis {

class EmptyTranscript : public std::invalid_argument {
public:
    EmptyTranscript() : std::invalid_argument("transcript has no messages") {}
};

/// How message length is measured for verbosity.
enum class LengthUnit { tokens, chars };

std::string_view to_string(LengthUnit unit);
LengthUnit parse_length_unit(std::string_view text);

enum class Strategy { leader, back_and_forth, grip_tightening, grip_loosening };

std::string_view to_string(Strategy strategy);

constexpr double kDefaultTheta = 1.3;

/// Length of one message: whitespace-separated tokens or UTF-8 code points.
std::size_t message_length(const std::string& text, LengthUnit unit);

/// Share of the transcript's messages sent by `player`, out of 100.
/// Throws EmptyTranscript.
Rational volume(const Transcript& t, const std::string& player);

/// Mean message length of `player`; 0 if they sent nothing.
Rational verbosity(const Transcript& t, const std::string& player,
                   LengthUnit unit = LengthUnit::tokens);

double logistic(double x);

struct DominanceResult {
    std::map<std::string, double> d;
    std::map<std::string, Rational> volume;
    std::map<std::string, Rational> verbosity;
    /// Relative volume advantage of the higher-volume player, in [0, 1].
    Rational rd;
    /// Higher-volume player; empty on an exact tie.
    std::string dominant;
};

/// Per-player dominance of one round:
///   d_A = verbosity_A * L(RD),  d_B = verbosity_B * (1 - L(RD))
/// where A sent more messages and RD = (vol_A - vol_B) / (vol_A + vol_B).
/// Only counts and lengths matter, so message order is irrelevant.
DominanceResult dominance(const Transcript& t, LengthUnit unit = LengthUnit::tokens);

/// |d_A - d_B|
double dominance_diff(const Transcript& t, LengthUnit unit = LengthUnit::tokens);

/// Threshold rule over the two rounds' dominance differences.
Strategy classify_strategy(double diff_round1, double diff_round2, double theta = kDefaultTheta);

struct RoundResult {
    double score = 0;
    bool bonus = false;
};

struct GameInput {
    std::string game_id;
    std::vector<Transcript> rounds;
    std::vector<RoundResult> results;
};

/// Transcripts and round_end results recorded in a room log.
GameInput game_from_log(const std::string& game_id, const std::vector<LogRecord>& records);

struct GameSummary {
    std::string game_id;
    Strategy strategy = Strategy::back_and_forth;
    std::array<double, 2> diff{};
    std::array<RoundResult, 2> results{};
};

struct StrategyRow {
    Strategy strategy = Strategy::back_and_forth;
    int games = 0;
    std::array<double, 2> mean_score{};
    std::array<double, 2> bonus_pct{};
    std::array<double, 2> mean_diff{};
};

struct ReportOptions {
    double theta = kDefaultTheta;
    LengthUnit unit = LengthUnit::tokens;
};

struct ReportTable {
    ReportOptions options;
    std::vector<GameSummary> games;
    /// Games left out: unfinished, or a round without any chat.
    std::vector<std::string> excluded;
    /// One row per strategy that occurs, in taxonomy order.
    std::vector<StrategyRow> rows;

    const StrategyRow* row(Strategy strategy) const;
    nlohmann::json to_json() const;
    std::string to_text() const;
};

/// Throws std::invalid_argument when `games` is empty.
ReportTable report(const std::vector<GameInput>& games, const ReportOptions& options = {});

} // namespace placement::analysis
