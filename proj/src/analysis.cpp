// SPDX-License-Identifier: Apache-2.0
#include "placement/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace placement::analysis {

namespace {

constexpr std::array<Strategy, 4> kStrategies = {Strategy::leader, Strategy::back_and_forth,
                                                 Strategy::grip_tightening,
                                                 Strategy::grip_loosening};

void check_two_players(const Transcript& t) {
    if (t.player_ids.size() != 2) {
        throw std::invalid_argument("transcript must name exactly two players");
    }
    for (const auto& m : t.messages) {
        if (m.sender != t.player_ids[0] && m.sender != t.player_ids[1]) {
            throw std::invalid_argument("message from unknown player " + m.sender);
        }
    }
}

std::size_t count_from(const Transcript& t, const std::string& player) {
    return static_cast<std::size_t>(std::count_if(
        t.messages.begin(), t.messages.end(),
        [&](const ChatMessage& m) { return m.sender == player; }));
}

} // namespace

std::string_view to_string(LengthUnit unit) {
    return unit == LengthUnit::tokens ? "tokens" : "chars";
}

LengthUnit parse_length_unit(std::string_view text) {
    if (text == "tokens") {
        return LengthUnit::tokens;
    }
    if (text == "chars") {
        return LengthUnit::chars;
    }
    throw std::invalid_argument("length unit must be tokens or chars");
}

std::string_view to_string(Strategy strategy) {
    switch (strategy) {
    case Strategy::leader: return "leader";
    case Strategy::back_and_forth: return "back_and_forth";
    case Strategy::grip_tightening: return "grip_tightening";
    case Strategy::grip_loosening: return "grip_loosening";
    }
    return "unknown";
}

std::size_t message_length(const std::string& text, LengthUnit unit) {
    if (unit == LengthUnit::tokens) {
        std::istringstream in(text);
        std::size_t n = 0;
        for (std::string token; in >> token;) {
            ++n;
        }
        return n;
    }
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return 0;
    }
    const auto last = text.find_last_not_of(" \t\r\n");
    std::size_t n = 0;
    for (std::size_t i = first; i <= last; ++i) {
        // Count UTF-8 lead bytes only.
        if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
            ++n;
        }
    }
    return n;
}

Rational volume(const Transcript& t, const std::string& player) {
    if (t.messages.empty()) {
        throw EmptyTranscript();
    }
    return Rational(100 * static_cast<std::int64_t>(count_from(t, player)),
                    static_cast<std::int64_t>(t.messages.size()));
}

Rational verbosity(const Transcript& t, const std::string& player, LengthUnit unit) {
    std::int64_t total = 0;
    std::int64_t count = 0;
    for (const auto& m : t.messages) {
        if (m.sender == player) {
            total += static_cast<std::int64_t>(message_length(m.text, unit));
            ++count;
        }
    }
    return count == 0 ? Rational(0) : Rational(total, count);
}

double logistic(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

DominanceResult dominance(const Transcript& t, LengthUnit unit) {
    if (t.messages.empty()) {
        throw EmptyTranscript();
    }
    check_two_players(t);

    DominanceResult result;
    for (const auto& p : t.player_ids) {
        result.volume[p] = volume(t, p);
        result.verbosity[p] = verbosity(t, p, unit);
    }
    std::string a = t.player_ids[0];
    std::string b = t.player_ids[1];
    if (result.volume[b] > result.volume[a]) {
        std::swap(a, b);
    }
    const Rational& va = result.volume[a];
    const Rational& vb = result.volume[b];
    result.rd = (va - vb) / (va + vb);
    result.dominant = va == vb ? std::string() : a;

    // On a tie RD = 0 and L(0) = 1 - L(0), so the roles are interchangeable.
    const double l = logistic(to_double(result.rd));
    result.d[a] = to_double(result.verbosity[a]) * l;
    result.d[b] = to_double(result.verbosity[b]) * (1.0 - l);
    return result;
}

double dominance_diff(const Transcript& t, LengthUnit unit) {
    const auto r = dominance(t, unit);
    return std::abs(r.d.at(t.player_ids[0]) - r.d.at(t.player_ids[1]));
}

Strategy classify_strategy(double diff_round1, double diff_round2, double theta) {
    if (!(theta > 0)) {
        throw std::invalid_argument("theta must be positive");
    }
    const bool lead1 = diff_round1 >= theta;
    const bool lead2 = diff_round2 >= theta;
    if (lead1 && lead2) {
        return Strategy::leader;
    }
    if (!lead1 && !lead2) {
        return Strategy::back_and_forth;
    }
    return lead2 ? Strategy::grip_tightening : Strategy::grip_loosening;
}

GameInput game_from_log(const std::string& game_id, const std::vector<LogRecord>& records) {
    GameInput game;
    game.game_id = game_id;
    game.rounds = load_transcripts(records);
    for (const auto& r : records) {
        if (r.kind == "round_end") {
            game.results.push_back(
                RoundResult{r.payload.at("score").get<double>(), r.payload.at("bonus").get<bool>()});
        }
    }
    return game;
}

const StrategyRow* ReportTable::row(Strategy strategy) const {
    for (const auto& r : rows) {
        if (r.strategy == strategy) {
            return &r;
        }
    }
    return nullptr;
}

ReportTable report(const std::vector<GameInput>& games, const ReportOptions& options) {
    if (games.empty()) {
        throw std::invalid_argument("report needs at least one game");
    }
    ReportTable table;
    table.options = options;
    for (const auto& g : games) {
        const bool complete = g.rounds.size() >= 2 && g.results.size() >= 2;
        if (!complete || g.rounds[0].empty() || g.rounds[1].empty()) {
            table.excluded.push_back(g.game_id);
            continue;
        }
        GameSummary s;
        s.game_id = g.game_id;
        for (std::size_t i = 0; i < 2; ++i) {
            s.diff[i] = dominance_diff(g.rounds[i], options.unit);
            s.results[i] = g.results[i];
        }
        s.strategy = classify_strategy(s.diff[0], s.diff[1], options.theta);
        table.games.push_back(std::move(s));
    }

    for (Strategy strategy : kStrategies) {
        StrategyRow row;
        row.strategy = strategy;
        for (const auto& g : table.games) {
            if (g.strategy != strategy) {
                continue;
            }
            ++row.games;
            for (std::size_t i = 0; i < 2; ++i) {
                row.mean_score[i] += g.results[i].score;
                row.bonus_pct[i] += g.results[i].bonus ? 100.0 : 0.0;
                row.mean_diff[i] += g.diff[i];
            }
        }
        if (row.games == 0) {
            continue;
        }
        for (std::size_t i = 0; i < 2; ++i) {
            row.mean_score[i] /= row.games;
            row.bonus_pct[i] /= row.games;
            row.mean_diff[i] /= row.games;
        }
        table.rows.push_back(row);
    }
    return table;
}

nlohmann::json ReportTable::to_json() const {
    nlohmann::json doc;
    doc["theta"] = options.theta;
    doc["length_unit"] = std::string(to_string(options.unit));

    nlohmann::json game_list = nlohmann::json::array();
    for (const auto& g : games) {
        game_list.push_back({
            {"game_id", g.game_id},
            {"strategy", std::string(to_string(g.strategy))},
            {"dominance_diff", {g.diff[0], g.diff[1]}},
            {"scores", {g.results[0].score, g.results[1].score}},
            {"bonus", {g.results[0].bonus, g.results[1].bonus}},
        });
    }
    doc["games"] = game_list;
    doc["excluded"] = excluded;

    nlohmann::json table = nlohmann::json::array();
    nlohmann::json series = {{"strategy", nlohmann::json::array()},
                             {"mean_score_round1", nlohmann::json::array()},
                             {"mean_score_round2", nlohmann::json::array()},
                             {"bonus_pct_round1", nlohmann::json::array()},
                             {"bonus_pct_round2", nlohmann::json::array()}};
    for (const auto& r : rows) {
        const std::string name(to_string(r.strategy));
        table.push_back({
            {"strategy", name},
            {"games", r.games},
            {"mean_score", {r.mean_score[0], r.mean_score[1]}},
            {"bonus_pct", {r.bonus_pct[0], r.bonus_pct[1]}},
            {"mean_dominance_diff", {r.mean_diff[0], r.mean_diff[1]}},
        });
        series["strategy"].push_back(name);
        series["mean_score_round1"].push_back(r.mean_score[0]);
        series["mean_score_round2"].push_back(r.mean_score[1]);
        series["bonus_pct_round1"].push_back(r.bonus_pct[0]);
        series["bonus_pct_round2"].push_back(r.bonus_pct[1]);
    }
    doc["strategies"] = table;
    doc["series"] = series;
    return doc;
}

std::string ReportTable::to_text() const {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    out << "theta " << options.theta << ", length unit " << to_string(options.unit) << ", "
        << games.size() << " games (" << excluded.size() << " excluded)\n";
    out << std::left << std::setw(16) << "strategy" << std::right << std::setw(6) << "games"
        << std::setw(10) << "score r1" << std::setw(10) << "score r2" << std::setw(10)
        << "bonus r1" << std::setw(10) << "bonus r2" << std::setw(9) << "diff r1"
        << std::setw(9) << "diff r2" << '\n';
    for (const auto& r : rows) {
        out << std::left << std::setw(16) << to_string(r.strategy) << std::right << std::setw(6)
            << r.games << std::setw(10) << r.mean_score[0] << std::setw(10) << r.mean_score[1]
            << std::setw(9) << r.bonus_pct[0] << '%' << std::setw(9) << r.bonus_pct[1] << '%'
            << std::setw(9) << r.mean_diff[0] << std::setw(9) << r.mean_diff[1] << '\n';
    }
    return out.str();
}

} // namespace placement::analysis
