// SPDX-License-Identifier: Apache-2.0
#include "placement/selfplay.hpp"

#include <deque>
#include <fstream>
#include <stdexcept>

#include "placement/room_session.hpp"

namespace placement {

namespace {

constexpr std::int64_t kTickMs = 250;

nlohmann::json over_the_wire(const nlohmann::json& frame) {
    return nlohmann::json::parse(frame.dump());
}

} // namespace

GameRecord run_game(Policy& first, Policy& second, std::uint64_t seed, const HarnessOptions& options) {
    GameRecord record;
    record.seed = seed;
    record.room_id = options.room_id;
    record.policy_ids = {first.policy_id(), second.policy_id()};

    RoomSession session(options.room_id, options.scenes,
                        seeded_board_source(room_seed(seed, options.room_id)),
                        EventLog::in_memory());
    std::array<Policy*, 2> policies = {&first, &second};
    std::array<std::string, 2> ids;
    std::array<std::deque<nlohmann::json>, 2> inbox;
    std::int64_t clock = 0;

    auto deliver = [&](const std::vector<Outbound>& frames, std::size_t from_seat) {
        for (const auto& out : frames) {
            std::size_t seat = from_seat;
            if (!out.to.empty()) {
                seat = out.to == ids[1] ? 1 : 0;
                if (out.to != ids[0] && out.to != ids[1]) {
                    seat = from_seat;
                }
            }
            nlohmann::json frame = over_the_wire(out.frame);
            const std::string type = frame.value("type", "");
            if ((type == "move_ok" || type == "move_rejected") && seat != from_seat) {
                ++record.privacy_violations;
            }
            if (type == "round_start"
                && msg::board_from_round_start(frame) != session.state().boards.at(out.to)) {
                ++record.privacy_violations;
            }
            inbox[seat].push_back(frame);
            record.received[seat].push_back(frame);
        }
    };
    auto submit = [&](std::size_t seat, const nlohmann::json& frame) {
        clock += kTickMs;
        deliver(session.submit(ids[seat], over_the_wire(frame), clock), seat);
    };

    for (std::size_t seat = 0; seat < 2; ++seat) {
        clock += kTickMs;
        auto frames = session.submit("", msg::join(options.room_id, policies[seat]->policy_id()), clock);
        for (const auto& out : frames) {
            if (out.frame.value("type", "") == "joined") {
                ids[seat] = out.to;
            }
        }
        deliver(frames, seat);
    }

    int idle = 0;
    bool settled = false;
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
        const bool finished = session.state().phase == Phase::finished;
        if (finished && inbox[0].empty() && inbox[1].empty()) {
            settled = true;
            break;
        }
        bool progress = false;
        for (std::size_t seat = 0; seat < 2; ++seat) {
            while (!inbox[seat].empty()) {
                nlohmann::json frame = std::move(inbox[seat].front());
                inbox[seat].pop_front();
                progress = true;
                for (const auto& action : policies[seat]->on_frame(frame)) {
                    submit(seat, action);
                }
            }
            if (!finished) {
                auto actions = policies[seat]->on_idle();
                progress = progress || !actions.empty();
                for (const auto& action : actions) {
                    submit(seat, action);
                }
            }
        }
        if (progress) {
            idle = 0;
        } else if (++idle >= options.idle_limit) {
            record.aborted = true;
            record.abort_reason = "deadlock: no activity for " + std::to_string(idle) + " steps";
            break;
        }
    }
    if (!settled && !record.aborted) {
        record.aborted = true;
        record.abort_reason = "step limit reached";
    }
    if (session.state().scores.size() < static_cast<std::size_t>(options.scenes.round_count())
        && !record.aborted) {
        record.aborted = true;
        record.abort_reason = "game ended early";
    }

    record.final_state = session.state();
    record.scores = session.state().scores;
    record.log = session.log()->contents();
    record.transcripts = load_transcripts(parse_log(record.log));
    return record;
}

Matchup parse_matchup(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()
        || text.find(':', colon + 1) != std::string::npos) {
        throw std::invalid_argument("matchup must look like <policy>:<policy>, got '" + text + "'");
    }
    return Matchup{text.substr(0, colon), text.substr(colon + 1)};
}

std::string selfplay_room_id(const Matchup& matchup, std::uint64_t seed) {
    return matchup.first + "-vs-" + matchup.second + "-" + std::to_string(seed);
}

const MatchupSummary& BatchResult::summary(const std::string& matchup_name) const {
    for (const auto& s : summaries) {
        if (s.matchup.name() == matchup_name) {
            return s;
        }
    }
    throw std::out_of_range("no matchup " + matchup_name);
}

BatchResult batch_run(const BatchConfig& config) {
    BatchResult result;
    std::vector<analysis::GameInput> inputs;
    if (config.out_dir) {
        std::filesystem::create_directories(*config.out_dir);
    }

    for (const auto& matchup : config.matchups) {
        MatchupSummary summary;
        summary.matchup = matchup;
        std::array<int, 2> diff_games{};
        int scored = 0;
        for (std::uint64_t seed : config.seeds) {
            auto a = make_policy(matchup.first, mix_seed(2 * seed), config.context);
            auto b = make_policy(matchup.second, mix_seed(2 * seed + 1), config.context);
            HarnessOptions options;
            options.scenes = config.context.scenes;
            options.room_id = selfplay_room_id(matchup, seed);
            GameRecord record = run_game(*a, *b, seed, options);

            if (config.out_dir) {
                std::ofstream out(log_path(*config.out_dir, record.room_id), std::ios::trunc);
                out << record.log;
                if (!out) {
                    throw std::runtime_error("cannot write log for " + record.room_id);
                }
            }

            ++summary.games;
            if (record.aborted) {
                ++summary.aborted;
            } else {
                ++scored;
                for (std::size_t r = 0; r < 2 && r < record.scores.size(); ++r) {
                    summary.mean_score[r] += to_double(record.scores[r].value);
                }
            }
            for (std::size_t r = 0; r < 2 && r < record.transcripts.size(); ++r) {
                if (!record.transcripts[r].empty()) {
                    summary.mean_dominance_diff[r] +=
                        analysis::dominance_diff(record.transcripts[r], config.report.unit);
                    ++diff_games[r];
                }
            }

            analysis::GameInput input;
            input.game_id = record.room_id;
            input.rounds = record.transcripts;
            for (const auto& s : record.scores) {
                input.results.push_back({to_double(s.value), s.bonus});
            }
            inputs.push_back(std::move(input));
            result.records.push_back(std::move(record));
        }
        for (std::size_t r = 0; r < 2; ++r) {
            if (scored > 0) {
                summary.mean_score[r] /= scored;
            }
            if (diff_games[r] > 0) {
                summary.mean_dominance_diff[r] /= diff_games[r];
            }
        }
        result.summaries.push_back(summary);
    }
    if (!inputs.empty()) {
        result.report = analysis::report(inputs, config.report);
    }
    return result;
}

} // namespace placement
