// SPDX-License-Identifier: Apache-2.0
// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "gold.hpp"
#include "placement/analysis.hpp"
#include "placement/selfplay.hpp"
#include "placement/server.hpp"
#include "placement/ws_client.hpp"

using namespace placement;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            detail << "first failure: " << what << "; ";
        }
        pass = pass && ok;
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

long double oracle_logistic(long double x) {
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int n = 1; n < 60; ++n) {
        term *= -x / n;
        sum += term;
    }
    return 1.0L / (1.0L + sum);
}

Transcript transcript(int a, int len_a, int b, int len_b) {
    Transcript t;
    t.player_ids = {"p1", "p2"};
    auto words = [](int n) {
        std::string s;
        for (int i = 0; i < n; ++i) {
            s += i ? " w" : "w";
        }
        return s;
    };
    for (int i = 0; i < a; ++i) {
        t.messages.push_back({"p1", words(len_a), i, 1});
    }
    for (int i = 0; i < b; ++i) {
        t.messages.push_back({"p2", words(len_b), a + i, 1});
    }
    return t;
}

GameRecord play(const std::string& a, const std::string& b, std::uint64_t seed) {
    PolicyContext ctx;
    auto first = make_policy(a, mix_seed(2 * seed), ctx);
    auto second = make_policy(b, mix_seed(2 * seed + 1), ctx);
    HarnessOptions options;
    options.room_id = selfplay_room_id({a, b}, seed);
    return run_game(*first, *second, seed, options);
}

std::vector<GameRecord> g_games;

Outcome scoring_oracle() {
    Outcome o;
    const auto start = Clock::now();
    const Scene scene = default_scenes().get("kitchen");
    const std::int64_t dmax = scene.width + scene.height;
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::int64_t> coord(0, 100);
    for (int i = 0; i < 1000; ++i) {
        Board a;
        Board b;
        for (const auto& obj : scene.objects) {
            a.placements[obj] = {coord(rng), coord(rng)};
            b.placements[obj] = {coord(rng), coord(rng)};
        }
        const Score s = score_boards(a, b, scene);
        o.require(score_boards(a, a, scene) == Score{Rational(100), true}, "score(a,a) != 100");
        o.require(score_boards(b, a, scene) == s, "score not symmetric");

        std::int64_t sum = 0;
        for (const auto& obj : scene.objects) {
            sum += std::llabs(a.at(obj).x - b.at(obj).x) + std::llabs(a.at(obj).y - b.at(obj).y);
        }
        const std::int64_t total = static_cast<std::int64_t>(scene.objects.size()) * dmax;
        o.require(s.bonus == (100 * sum < total), "bonus does not match value > 99");
        o.require(s.bonus == (s.value > 99), "bonus flag inconsistent");

        // Move one object one unit farther from its partner.
        Board c = b;
        const auto& obj = scene.objects[rng() % scene.objects.size()];
        Point& p = c.placements[obj];
        p.x += p.x >= a.at(obj).x ? 1 : -1;
        o.require(score_boards(a, c, scene).value <= s.value, "score rose with distance");
    }
    const double t = seconds_since(start);
    o.require(t < 5.0, "took longer than 5 s");
    o.detail << "1000 pairs in " << t << " s";
    return o;
}

Outcome dominance_formula() {
    Outcome o;
    struct Case {
        Transcript t;
        long double rd;
        double va;
        double vb;
        double expect_a;
        double expect_b;
    };
    const std::vector<Case> cases = {
        {transcript(4, 6, 4, 6), 0.0L, 6, 6, 3.0, 3.0},
        {transcript(9, 10, 1, 10), 0.8L, 10, 10, 6.899744, 3.100255},
        {transcript(3, 8, 1, 4), 0.5L, 8, 4, 4.979674, 1.510163},
    };
    double worst = 0;
    for (const auto& c : cases) {
        const auto r = analysis::dominance(c.t);
        const long double l = oracle_logistic(c.rd);
        const double oa = static_cast<double>(c.va * l);
        const double ob = static_cast<double>(c.vb * (1 - l));
        const double ea = std::abs(r.d.at("p1") - oa);
        const double eb = std::abs(r.d.at("p2") - ob);
        worst = std::max({worst, ea, eb});
        o.require(ea <= 1e-6 && eb <= 1e-6, "differs from oracle");
        o.require(std::abs(oa - c.expect_a) < 1e-6 && std::abs(ob - c.expect_b) < 1e-6,
                  "oracle differs from the worked values");
    }
    const double diff = analysis::dominance_diff(cases[1].t);
    const long double l8 = oracle_logistic(0.8L);
    o.require(std::abs(diff - static_cast<double>(10 * l8 - 10 * (1 - l8))) < 1e-6, "90/10 diff");
    o.detail << "3 cases, max error " << worst;
    return o;
}

Outcome gold_parses() {
    Outcome o;
    RuleParser parser;
    const Lexicon lex = Lexicon::for_scene(default_scenes().get("kitchen"), default_synonyms());
    int n = 0;
    for (const auto& ex : gold::kDetection) {
        o.require(parser.is_instruction(ex.text, lex) == ex.instruction, "detection: " + ex.text);
        ++n;
    }
    for (const auto& ex : gold::kExtraction) {
        TargetLandmark got;
        try {
            got = parser.extract_target_landmark(ex.text, lex);
        } catch (const ParseFailure&) {
        }
        o.require(got == TargetLandmark{ex.target, ex.landmark}, "extraction: " + ex.text);
        ++n;
    }
    for (const auto& ex : gold::kDirection) {
        bool ok = false;
        try {
            ok = parser.extract_direction(ex.text, lex) == ex.direction;
        } catch (const ParseFailure&) {
        }
        o.require(ok, "direction: " + ex.text);
        ++n;
    }
    const Point r{40, 60};
    o.require(resolve_position(r, Direction::on) == Point{40, 60}, "on");
    o.require(resolve_position(r, Direction::next_to) == Point{50, 60}, "next to");
    o.require(resolve_position(r, Direction::above) == Point{40, 50}, "above");
    o.require(resolve_position(r, Direction::below) == Point{40, 70}, "below");
    o.detail << n << " labelled examples, 4 position rules";
    return o;
}

Outcome selfplay_agent() {
    Outcome o;
    double slowest = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto start = Clock::now();
        GameRecord r = play("leader", "agent", seed);
        const double t = seconds_since(start);
        slowest = std::max(slowest, t);
        o.require(!r.aborted, "seed " + std::to_string(seed) + " aborted: " + r.abort_reason);
        o.require(r.scores.size() == 2, "seed " + std::to_string(seed) + " incomplete");
        for (const auto& s : r.scores) {
            o.require(s.value == Rational(100), "seed " + std::to_string(seed) + " scored "
                                                    + std::to_string(to_double(s.value)));
        }
        o.require(t < 1.0, "seed " + std::to_string(seed) + " took " + std::to_string(t) + " s");
        o.require(play("leader", "agent", seed).log == r.log, "rerun log differs");
        g_games.push_back(std::move(r));
    }
    o.detail << "10 seeds, slowest game " << slowest << " s";
    return o;
}

Outcome strategy_pattern() {
    Outcome o;
    auto mean_diffs = [&](const std::string& a, const std::string& b) {
        std::array<double, 2> sum{};
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            GameRecord r = play(a, b, seed);
            o.require(!r.aborted && r.transcripts.size() == 2, a + ":" + b + " game incomplete");
            for (std::size_t k = 0; k < 2 && k < r.transcripts.size(); ++k) {
                sum[k] += analysis::dominance_diff(r.transcripts[k]);
            }
            g_games.push_back(std::move(r));
        }
        return std::array<double, 2>{sum[0] / 20, sum[1] / 20};
    };
    const auto lead = mean_diffs("leader", "follower");
    const auto alt = mean_diffs("alternating", "alternating");
    const auto tight = mean_diffs("grip_tightening", "grip_tightening");
    const auto loose = mean_diffs("grip_loosening", "grip_loosening");
    o.require(lead[0] > alt[0] && lead[1] > alt[1], "leader not above alternating");
    o.require(tight[1] > tight[0], "grip tightening not rising");
    o.require(loose[0] > loose[1], "grip loosening not falling");
    o.detail << std::fixed;
    o.detail.precision(3);
    o.detail << "leader " << lead[0] << "/" << lead[1] << ", alternating " << alt[0] << "/" << alt[1]
             << ", tightening " << tight[0] << "/" << tight[1] << ", loosening " << loose[0] << "/"
             << loose[1];
    return o;
}

Outcome replay_determinism() {
    Outcome o;
    const auto scenes = default_scenes();
    for (const auto& r : g_games) {
        o.require(replay(parse_log(r.log), scenes) == r.final_state, "replay differs for " + r.room_id);
    }
    o.require(!g_games.empty(), "no games");
    o.detail << g_games.size() << " harness games";
    return o;
}

Outcome protocol_privacy() {
    Outcome o;
    std::size_t frames = 0;
    for (const auto& r : g_games) {
        o.require(r.privacy_violations == 0, "harness flagged " + r.room_id);
        for (std::size_t seat = 0; seat < 2; ++seat) {
            for (const auto& f : r.received[seat]) {
                ++frames;
                const std::string type = f.value("type", "");
                if (type != "round_start") {
                    o.require(!f.contains("placements"), "placements in " + type);
                }
                if (type != "move_ok") {
                    o.require(!(f.contains("x") || f.contains("y")), "coordinates in " + type);
                }
            }
        }
    }

    // Over a real socket: rejections carry the right reason and the partner
    // sees nothing of the mover's board.
    ServerOptions options;
    options.address = "127.0.0.1";
    options.port = 0;
    GameServer server(options);
    const auto port = server.start();
    WsClient a("127.0.0.1", port, "/", std::chrono::seconds(5));
    WsClient b("127.0.0.1", port, "/", std::chrono::seconds(5));
    auto next = [](WsClient& c, const std::string& type) {
        for (int i = 0; i < 20; ++i) {
            auto f = c.receive();
            if (f.value("type", "") == type) {
                return f;
            }
        }
        return nlohmann::json{};
    };
    a.send(msg::join("acceptance", "a"));
    b.send(msg::join("acceptance", "b"));
    const Board board = msg::board_from_round_start(next(a, "round_start"));
    next(b, "round_start");
    a.send(msg::move("pillow", board.at("pants")));
    o.require(next(a, "move_rejected").value("reason", "") == "overlap", "overlap reason");
    a.send(msg::move("pillow", {0, 0}));
    o.require(next(a, "move_rejected").value("reason", "") == "out_of_bounds", "out_of_bounds reason");
    a.send(msg::move("pillow", {200, 50}));
    o.require(next(a, "move_rejected").value("reason", "") == "out_of_bounds", "far out_of_bounds reason");
    b.send(msg::chat("probe"));
    const auto probe = b.receive();
    o.require(probe.value("type", "") == "chat" && probe.value("text", "") == "probe",
              "partner received something before its own chat");
    server.stop();
    o.detail << frames << " frames scanned, 3 live rejections";
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"scoring oracle", scoring_oracle},
        {"dominance formula", dominance_formula},
        {"agent gold parses", gold_parses},
        {"self-play leader vs agent", selfplay_agent},
        {"strategy pattern", strategy_pattern},
        {"replay determinism", replay_determinism},
        {"protocol privacy", protocol_privacy},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail.str() << std::endl;
        failed += o.pass ? 0 : 1;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
