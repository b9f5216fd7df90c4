// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "placement/selfplay.hpp"

using namespace placement;

namespace {

GameRecord play(const std::string& a, const std::string& b, std::uint64_t seed) {
    PolicyContext ctx;
    auto first = make_policy(a, mix_seed(2 * seed), ctx);
    auto second = make_policy(b, mix_seed(2 * seed + 1), ctx);
    HarnessOptions options;
    options.room_id = a + "-vs-" + b;
    return run_game(*first, *second, seed, options);
}

void check_complete(const GameRecord& r) {
    CAPTURE(r.room_id);
    CAPTURE(r.seed);
    CAPTURE(r.abort_reason);
    CHECK_FALSE(r.aborted);
    REQUIRE(r.scores.size() == 2);
    CHECK(r.privacy_violations == 0);
    CHECK(replay(parse_log(r.log), default_scenes()) == r.final_state);
}

// Words of every chat line sent by a policy, in order.
std::vector<std::string> lines_of(const GameRecord& r, const std::string& player) {
    std::vector<std::string> out;
    for (const auto& t : r.transcripts) {
        for (const auto& m : t.messages) {
            if (m.sender == player) {
                out.push_back(m.text);
            }
        }
    }
    return out;
}

} // namespace

TEST_CASE("scripted pairs agree on every object") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        for (const auto& [a, b] : std::vector<std::pair<std::string, std::string>>{
                 {"leader", "follower"}, {"alternating", "alternating"}, {"follower", "leader"},
                 {"grip_tightening", "grip_tightening"}, {"grip_loosening", "grip_loosening"}}) {
            const auto r = play(a, b, seed);
            check_complete(r);
            for (const auto& s : r.scores) {
                CHECK(s == Score{Rational(100), true});
            }
        }
    }
}

TEST_CASE("leader against the agent") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto r = play("leader", "agent", seed);
        check_complete(r);
        for (const auto& s : r.scores) {
            CHECK(s.value == Rational(100));
        }
        CHECK(r.transcripts.size() == 2);
    }
}

TEST_CASE("games are deterministic") {
    const auto a = play("leader", "agent", 3);
    const auto b = play("leader", "agent", 3);
    CHECK(a.log == b.log);
    CHECK(play("alternating", "alternating", 4).log == play("alternating", "alternating", 4).log);
    CHECK(play("leader", "agent", 3).log != play("leader", "agent", 4).log);
}

TEST_CASE("noisy leader") {
    PolicyContext ctx;
    // Rate zero is the plain leader.
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        auto plain = make_policy("leader", mix_seed(2 * seed), ctx);
        auto quiet = noisy_leader(0.0, mix_seed(2 * seed), false, ctx);
        auto f1 = make_policy("agent", mix_seed(2 * seed + 1), ctx);
        auto f2 = make_policy("agent", mix_seed(2 * seed + 1), ctx);
        const auto r1 = run_game(*plain, *f1, seed);
        const auto r2 = run_game(*quiet, *f2, seed);
        CHECK(lines_of(r1, "p1") == lines_of(r2, "p1"));
        CHECK(r1.scores == r2.scores);
    }
    // Synonyms only: the agent still gets everything.
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto r = play("noisy_leader@1", "agent", seed);
        check_complete(r);
        for (const auto& s : r.scores) {
            CHECK(s.value == Rational(100));
        }
    }
    const auto noisy = play("noisy_leader@1", "agent", 2);
    const auto plain = play("leader", "agent", 2);
    CHECK(lines_of(noisy, "p1") != lines_of(plain, "p1"));
    CHECK(lines_of(noisy, "p1") == lines_of(play("noisy_leader@1", "agent", 2), "p1"));

    // Unknown words make the agent ask again; the game still finishes.
    const auto oov = play("noisy_leader_oov@0.5", "agent", 5);
    CHECK_FALSE(oov.aborted);
    CHECK(oov.privacy_violations == 0);
}

TEST_CASE("deadlock is reported") {
    PolicyContext ctx;
    auto a = make_policy("follower", 1, ctx);
    auto b = make_policy("follower", 2, ctx);
    const auto r = run_game(*a, *b, 1);
    CHECK(r.aborted);
    CHECK(r.abort_reason.find("deadlock") != std::string::npos);
    CHECK(r.scores.empty());
}

TEST_CASE("policy names") {
    PolicyContext ctx;
    for (const std::string name : {"leader", "follower", "alternating", "grip_tightening",
                                   "grip_loosening", "agent", "noisy_leader@0.3", "noisy_leader_oov@0.2"}) {
        CHECK(make_policy(name, 1, ctx) != nullptr);
    }
    CHECK_THROWS(make_policy("wizard", 1, ctx));
    CHECK_THROWS(make_policy("noisy_leader@2", 1, ctx));
    CHECK(parse_matchup("leader:agent").name() == "leader:agent");
    CHECK_THROWS(parse_matchup("leader"));
    CHECK_THROWS(parse_matchup("a:b:c"));
}

TEST_CASE("batch run") {
    BatchConfig config;
    config.matchups = {parse_matchup("leader:follower"), parse_matchup("alternating:alternating")};
    for (std::uint64_t s = 1; s <= 10; ++s) {
        config.seeds.push_back(s);
    }
    const auto result = batch_run(config);
    CHECK(result.records.size() == 20);
    REQUIRE(result.report.has_value());
    const auto& lead = result.summary("leader:follower");
    const auto& alt = result.summary("alternating:alternating");
    CHECK(lead.aborted == 0);
    CHECK(alt.aborted == 0);
    for (int r = 0; r < 2; ++r) {
        CHECK(lead.mean_dominance_diff[r] > alt.mean_dominance_diff[r]);
        CHECK(lead.mean_score[r] == 100);
    }
    // Per seed, not only on average.
    for (std::size_t i = 0; i < 10; ++i) {
        for (std::size_t r = 0; r < 2; ++r) {
            CHECK(analysis::dominance_diff(result.records[i].transcripts[r])
                  > analysis::dominance_diff(result.records[10 + i].transcripts[r]));
        }
    }
    CHECK(batch_run(config).report->to_json() == result.report->to_json());
}
