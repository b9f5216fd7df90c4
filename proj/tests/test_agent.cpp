// SPDX-License-Identifier: Apache-2.0
#include <random>

#include "doctest.h"
#include "placement/agent.hpp"
#include "placement/protocol.hpp"

using namespace placement;

namespace {

class DeadParser : public InstructionParser {
public:
    std::string name() const override { return "dead"; }
    bool is_instruction(std::string_view, const Lexicon&) override { fail(); return false; }
    TargetLandmark extract_target_landmark(std::string_view, const Lexicon&) override {
        fail();
        return {};
    }
    Direction extract_direction(std::string_view, const Lexicon&) override {
        fail();
        return Direction::on;
    }
    int calls = 0;

private:
    void fail() {
        ++calls;
        throw ParserUnavailable("timed out");
    }
};

// Agent seated as p2 in a kitchen round with the given board.
Agent seated(Board board, std::shared_ptr<InstructionParser> parser = std::make_shared<RuleParser>(),
             std::shared_ptr<InstructionParser> fallback = nullptr) {
    const auto scenes = default_scenes();
    Agent agent(scenes, default_synonyms(), std::move(parser), std::move(fallback));
    agent.step(msg::joined("p2"));
    auto opening = agent.step(msg::round_start(1, scenes.get("kitchen"), board));
    REQUIRE(opening.size() == 1);
    CHECK(opening[0]["type"] == "chat");
    return agent;
}

// Objects parked along the bottom edge, clear of the kitchen landmarks'
// neighbourhoods used below.
Board parked() {
    Board b;
    std::int64_t x = 5;
    const auto scenes = default_scenes();
    for (const auto& obj : scenes.get("kitchen").objects) {
        b.placements[obj] = {x, 95};
        x += 12;
    }
    return b;
}

std::vector<nlohmann::json> say(Agent& agent, const std::string& text) {
    return agent.step(msg::chat_broadcast("p1", text, 1));
}

std::size_t moves_in(const std::vector<nlohmann::json>& frames) {
    return static_cast<std::size_t>(std::count_if(frames.begin(), frames.end(),
                                                  [](const auto& f) { return f["type"] == "move"; }));
}

} // namespace

TEST_CASE("follows an instruction with a move and a confirmation") {
    Agent agent = seated(parked());
    auto out = say(agent, "put the pillow to the right of the fridge");
    REQUIRE(out.size() == 2);
    CHECK(out[0] == msg::move("pillow", {25, 40}));
    CHECK(out[1]["type"] == "chat");
    CHECK(out[1]["text"].get<std::string>().rfind("ok", 0) == 0);
    CHECK(agent.board().at("pillow") == Point{25, 40});

    out = say(agent, "cap above the lamp");
    CHECK(out[0] == msg::move("cap", {75, 5}));
}

TEST_CASE("answers questions without moving") {
    Agent agent = seated(parked());
    auto out = say(agent, "what objects do you have?");
    REQUIRE(out.size() == 1);
    CHECK(out[0]["type"] == "chat");
    CHECK(out[0]["text"].get<std::string>().find("pillow") != std::string::npos);
}

TEST_CASE("stays passive without instructions") {
    Agent agent = seated(parked());
    const std::vector<std::string> chatter = {"hi", "how are you", "hmm", "let me think", "nice",
                                              "what objects do you have?", "do you have a toaster?"};
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        CHECK(moves_in(say(agent, chatter[rng() % chatter.size()])) == 0);
    }
    // Its own messages come back from the server and are ignored.
    CHECK(agent.step(msg::chat_broadcast("p2", "put the cap on the sink", 2)).empty());
    CHECK(agent.step(msg::move_ok("cap", parked().at("cap"))).empty());
    CHECK(agent.board() == parked());
}

TEST_CASE("occupied spot doubles the offset") {
    Board b = parked();
    b.placements["pants"] = {25, 40};
    Agent agent = seated(b);
    auto out = say(agent, "put the pillow to the right of the fridge");
    REQUIRE(out.size() == 2);
    CHECK(out[0] == msg::move("pillow", {35, 40}));
    CHECK(out[1]["text"].get<std::string>().find("further") != std::string::npos);

    b.placements["pants"] = {25, 40};
    b.placements["cap"] = {35, 40};
    Agent second = seated(b);
    out = say(second, "put the pillow next to the fridge");
    CHECK(out[0] == msg::move("pillow", {55, 40}));

    b.placements["garbage"] = {55, 40};
    Agent third = seated(b);
    out = say(third, "put the pillow next to the fridge");
    REQUIRE(out.size() == 1);
    CHECK(out[0]["text"].get<std::string>().rfind("sorry", 0) == 0);
}

TEST_CASE("occupied landmark and edges") {
    Board b = parked();
    b.placements["pants"] = {15, 40};
    Agent agent = seated(b);
    auto out = say(agent, "put the pillow on the fridge");
    REQUIRE(out.size() == 1);
    CHECK(moves_in(out) == 0);

    out = say(agent, "put the cowboy hat way above the lamp");
    CHECK(out[0] == msg::move("cowboy", {75, 5}));
    out = say(agent, "put the cap above the lamp");
    REQUIRE(out.size() == 1);
    CHECK(out[0]["text"].get<std::string>().find("would not fit") != std::string::npos);
}

TEST_CASE("unclear instructions get one clarification") {
    Agent agent = seated(parked());
    auto out = say(agent, "put it on the fridge");
    REQUIRE(out.size() == 1);
    CHECK(out[0]["type"] == "chat");
    out = say(agent, "put the cap somewhere over there on the left");
    REQUIRE(out.size() == 1);
    CHECK(moves_in(out) == 0);
}

TEST_CASE("falls back to rules when the remote parser is down") {
    auto dead = std::make_shared<DeadParser>();
    Agent agent = seated(parked(), dead, std::make_shared<RuleParser>());
    auto out = say(agent, "put the jeans on the stove");
    REQUIRE(out.size() == 2);
    CHECK(out[0] == msg::move("pants", {55, 75}));
    CHECK(agent.fallbacks_used() >= 1);
    CHECK(dead->calls >= 1);

    Agent stranded = seated(parked(), std::make_shared<DeadParser>());
    CHECK_THROWS_AS(say(stranded, "put the jeans on the stove"), ParserUnavailable);
}

TEST_CASE("signals ready when the partner is done") {
    Agent agent = seated(parked());
    auto out = say(agent, "all done, ready");
    REQUIRE(out.size() == 2);
    CHECK(out[1] == msg::ready());
    CHECK(say(agent, "done!").empty());
    CHECK(signals_round_end("I'm finished"));
    CHECK_FALSE(signals_round_end("put the cap on the sink"));

    // A new round clears the flag.
    agent.step(msg::round_end(1, Score{}));
    agent.step(msg::round_start(2, default_scenes().get("livingroom"),
                                random_initial_placements(default_scenes().get("livingroom"), 1)));
    out = say(agent, "done");
    CHECK(out.back() == msg::ready());
}
