// SPDX-License-Identifier: Apache-2.0
#include <random>
#include <set>

#include "doctest.h"
#include "placement/room_session.hpp"

using namespace placement;

namespace {

std::vector<const Outbound*> frames_of(const std::vector<Outbound>& out, const std::string& type) {
    std::vector<const Outbound*> found;
    for (const auto& o : out) {
        if (o.frame.value("type", "") == type) {
            found.push_back(&o);
        }
    }
    return found;
}

std::vector<const Outbound*> frames_of(const Effects& fx, const std::string& type) {
    return frames_of(fx.frames, type);
}

// Both seats start from the same layout.
BoardSource same_boards() {
    return [](const Scene& scene, int round, std::size_t) {
        return random_initial_placements(scene, static_cast<std::uint64_t>(round));
    };
}

struct Started {
    Room room;
    Started() : room("r", default_scenes(), seeded_board_source(5)) {
        room.join("alice", 1);
        room.join("bob", 2);
    }
};

// A free spot for `object` on `board`, scanning the grid.
Point free_spot(const Scene& scene, const Board& board, const std::string& object) {
    for (std::int64_t y = 5; y <= 95; ++y) {
        for (std::int64_t x = 5; x <= 95; ++x) {
            if (board.at(object) != Point{x, y}
                && validate_placement(scene, board, object, {x, y}) == PlacementCheck::ok) {
                return {x, y};
            }
        }
    }
    FAIL("no free spot");
    return {};
}

} // namespace

TEST_CASE("joining") {
    Room room("r", default_scenes(), seeded_board_source(1));
    auto first = room.join("alice", 10);
    CHECK(room.state().phase == Phase::waiting);
    REQUIRE(frames_of(first, "joined").size() == 1);
    CHECK(frames_of(first, "joined")[0]->to == "p1");
    CHECK(frames_of(first, "round_start").empty());

    auto second = room.join("bob", 20);
    CHECK(room.state().phase == Phase::playing);
    CHECK(frames_of(second, "joined")[0]->to == "p2");
    auto starts = frames_of(second, "round_start");
    REQUIRE(starts.size() == 2);
    std::set<std::string> recipients{starts[0]->to, starts[1]->to};
    CHECK(recipients == std::set<std::string>{"p1", "p2"});
    for (const auto* s : starts) {
        CHECK(s->frame["round"] == 1);
        CHECK(s->frame["scene"] == "kitchen");
        CHECK(msg::board_from_round_start(s->frame) == room.state().boards.at(s->to));
    }
    CHECK(room.state().boards.at("p1") != room.state().boards.at("p2"));

    const GameState before = room.state();
    try {
        room.join("carol", 30);
        FAIL("third join accepted");
    } catch (const ProtocolError& e) {
        CHECK(e.code == "room_full");
    }
    CHECK(room.state() == before);
}

TEST_CASE("chat goes to both players") {
    Started s;
    auto fx = s.room.chat("p1", "hi", 100);
    auto chats = frames_of(fx, "chat");
    REQUIRE(chats.size() == 2);
    CHECK(chats[0]->frame == chats[1]->frame);
    CHECK(chats[0]->frame["from"] == "p1");
    CHECK(chats[0]->frame["text"] == "hi");
    CHECK(chats[0]->frame["ts"] == 100);
    REQUIRE(s.room.state().chat.size() == 1);
    CHECK(s.room.state().chat[0] == ChatMessage{"p1", "hi", 100, 1});

    const std::string long_text(1000, 'x');
    s.room.chat("p2", long_text, 101);
    CHECK(s.room.state().chat.back().text == long_text);

    const GameState before = s.room.state();
    try {
        s.room.chat("p1", "   ", 102);
        FAIL("blank chat accepted");
    } catch (const ProtocolError& e) {
        CHECK(e.code == "empty_text");
    }
    CHECK(s.room.state() == before);
}

TEST_CASE("moves are private") {
    Started s;
    const Scene& scene = s.room.state().scene;
    const Board& board = s.room.state().boards.at("p1");
    const Point spot = free_spot(scene, board, "pillow");
    auto fx = s.room.move("p1", "pillow", spot, 5);
    REQUIRE(fx.frames.size() == 1);
    CHECK(fx.frames[0].to == "p1");
    CHECK(fx.frames[0].frame == msg::move_ok("pillow", spot));
    CHECK(s.room.state().boards.at("p1").at("pillow") == spot);

    const Point other = s.room.state().boards.at("p1").at("pants");
    fx = s.room.move("p1", "pillow", other, 6);
    REQUIRE(fx.frames.size() == 1);
    CHECK(fx.frames[0].to == "p1");
    CHECK(fx.frames[0].frame["type"] == "move_rejected");
    CHECK(fx.frames[0].frame["reason"] == "overlap");
    CHECK(s.room.state().boards.at("p1").at("pillow") == spot);

    fx = s.room.move("p1", "pillow", {0, 0}, 7);
    CHECK(fx.frames[0].frame["reason"] == "out_of_bounds");

    const GameState before = s.room.state();
    try {
        s.room.move("p1", "toaster", {50, 50}, 8);
        FAIL("landmark moved");
    } catch (const ProtocolError& e) {
        CHECK(e.code == "unknown_object");
    }
    CHECK(s.room.state() == before);
}

TEST_CASE("ready ends rounds and the game") {
    Room room("r", default_scenes(), same_boards());
    room.join("a", 1);
    room.join("b", 2);

    auto fx = room.ready("p1", 3);
    CHECK(fx.frames.empty());
    CHECK(room.state().phase == Phase::playing);
    CHECK(room.state().ready_flags.at("p1"));

    fx = room.ready("p2", 4);
    auto ends = frames_of(fx, "round_end");
    REQUIRE(ends.size() == 2);
    CHECK(ends[0]->frame["score"] == 100.0);
    CHECK(ends[0]->frame["bonus"] == true);
    CHECK(room.state().phase == Phase::round_done);
    try {
        room.chat("p1", "hello?", 5);
        FAIL("chat during round_done");
    } catch (const ProtocolError& e) {
        CHECK(e.code == "not_playing");
    }

    fx = room.advance(6);
    CHECK(room.state().round_index == 2);
    CHECK(room.state().scene.scene_id == "livingroom");
    CHECK(room.state().ready_flags.at("p1") == false);
    CHECK(frames_of(fx, "round_start").size() == 2);

    room.ready("p2", 7);
    fx = room.ready("p1", 8);
    CHECK(frames_of(fx, "round_end").size() == 2);
    auto game_end = frames_of(fx, "game_end");
    REQUIRE(game_end.size() == 2);
    CHECK(game_end[0]->frame["scores"] == nlohmann::json::array({100.0, 100.0}));
    CHECK(room.state().phase == Phase::finished);
    CHECK(room.state().scores.size() == 2);
    CHECK_THROWS_AS(room.advance(9), ProtocolError);
}

TEST_CASE("disconnect aborts with completed scores only") {
    Room room("r", default_scenes(), same_boards());
    room.join("a", 1);
    room.join("b", 2);
    room.ready("p1", 3);
    room.ready("p2", 4);
    room.advance(5);
    auto fx = room.disconnect("p2", 6);
    REQUIRE(fx.frames.size() == 1);
    CHECK(fx.frames[0].to == "p1");
    CHECK(fx.frames[0].frame["type"] == "game_end");
    CHECK(fx.frames[0].frame["aborted"] == true);
    CHECK(fx.frames[0].frame["scores"].size() == 1);
    CHECK(room.state().phase == Phase::finished);
    CHECK(room.disconnect("p1", 7).frames.empty());
}

TEST_CASE("room session errors are answered, not thrown") {
    RoomSession session("r", default_scenes(), seeded_board_source(1), EventLog::in_memory());
    auto out = session.submit("", msg::chat("hi"), 1);
    REQUIRE(out.size() == 1);
    CHECK(out[0].to == "");
    CHECK(out[0].frame["code"] == "not_joined");

    out = session.submit("", msg::join("other", "a"), 2);
    CHECK(out[0].frame["code"] == "wrong_room");

    out = session.submit("", msg::join("r", "a"), 3);
    CHECK(frames_of(out, "joined")[0]->to == "p1");
    out = session.submit("p1", msg::join("r", "a"), 4);
    CHECK(out[0].frame["code"] == "already_joined");

    out = session.submit("p1", nlohmann::json{{"type", "dance"}}, 5);
    CHECK(out[0].frame["code"] == "bad_frame");
    out = session.submit("p1", msg::chat("too early"), 6);
    CHECK(out[0].frame["code"] == "not_playing");

    session.submit("", msg::join("r", "b"), 7);
    out = session.submit("", msg::join("r", "c"), 8);
    CHECK(out[0].frame["code"] == "room_full");
    CHECK(session.state().phase == Phase::playing);
}

TEST_CASE("room session moves straight on to round two") {
    RoomSession session("r", default_scenes(), same_boards(), EventLog::in_memory());
    session.submit("", msg::join("r", "a"), 1);
    session.submit("", msg::join("r", "b"), 2);
    session.submit("p1", msg::ready(), 3);
    auto out = session.submit("p2", msg::ready(), 4);
    CHECK(frames_of(out, "round_end").size() == 2);
    auto starts = frames_of(out, "round_start");
    REQUIRE(starts.size() == 2);
    CHECK(starts[0]->frame["round"] == 2);
    CHECK(session.state().phase == Phase::playing);
    CHECK(session.state().round_index == 2);
}

TEST_CASE("room seeds") {
    CHECK(room_seed(1, "a") == room_seed(1, "a"));
    CHECK(room_seed(1, "a") != room_seed(1, "b"));
    CHECK(room_seed(1, "a") != room_seed(2, "a"));
    const Scene kitchen = default_scenes().get("kitchen");
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto source = seeded_board_source(seed);
        CHECK(source(kitchen, 1, 0) != source(kitchen, 1, 1));
        CHECK(source(kitchen, 1, 0) == seeded_board_source(seed)(kitchen, 1, 0));
    }
}

TEST_CASE("random event sequences keep the room invariants") {
    const auto scenes = default_scenes();
    for (std::uint64_t trial = 0; trial < 60; ++trial) {
        std::mt19937_64 rng(trial);
        RoomSession a("r", scenes, seeded_board_source(trial), EventLog::in_memory());
        RoomSession b("r", scenes, seeded_board_source(trial), EventLog::in_memory());
        std::vector<std::pair<std::string, nlohmann::json>> script;
        script.push_back({"", msg::join("r", "x")});
        script.push_back({"", msg::join("r", "y")});
        std::uniform_int_distribution<int> kind(0, 19);
        std::uniform_int_distribution<std::int64_t> coord(-5, 105);
        for (int i = 0; i < 300; ++i) {
            const std::string who = rng() % 2 ? "p1" : "p2";
            const int k = kind(rng);
            if (k == 0) {
                script.push_back({who, msg::ready()});
            } else if (k < 4) {
                script.push_back({who, msg::chat(k == 1 ? " " : "msg " + std::to_string(i))});
            } else {
                const auto& objs = scenes.for_round(1).objects;
                script.push_back({who, msg::move(objs[rng() % objs.size()], {coord(rng), coord(rng)})});
            }
        }

        int last_round = 1;
        int round_ends = 0;
        std::int64_t now = 0;
        for (const auto& [who, frame] : script) {
            ++now;
            const GameState before = a.state();
            auto out = a.submit(who, frame, now);
            b.submit(who, frame, now);
            CHECK(a.state() == b.state());
            CHECK(a.state().round_index >= last_round);
            last_round = a.state().round_index;
            if (a.state().phase == Phase::playing) {
                CHECK(a.state().players.size() == 2);
            }
            for (const auto& o : out) {
                const std::string type = o.frame.value("type", "");
                if (type == "error") {
                    CHECK(a.state() == before);
                }
                if (type == "move_ok" || type == "move_rejected") {
                    CHECK(o.to == who);
                }
                if (type == "round_start") {
                    CHECK(msg::board_from_round_start(o.frame) == a.state().boards.at(o.to));
                }
                if (type == "round_end" && o.to == "p1") {
                    ++round_ends;
                }
            }
            for (const auto& [id, board] : a.state().boards) {
                CHECK_FALSE(board_violation(a.state().scene, board).has_value());
            }
        }
        if (a.state().phase == Phase::finished) {
            CHECK(round_ends == 2);
        }
        CHECK(a.log()->contents() == b.log()->contents());
    }
}
