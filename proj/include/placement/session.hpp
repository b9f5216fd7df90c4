// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "placement/game.hpp"
#include "placement/protocol.hpp"
#include "placement/scenes.hpp"

namespace placement {

enum class Phase { waiting, playing, round_done, finished };

std::string_view to_string(Phase phase);

struct PlayerSlot {
    std::string player_id;
    std::string display_name;
    bool connected = true;

    friend bool operator==(const PlayerSlot&, const PlayerSlot&) = default;
};

struct ChatMessage {
    std::string sender;
    std::string text;
    std::int64_t timestamp_ms = 0;
    int round = 1;

    friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct GameState {
    std::string room_id;
    std::vector<PlayerSlot> players;
    int round_index = 1;
    Scene scene;
    std::map<std::string, Board> boards;
    std::vector<ChatMessage> chat;
    Phase phase = Phase::waiting;
    std::map<std::string, bool> ready_flags;
    std::vector<Score> scores;

    bool has_player(const std::string& player_id) const;
    const PlayerSlot* partner_of(const std::string& player_id) const;

    friend bool operator==(const GameState&, const GameState&) = default;
};

/// A frame addressed to one player.
struct Outbound {
    std::string to;
    json frame;
};

/// Something the room did, in the form the event log stores it.
struct RoomEvent {
    std::string actor;
    std::string kind;
    json payload;
    std::int64_t ts_ms = 0;
};

struct Effects {
    std::vector<Outbound> frames;
    std::vector<RoomEvent> events;

    void append(Effects&& other);
};

/// Produces a player's starting board. `seat` is 0 for the first joiner.
using BoardSource = std::function<Board(const Scene& scene, int round, std::size_t seat)>;

/// Seed for a room, derived from the server's root seed and the room id.
std::uint64_t room_seed(std::uint64_t root_seed, const std::string& room_id);

/// Random boards; the two seats of a round always get different layouts.
BoardSource seeded_board_source(std::uint64_t seed);

/// The serialized state machine of one game room.
///
/// Each handler either throws ProtocolError without touching the state, or
/// applies the event and reports the frames to deliver and the events to
/// log. Not thread-safe: callers serialize access per room.
class Room {
public:
    Room(std::string room_id, SceneCatalog scenes, BoardSource boards);

    const GameState& state() const { return state_; }
    const SceneCatalog& scenes() const { return scenes_; }

    Effects join(const std::string& name, std::int64_t now_ms);
    Effects chat(const std::string& sender, const std::string& text, std::int64_t now_ms);
    Effects move(const std::string& sender, const std::string& object, Point to, std::int64_t now_ms);
    Effects ready(const std::string& sender, std::int64_t now_ms);

    /// Starts the next round after round_done.
    Effects advance(std::int64_t now_ms);

    /// Marks the player gone. An unfinished game is aborted; the completed
    /// rounds keep their scores.
    Effects disconnect(const std::string& player_id, std::int64_t now_ms);

private:
    void require_player(const std::string& player_id) const;
    void require_playing() const;
    Effects start_round(int round, std::int64_t now_ms);

    SceneCatalog scenes_;
    BoardSource boards_;
    GameState state_;
};

} // namespace placement
