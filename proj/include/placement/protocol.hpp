// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "placement/game.hpp"

namespace placement {

using nlohmann::json;

/// A request the room refuses. `code` goes on the wire in the error frame.
class ProtocolError : public std::runtime_error {
public:
    ProtocolError(std::string code, const std::string& message)
        : std::runtime_error(message), code(std::move(code)) {}
    std::string code;
};

namespace msg {

struct Join {
    std::string room;
    std::string name;
};
struct Chat {
    std::string text;
};
struct Move {
    std::string object;
    Point to;
};
struct Ready {};

using Client = std::variant<Join, Chat, Move, Ready>;

/// Throws ProtocolError("bad_frame") on anything that is not a well-formed
/// client frame.
Client parse_client(const json& frame);
Client parse_client(const std::string& text);

json join(const std::string& room, const std::string& name);
json chat(const std::string& text);
json move(const std::string& object, Point to);
json ready();

// Server to client.
json joined(const std::string& player_id);
json round_start(int round, const Scene& scene, const Board& board);
json chat_broadcast(const std::string& from, const std::string& text, std::int64_t ts);
json move_ok(const std::string& object, Point to);
json move_rejected(const std::string& object, PlacementCheck reason);
json round_end(int round, const Score& score);
json game_end(const std::vector<Score>& scores, bool aborted);
json error(const std::string& code, const std::string& message);

/// Placements carried by a round_start frame.
Board board_from_round_start(const json& frame);

} // namespace msg

} // namespace placement
