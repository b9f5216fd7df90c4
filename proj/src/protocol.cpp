// SPDX-License-Identifier: Apache-2.0
#include "placement/protocol.hpp"

namespace placement::msg {

namespace {

[[noreturn]] void bad_frame(const std::string& why) {
    throw ProtocolError("bad_frame", why);
}

const json& field(const json& frame, const char* name, json::value_t kind) {
    auto it = frame.find(name);
    if (it == frame.end()) {
        bad_frame(std::string("missing field '") + name + "'");
    }
    const bool number_ok = kind == json::value_t::number_integer
                           && (it->is_number_integer() || it->is_number_unsigned());
    if (it->type() != kind && !number_ok) {
        bad_frame(std::string("field '") + name + "' has the wrong type");
    }
    return *it;
}

} // namespace

Client parse_client(const json& frame) {
    if (!frame.is_object()) {
        bad_frame("frame is not a JSON object");
    }
    const std::string type = field(frame, "type", json::value_t::string).get<std::string>();
    if (type == "join") {
        return Join{field(frame, "room", json::value_t::string).get<std::string>(),
                    field(frame, "name", json::value_t::string).get<std::string>()};
    }
    if (type == "chat") {
        return Chat{field(frame, "text", json::value_t::string).get<std::string>()};
    }
    if (type == "move") {
        return Move{field(frame, "object", json::value_t::string).get<std::string>(),
                    Point{field(frame, "x", json::value_t::number_integer).get<std::int64_t>(),
                          field(frame, "y", json::value_t::number_integer).get<std::int64_t>()}};
    }
    if (type == "ready") {
        return Ready{};
    }
    bad_frame("unknown frame type '" + type + "'");
}

Client parse_client(const std::string& text) {
    json frame = json::parse(text, nullptr, false);
    if (frame.is_discarded()) {
        bad_frame("frame is not valid JSON");
    }
    return parse_client(frame);
}

json join(const std::string& room, const std::string& name) {
    return {{"type", "join"}, {"room", room}, {"name", name}};
}

json chat(const std::string& text) {
    return {{"type", "chat"}, {"text", text}};
}

json move(const std::string& object, Point to) {
    return {{"type", "move"}, {"object", object}, {"x", to.x}, {"y", to.y}};
}

json ready() {
    return {{"type", "ready"}};
}

json joined(const std::string& player_id) {
    return {{"type", "joined"}, {"player_id", player_id}};
}

json round_start(int round, const Scene& scene, const Board& board) {
    json placements = json::array();
    for (const auto& object : scene.objects) {
        const Point& p = board.at(object);
        placements.push_back({{"object", object}, {"x", p.x}, {"y", p.y}});
    }
    return {{"type", "round_start"}, {"round", round}, {"scene", scene.scene_id},
            {"placements", placements}};
}

json chat_broadcast(const std::string& from, const std::string& text, std::int64_t ts) {
    return {{"type", "chat"}, {"from", from}, {"text", text}, {"ts", ts}};
}

json move_ok(const std::string& object, Point to) {
    return {{"type", "move_ok"}, {"object", object}, {"x", to.x}, {"y", to.y}};
}

json move_rejected(const std::string& object, PlacementCheck reason) {
    return {{"type", "move_rejected"}, {"object", object}, {"reason", std::string(to_string(reason))}};
}

json round_end(int round, const Score& score) {
    return {{"type", "round_end"}, {"round", round}, {"score", to_double(score.value)},
            {"bonus", score.bonus}};
}

json game_end(const std::vector<Score>& scores, bool aborted) {
    json values = json::array();
    for (const auto& s : scores) {
        values.push_back(to_double(s.value));
    }
    json frame = {{"type", "game_end"}, {"scores", values}};
    if (aborted) {
        frame["aborted"] = true;
    }
    return frame;
}

json error(const std::string& code, const std::string& message) {
    return {{"type", "error"}, {"code", code}, {"message", message}};
}

Board board_from_round_start(const json& frame) {
    Board board;
    for (const auto& item : frame.at("placements")) {
        board.placements[item.at("object").get<std::string>()] =
            Point{item.at("x").get<std::int64_t>(), item.at("y").get<std::int64_t>()};
    }
    return board;
}

} // namespace placement::msg
