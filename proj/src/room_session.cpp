// SPDX-License-Identifier: Apache-2.0
#include "placement/room_session.hpp"

namespace placement {

RoomSession::RoomSession(std::string room_id, SceneCatalog scenes, BoardSource boards,
                         std::optional<EventLog> log)
    : room_(std::move(room_id), std::move(scenes), std::move(boards)), log_(std::move(log)) {}

std::vector<Outbound> RoomSession::commit(Effects fx, std::int64_t now_ms) {
    if (room_.state().phase == Phase::round_done) {
        fx.append(room_.advance(now_ms));
    }
    if (log_) {
        for (const auto& e : fx.events) {
            log_->append(LogRecord{log_->last_seq() + 1, e.ts_ms, room_.state().room_id, e.actor,
                                   e.kind, e.payload});
        }
    }
    return std::move(fx.frames);
}

std::vector<Outbound> RoomSession::submit(const std::string& sender, const json& frame,
                                          std::int64_t now_ms) {
    try {
        const msg::Client request = msg::parse_client(frame);
        if (const auto* join = std::get_if<msg::Join>(&request)) {
            if (!sender.empty()) {
                throw ProtocolError("already_joined", "connection already joined as " + sender);
            }
            if (join->room != room_.state().room_id) {
                throw ProtocolError("wrong_room", "this is room " + room_.state().room_id);
            }
            return commit(room_.join(join->name, now_ms), now_ms);
        }
        if (sender.empty()) {
            throw ProtocolError("not_joined", "send a join frame first");
        }
        if (const auto* chat = std::get_if<msg::Chat>(&request)) {
            return commit(room_.chat(sender, chat->text, now_ms), now_ms);
        }
        if (const auto* move = std::get_if<msg::Move>(&request)) {
            return commit(room_.move(sender, move->object, move->to, now_ms), now_ms);
        }
        return commit(room_.ready(sender, now_ms), now_ms);
    } catch (const ProtocolError& e) {
        return {Outbound{sender, msg::error(e.code, e.what())}};
    }
}

std::vector<Outbound> RoomSession::disconnect(const std::string& player_id, std::int64_t now_ms) {
    if (!room_.state().has_player(player_id)) {
        return {};
    }
    return commit(room_.disconnect(player_id, now_ms), now_ms);
}

} // namespace placement
