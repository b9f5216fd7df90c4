// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "placement/event_log.hpp"
#include "placement/session.hpp"

namespace placement {

/// Drives a Room from wire frames: decodes them, applies them, logs every
/// event and moves straight on to the next round when one ends.
///
/// Protocol errors are answered with an error frame to the sender instead
/// of being thrown. Outbound frames are in emission order.
class RoomSession {
public:
    RoomSession(std::string room_id, SceneCatalog scenes, BoardSource boards,
                std::optional<EventLog> log = std::nullopt);

    /// `sender` is empty for a connection that has not joined yet; frames
    /// for it are addressed to "".
    std::vector<Outbound> submit(const std::string& sender, const json& frame, std::int64_t now_ms);

    std::vector<Outbound> disconnect(const std::string& player_id, std::int64_t now_ms);

    const GameState& state() const { return room_.state(); }
    const EventLog* log() const { return log_ ? &*log_ : nullptr; }

private:
    std::vector<Outbound> commit(Effects fx, std::int64_t now_ms);

    Room room_;
    std::optional<EventLog> log_;
};

} // namespace placement
