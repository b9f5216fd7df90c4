// SPDX-License-Identifier: Apache-2.0
#include "placement/session.hpp"

#include <algorithm>
#include <cctype>

namespace placement {

namespace {

constexpr std::size_t kPlayers = 2;

bool blank(const std::string& text) {
    return std::all_of(text.begin(), text.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

// FNV-1a, stable across platforms unlike std::hash.
std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

} // namespace

std::string_view to_string(Phase phase) {
    switch (phase) {
    case Phase::waiting: return "waiting";
    case Phase::playing: return "playing";
    case Phase::round_done: return "round_done";
    case Phase::finished: return "finished";
    }
    return "unknown";
}

bool GameState::has_player(const std::string& player_id) const {
    return std::any_of(players.begin(), players.end(),
                       [&](const PlayerSlot& p) { return p.player_id == player_id; });
}

const PlayerSlot* GameState::partner_of(const std::string& player_id) const {
    for (const auto& p : players) {
        if (p.player_id != player_id) {
            return &p;
        }
    }
    return nullptr;
}

void Effects::append(Effects&& other) {
    for (auto& f : other.frames) {
        frames.push_back(std::move(f));
    }
    for (auto& e : other.events) {
        events.push_back(std::move(e));
    }
}

std::uint64_t room_seed(std::uint64_t root_seed, const std::string& room_id) {
    return mix_seed(root_seed ^ fnv1a(room_id));
}

BoardSource seeded_board_source(std::uint64_t seed) {
    return [seed](const Scene& scene, int round, std::size_t seat) {
        const std::uint64_t base = mix_seed(seed) + static_cast<std::uint64_t>(round) * 1024;
        Board own = random_initial_placements(scene, base + 2 * seat);
        if (seat == 1) {
            Board first = random_initial_placements(scene, base);
            std::uint64_t retry = base + 2 * seat;
            while (own == first) {
                retry += 2 * kPlayers;
                own = random_initial_placements(scene, retry);
            }
        }
        return own;
    };
}

Room::Room(std::string room_id, SceneCatalog scenes, BoardSource boards)
    : scenes_(std::move(scenes)), boards_(std::move(boards)) {
    state_.room_id = std::move(room_id);
    state_.scene = scenes_.for_round(1);
}

void Room::require_player(const std::string& player_id) const {
    if (!state_.has_player(player_id)) {
        throw ProtocolError("unknown_player", "no player '" + player_id + "' in this room");
    }
}

void Room::require_playing() const {
    if (state_.phase != Phase::playing) {
        throw ProtocolError("not_playing", "room is " + std::string(to_string(state_.phase)));
    }
}

Effects Room::join(const std::string& name, std::int64_t now_ms) {
    if (state_.phase != Phase::waiting || state_.players.size() >= kPlayers) {
        throw ProtocolError("room_full", "room " + state_.room_id + " is not accepting players");
    }
    const std::string id = "p" + std::to_string(state_.players.size() + 1);

    // Boards are drawn before any mutation so a failing source leaves the
    // room untouched.
    std::map<std::string, Board> boards;
    if (state_.players.size() + 1 == kPlayers) {
        const Scene& scene = scenes_.for_round(1);
        boards[state_.players[0].player_id] = boards_(scene, 1, 0);
        boards[id] = boards_(scene, 1, 1);
    }

    state_.players.push_back(PlayerSlot{id, name.empty() ? id : name, true});
    state_.ready_flags[id] = false;

    Effects fx;
    fx.frames.push_back({id, msg::joined(id)});
    fx.events.push_back({id, "join", msg::join(state_.room_id, name), now_ms});

    if (!boards.empty()) {
        state_.boards = std::move(boards);
        fx.append(start_round(1, now_ms));
    }
    return fx;
}

Effects Room::start_round(int round, std::int64_t now_ms) {
    state_.round_index = round;
    state_.scene = scenes_.for_round(round);
    state_.phase = Phase::playing;
    for (auto& [id, flag] : state_.ready_flags) {
        flag = false;
    }
    Effects fx;
    for (const auto& p : state_.players) {
        // Each player sees only their own layout.
        json frame = msg::round_start(round, state_.scene, state_.boards.at(p.player_id));
        fx.frames.push_back({p.player_id, frame});
        fx.events.push_back({p.player_id, "round_start", frame, now_ms});
    }
    return fx;
}

Effects Room::chat(const std::string& sender, const std::string& text, std::int64_t now_ms) {
    require_player(sender);
    require_playing();
    if (blank(text)) {
        throw ProtocolError("empty_text", "chat message is empty");
    }
    state_.chat.push_back(ChatMessage{sender, text, now_ms, state_.round_index});
    json frame = msg::chat_broadcast(sender, text, now_ms);
    Effects fx;
    for (const auto& p : state_.players) {
        fx.frames.push_back({p.player_id, frame});
    }
    fx.events.push_back({sender, "chat", frame, now_ms});
    return fx;
}

Effects Room::move(const std::string& sender, const std::string& object, Point to,
                   std::int64_t now_ms) {
    require_player(sender);
    require_playing();
    if (!state_.scene.has_object(object)) {
        throw ProtocolError("unknown_object", "no object '" + object + "' in scene "
                                                  + state_.scene.scene_id);
    }
    Board& board = state_.boards.at(sender);
    const PlacementCheck check = validate_placement(state_.scene, board, object, to);
    Effects fx;
    json frame;
    if (check == PlacementCheck::ok) {
        board.placements[object] = to;
        frame = msg::move_ok(object, to);
        fx.events.push_back({sender, "move_ok", frame, now_ms});
    } else {
        frame = msg::move_rejected(object, check);
        fx.events.push_back({sender, "move_rejected", frame, now_ms});
    }
    // Never relayed to the partner.
    fx.frames.push_back({sender, frame});
    return fx;
}

Effects Room::ready(const std::string& sender, std::int64_t now_ms) {
    require_player(sender);
    require_playing();
    state_.ready_flags[sender] = true;
    Effects fx;
    fx.events.push_back({sender, "ready", msg::ready(), now_ms});

    const bool all_ready = std::all_of(state_.ready_flags.begin(), state_.ready_flags.end(),
                                       [](const auto& kv) { return kv.second; });
    if (!all_ready) {
        return fx;
    }

    const Board& a = state_.boards.at(state_.players[0].player_id);
    const Board& b = state_.boards.at(state_.players[1].player_id);
    const Score score = score_boards(a, b, state_.scene);
    state_.scores.push_back(score);

    json end = msg::round_end(state_.round_index, score);
    for (const auto& p : state_.players) {
        fx.frames.push_back({p.player_id, end});
    }
    fx.events.push_back({"server", "round_end", end, now_ms});

    if (state_.round_index >= scenes_.round_count()) {
        state_.phase = Phase::finished;
        json game_over = msg::game_end(state_.scores, false);
        for (const auto& p : state_.players) {
            fx.frames.push_back({p.player_id, game_over});
        }
        fx.events.push_back({"server", "game_end", game_over, now_ms});
    } else {
        state_.phase = Phase::round_done;
    }
    return fx;
}

Effects Room::advance(std::int64_t now_ms) {
    if (state_.phase != Phase::round_done) {
        throw ProtocolError("not_round_done", "no finished round to advance from");
    }
    const int next = state_.round_index + 1;
    const Scene& scene = scenes_.for_round(next);
    std::map<std::string, Board> boards;
    for (std::size_t seat = 0; seat < state_.players.size(); ++seat) {
        boards[state_.players[seat].player_id] = boards_(scene, next, seat);
    }
    state_.boards = std::move(boards);
    return start_round(next, now_ms);
}

Effects Room::disconnect(const std::string& player_id, std::int64_t now_ms) {
    require_player(player_id);
    Effects fx;
    for (auto& p : state_.players) {
        if (p.player_id == player_id) {
            p.connected = false;
        }
    }
    if (state_.phase == Phase::finished) {
        return fx;
    }
    state_.phase = Phase::finished;
    json frame = msg::game_end(state_.scores, true);
    for (const auto& p : state_.players) {
        if (p.connected) {
            fx.frames.push_back({p.player_id, frame});
        }
    }
    fx.events.push_back({player_id, "game_end", frame, now_ms});
    return fx;
}

} // namespace placement
