// SPDX-License-Identifier: Apache-2.0
#include "placement/event_log.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace placement {

namespace {

const std::set<std::string> kKinds = {"join",      "chat",      "move_ok",  "move_rejected",
                                      "ready",     "round_start", "round_end", "game_end"};

// Raised by the replay board source when the log ends before the boards of
// a round were recorded.
struct MissingBoard {};

} // namespace

SeqGap::SeqGap(std::int64_t expected, std::int64_t got)
    : LogError("sequence gap: expected " + std::to_string(expected) + ", got "
               + std::to_string(got)),
      expected(expected), got(got) {}

MalformedLog::MalformedLog(std::size_t line, std::int64_t seq, const std::string& why)
    : LogError("malformed log line " + std::to_string(line) + " (seq " + std::to_string(seq)
               + "): " + why),
      line(line), seq(seq) {}

std::string serialize(const LogRecord& r) {
    nlohmann::json doc = {
        {"seq", r.seq},   {"ts_ms", r.ts_ms}, {"room_id", r.room_id},
        {"actor", r.actor}, {"kind", r.kind}, {"payload", r.payload},
    };
    return doc.dump();
}

LogRecord parse_record(std::string_view line) {
    auto doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw MalformedLog(0, 0, "not a JSON object");
    }
    try {
        LogRecord r;
        r.seq = doc.at("seq").get<std::int64_t>();
        r.ts_ms = doc.at("ts_ms").get<std::int64_t>();
        r.room_id = doc.at("room_id").get<std::string>();
        r.actor = doc.at("actor").get<std::string>();
        r.kind = doc.at("kind").get<std::string>();
        r.payload = doc.at("payload");
        if (kKinds.count(r.kind) == 0) {
            throw MalformedLog(0, r.seq, "unknown kind '" + r.kind + "'");
        }
        if (!r.payload.is_object() || r.payload.value("type", "") != r.kind) {
            throw MalformedLog(0, r.seq, "payload type does not match kind");
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedLog(0, doc.value("seq", std::int64_t{0}), e.what());
    }
}

EventLog EventLog::open_file(const std::filesystem::path& path) {
    EventLog log;
    if (std::filesystem::exists(path)) {
        auto existing = read_log(path);
        if (!existing.empty()) {
            log.last_seq_ = existing.back().seq;
        }
    }
    auto file = std::make_unique<std::ofstream>(path, std::ios::app);
    if (!*file) {
        throw LogError("cannot open log " + path.string());
    }
    log.out_ = std::move(file);
    return log;
}

EventLog EventLog::in_memory() {
    EventLog log;
    log.out_ = std::make_unique<std::ostringstream>();
    log.memory_ = true;
    return log;
}

EventLog::EventLog(EventLog&&) noexcept = default;
EventLog& EventLog::operator=(EventLog&&) noexcept = default;
EventLog::~EventLog() = default;

void EventLog::append(const LogRecord& record) {
    if (record.seq != last_seq_ + 1) {
        throw SeqGap(last_seq_ + 1, record.seq);
    }
    *out_ << serialize(record) << '\n';
    out_->flush();
    if (!*out_) {
        throw LogError("write failed at seq " + std::to_string(record.seq));
    }
    last_seq_ = record.seq;
}

std::string EventLog::contents() const {
    if (!memory_) {
        return {};
    }
    return static_cast<const std::ostringstream&>(*out_).str();
}

std::filesystem::path log_path(const std::filesystem::path& dir, const std::string& room_id) {
    return dir / (room_id + ".log");
}

std::vector<LogRecord> read_log(std::istream& in) {
    std::vector<LogRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const std::int64_t expected = records.empty() ? 1 : records.back().seq + 1;
        LogRecord r;
        try {
            r = parse_record(line);
        } catch (const MalformedLog& e) {
            throw MalformedLog(line_no, expected, e.what());
        }
        if (r.seq != expected) {
            throw MalformedLog(line_no, expected, "sequence number " + std::to_string(r.seq));
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<LogRecord> read_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw LogError("cannot read log " + path.string());
    }
    return read_log(in);
}

std::vector<LogRecord> parse_log(const std::string& text) {
    std::istringstream in(text);
    return read_log(in);
}

GameState replay(const std::vector<LogRecord>& records, const SceneCatalog& scenes) {
    std::map<std::string, std::size_t> seats;
    std::map<std::pair<int, std::size_t>, Board> boards;
    for (const auto& r : records) {
        if (r.kind == "join" && seats.count(r.actor) == 0) {
            const std::size_t seat = seats.size();
            seats[r.actor] = seat;
        }
    }
    for (const auto& r : records) {
        if (r.kind == "round_start" && seats.count(r.actor) != 0) {
            boards[{r.payload.at("round").get<int>(), seats.at(r.actor)}] =
                msg::board_from_round_start(r.payload);
        }
    }
    BoardSource source = [&boards](const Scene&, int round, std::size_t seat) {
        auto it = boards.find({round, seat});
        if (it == boards.end()) {
            throw MissingBoard{};
        }
        return it->second;
    };

    Room room(records.empty() ? std::string() : records.front().room_id, scenes, source);
    try {
        for (const auto& r : records) {
            const auto& p = r.payload;
            if (r.kind == "join") {
                room.join(p.at("name").get<std::string>(), r.ts_ms);
                if (!room.state().has_player(r.actor)) {
                    throw LogError("join at seq " + std::to_string(r.seq)
                                   + " assigned a different player id");
                }
            } else if (r.kind == "chat") {
                room.chat(r.actor, p.at("text").get<std::string>(), p.at("ts").get<std::int64_t>());
            } else if (r.kind == "move_ok") {
                Point to{p.at("x").get<std::int64_t>(), p.at("y").get<std::int64_t>()};
                auto fx = room.move(r.actor, p.at("object").get<std::string>(), to, r.ts_ms);
                if (fx.events.empty() || fx.events.front().kind != "move_ok") {
                    throw LogError("move at seq " + std::to_string(r.seq) + " does not replay");
                }
            } else if (r.kind == "ready") {
                room.ready(r.actor, r.ts_ms);
            } else if (r.kind == "round_start") {
                if (room.state().phase == Phase::round_done) {
                    room.advance(r.ts_ms);
                }
            } else if (r.kind == "game_end") {
                if (p.value("aborted", false)) {
                    room.disconnect(r.actor, r.ts_ms);
                }
            }
            // move_rejected and round_end carry no state change of their own.
        }
    } catch (const MissingBoard&) {
        // The log stops inside the event that would start a round.
    } catch (const ProtocolError& e) {
        throw LogError(std::string("log does not replay: ") + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw LogError(std::string("log payload incomplete: ") + e.what());
    }
    return room.state();
}

std::vector<Transcript> load_transcripts(const std::vector<LogRecord>& records) {
    std::vector<std::string> players;
    std::vector<Transcript> rounds;
    for (const auto& r : records) {
        if (r.kind == "join") {
            players.push_back(r.actor);
        } else if (r.kind == "round_start") {
            const int round = r.payload.at("round").get<int>();
            if (rounds.empty() || rounds.back().round != round) {
                rounds.push_back(Transcript{round, {}, players});
            }
        } else if (r.kind == "chat" && !rounds.empty()) {
            rounds.back().messages.push_back(ChatMessage{
                r.actor, r.payload.at("text").get<std::string>(),
                r.payload.at("ts").get<std::int64_t>(), rounds.back().round});
        }
    }
    return rounds;
}

} // namespace placement
