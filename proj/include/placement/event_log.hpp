// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "placement/scenes.hpp"
#include "placement/session.hpp"
#include "placement/transcript.hpp"

namespace placement {

/// One line of a room log.
struct LogRecord {
    std::int64_t seq = 0;
    std::int64_t ts_ms = 0;
    std::string room_id;
    std::string actor;
    std::string kind;
    nlohmann::json payload;

    friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

class LogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SeqGap : public LogError {
public:
    SeqGap(std::int64_t expected, std::int64_t got);
    std::int64_t expected;
    std::int64_t got;
};

class MalformedLog : public LogError {
public:
    MalformedLog(std::size_t line, std::int64_t seq, const std::string& why);
    std::size_t line;
    /// Sequence number the bad line would have carried.
    std::int64_t seq;
};

std::string serialize(const LogRecord& record);

/// Throws MalformedLog (line 0, seq 0) when the line is not a valid record.
LogRecord parse_record(std::string_view line);

/// Append-only writer for one room's log. Every append is flushed before
/// returning.
class EventLog {
public:
    /// Opens (or creates) a log file. An existing file is scanned so appends
    /// continue its sequence.
    static EventLog open_file(const std::filesystem::path& path);
    static EventLog in_memory();

    EventLog(EventLog&&) noexcept;
    EventLog& operator=(EventLog&&) noexcept;
    ~EventLog();

    /// Throws SeqGap unless record.seq == last_seq() + 1, LogError when the
    /// stream fails.
    void append(const LogRecord& record);

    std::int64_t last_seq() const { return last_seq_; }

    /// Everything written so far; only meaningful for in-memory logs.
    std::string contents() const;

private:
    EventLog() = default;

    std::unique_ptr<std::ostream> out_;
    std::int64_t last_seq_ = 0;
    bool memory_ = false;
};

/// <log-dir>/<room_id>.log
std::filesystem::path log_path(const std::filesystem::path& dir, const std::string& room_id);

std::vector<LogRecord> read_log(std::istream& in);
std::vector<LogRecord> read_log(const std::filesystem::path& path);
std::vector<LogRecord> parse_log(const std::string& text);

/// Re-applies a log through the room handlers. A log cut off mid-game yields
/// the state at that point. Throws LogError when the log contradicts itself.
GameState replay(const std::vector<LogRecord>& records, const SceneCatalog& scenes);

/// Chat per started round, moves and other events excluded.
std::vector<Transcript> load_transcripts(const std::vector<LogRecord>& records);

} // namespace placement
