// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "placement/scenes.hpp"

namespace placement {

struct ServerOptions {
    std::string address = "0.0.0.0";
    /// 0 picks a free port; start() returns the one bound.
    unsigned short port = 8080;
    SceneCatalog scenes = default_scenes();
    /// One log file per room, <log_dir>/<room>.log. No logs when unset.
    std::optional<std::filesystem::path> log_dir;
    /// Root seed; each room derives its own from it and the room id.
    std::uint64_t seed = 0;
    /// Static files served under /app.
    std::optional<std::filesystem::path> app_dir;
    int threads = 1;
};

/// Websocket game server. Any websocket path is accepted; plain HTTP GET
/// requests below /app are answered from `app_dir`.
///
/// Rooms are created by the first join that names them. A room whose log
/// file already holds records is not reopened.
class GameServer {
public:
    explicit GameServer(ServerOptions options);
    ~GameServer();

    GameServer(const GameServer&) = delete;
    GameServer& operator=(const GameServer&) = delete;

    /// Binds and starts serving in background threads. Returns the port.
    unsigned short start();
    /// Closes every connection and joins the threads.
    void stop();
    /// Blocks until stop() is called from another thread.
    void wait();

    unsigned short port() const;

    class Impl;

private:
    std::shared_ptr<Impl> impl_;
};

} // namespace placement
