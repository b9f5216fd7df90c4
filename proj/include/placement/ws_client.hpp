// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "json.hpp"
#include "placement/agent.hpp"

namespace placement {

class ClientError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Blocking websocket client speaking the game protocol.
class WsClient {
public:
    /// Throws ClientError when the connection or handshake fails.
    WsClient(const std::string& host, unsigned short port, const std::string& path = "/",
             std::chrono::milliseconds receive_timeout = std::chrono::seconds(10));
    ~WsClient();

    WsClient(const WsClient&) = delete;
    WsClient& operator=(const WsClient&) = delete;

    void send(const nlohmann::json& frame);
    void send_text(const std::string& text);
    /// Next frame. Throws ClientError on timeout or when the server closed.
    nlohmann::json receive();
    void close();

private:
    struct State;
    std::unique_ptr<State> state_;
};

/// "ws://host:port/path", "host:port" or "host"; the default port is 8080.
struct ServerAddress {
    std::string host = "127.0.0.1";
    unsigned short port = 8080;
    std::string path = "/";
};

ServerAddress parse_server_address(const std::string& text);

/// Joins `room` and plays until game_end. Returns the game_end frame, or the
/// error frame if the join was refused.
nlohmann::json run_agent(WsClient& client, Agent& agent, const std::string& room,
                         const std::string& name);

} // namespace placement
