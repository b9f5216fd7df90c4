// SPDX-License-Identifier: Apache-2.0
#include "placement/ws_client.hpp"

#include <boost/asio.hpp>
#include <boost/beast.hpp>

#include "placement/protocol.hpp"

namespace placement {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

struct WsClient::State {
    net::io_context ioc;
    websocket::stream<beast::tcp_stream> ws{ioc};
    beast::flat_buffer buffer;
    std::chrono::milliseconds timeout{};

    // Runs one async operation to completion under the deadline. The
    // tcp_stream closes the socket when it expires, so a silent server turns
    // into beast::error::timeout instead of a hang.
    template <typename Start>
    beast::error_code run(Start start) {
        beast::error_code result = net::error::would_block;
        ws.next_layer().expires_after(timeout);
        start([&result](beast::error_code ec, auto&&...) { result = ec; });
        ioc.restart();
        ioc.run();
        return result;
    }
};

WsClient::WsClient(const std::string& host, unsigned short port, const std::string& path,
                   std::chrono::milliseconds receive_timeout)
    : state_(std::make_unique<State>()) {
    auto& s = *state_;
    s.timeout = receive_timeout;
    const std::string where = host + ":" + std::to_string(port);
    try {
        tcp::resolver resolver(s.ioc);
        auto results = resolver.resolve(host, std::to_string(port));
        beast::error_code ec = s.run([&](auto done) { s.ws.next_layer().async_connect(results, done); });
        if (!ec) {
            ec = s.run([&](auto done) { s.ws.async_handshake(where, path, done); });
        }
        if (ec) {
            throw ClientError("cannot connect to " + where + ": " + ec.message());
        }
        s.ws.text(true);
    } catch (const boost::system::system_error& e) {
        throw ClientError("cannot connect to " + where + ": " + e.what());
    }
}

WsClient::~WsClient() {
    try {
        close();
    } catch (...) {
    }
}

void WsClient::send(const nlohmann::json& frame) {
    send_text(frame.dump());
}

void WsClient::send_text(const std::string& text) {
    auto& s = *state_;
    const beast::error_code ec = s.run([&](auto done) { s.ws.async_write(net::buffer(text), done); });
    if (ec) {
        throw ClientError("send failed: " + ec.message());
    }
}

nlohmann::json WsClient::receive() {
    auto& s = *state_;
    const beast::error_code ec = s.run([&](auto done) { s.ws.async_read(s.buffer, done); });
    if (ec) {
        throw ClientError("receive failed: " + ec.message());
    }
    std::string text = beast::buffers_to_string(s.buffer.data());
    s.buffer.consume(s.buffer.size());
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ClientError(std::string("server sent invalid JSON: ") + e.what());
    }
}

void WsClient::close() {
    if (!state_) {
        return;
    }
    auto& s = *state_;
    if (s.ws.is_open()) {
        s.run([&](auto done) { s.ws.async_close(websocket::close_code::normal, done); });
    }
    beast::error_code ignored;
    s.ws.next_layer().socket().close(ignored);
}

ServerAddress parse_server_address(const std::string& text) {
    ServerAddress address;
    std::string rest = text;
    for (const std::string scheme : {"ws://", "http://"}) {
        if (rest.rfind(scheme, 0) == 0) {
            rest = rest.substr(scheme.size());
        }
    }
    if (const auto slash = rest.find('/'); slash != std::string::npos) {
        address.path = rest.substr(slash);
        rest = rest.substr(0, slash);
    }
    if (const auto colon = rest.rfind(':'); colon != std::string::npos) {
        const std::string port = rest.substr(colon + 1);
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(port, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != port.size() || value <= 0 || value > 65535) {
            throw std::invalid_argument("bad port in server address '" + text + "'");
        }
        address.port = static_cast<unsigned short>(value);
        rest = rest.substr(0, colon);
    }
    if (!rest.empty()) {
        address.host = rest;
    }
    return address;
}

nlohmann::json run_agent(WsClient& client, Agent& agent, const std::string& room,
                         const std::string& name) {
    client.send(msg::join(room, name));
    while (true) {
        nlohmann::json frame = client.receive();
        const std::string type = frame.value("type", "");
        if (type == "error" && agent.player_id().empty()) {
            return frame;
        }
        for (const auto& out : agent.step(frame)) {
            client.send(out);
        }
        if (type == "game_end") {
            return frame;
        }
    }
}

} // namespace placement
