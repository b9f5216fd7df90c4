// SPDX-License-Identifier: Apache-2.0
#include "placement/server.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast.hpp>

#include "placement/room_session.hpp"

namespace placement {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

std::int64_t now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

bool valid_room_id(const std::string& id) {
    if (id.empty() || id.size() > 64 || id.front() == '.') {
        return false;
    }
    for (unsigned char c : id) {
        if (!std::isalnum(c) && c != '-' && c != '_' && c != '.') {
            return false;
        }
    }
    return true;
}

std::string_view mime_type(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
    if (ext == ".js" || ext == ".mjs") return "text/javascript; charset=utf-8";
    if (ext == ".css") return "text/css; charset=utf-8";
    if (ext == ".json") return "application/json";
    if (ext == ".png") return "image/png";
    if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
    if (ext == ".svg") return "image/svg+xml";
    if (ext == ".ico") return "image/x-icon";
    if (ext == ".wasm") return "application/wasm";
    return "application/octet-stream";
}

class WsSession;

// Live connections, closed by hand on stop since their handlers never run again.
struct Closable {
    virtual ~Closable() = default;
    virtual void force_close() = 0;
};

struct RoomEntry {
    std::mutex mutex;
    std::unique_ptr<RoomSession> session;
    std::map<std::string, std::weak_ptr<WsSession>> members;
};

} // namespace

class GameServer::Impl {
public:
    explicit Impl(ServerOptions o) : options(std::move(o)), acceptor(ioc) {}

    void on_frame(const std::shared_ptr<WsSession>& from, const std::string& text);
    void on_disconnect(const std::shared_ptr<WsSession>& from);
    void do_accept();

    ServerOptions options;
    net::io_context ioc;
    tcp::acceptor acceptor;
    std::vector<std::thread> threads;
    std::atomic<bool> running{false};
    unsigned short bound_port = 0;
    std::mutex stop_mutex;
    std::condition_variable stopped_cv;
    bool stopped = false;

    void track(const std::shared_ptr<Closable>& c) {
        std::lock_guard lock(connections_mutex);
        std::erase_if(connections, [](const auto& w) { return w.expired(); });
        connections.push_back(c);
    }
    std::mutex connections_mutex;
    std::vector<std::weak_ptr<Closable>> connections;

private:
    std::shared_ptr<RoomEntry> room_for(const std::string& room_id);
    void dispatch(RoomEntry& room, const std::shared_ptr<WsSession>& from,
                  const std::vector<Outbound>& frames);

    std::mutex rooms_mutex_;
    std::map<std::string, std::shared_ptr<RoomEntry>> rooms_;
};

namespace {

class WsSession : public Closable, public std::enable_shared_from_this<WsSession> {
public:
    WsSession(tcp::socket&& socket, GameServer::Impl& server)
        : ws_(std::move(socket)), server_(server) {}

    void force_close() override {
        beast::error_code ignored;
        ws_.next_layer().socket().shutdown(tcp::socket::shutdown_both, ignored);
        ws_.next_layer().socket().close(ignored);
    }

    void run(http::request<http::string_body> request) {
        server_.track(shared_from_this());
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(request, [self = shared_from_this()](beast::error_code ec) {
            if (!ec) {
                self->do_read();
            }
        });
    }

    void send(std::string text) {
        net::post(ws_.get_executor(), [self = shared_from_this(), text = std::move(text)]() mutable {
            self->queue_.push_back(std::move(text));
            if (self->queue_.size() == 1) {
                self->do_write();
            }
        });
    }

    // Only touched by the room handling for this connection's own frames,
    // which arrive one at a time.
    std::shared_ptr<RoomEntry> room;
    std::string player_id;

private:
    void do_read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            self->on_read(ec);
        });
    }

    void on_read(beast::error_code ec) {
        if (ec) {
            server_.on_disconnect(shared_from_this());
            return;
        }
        std::string text = beast::buffers_to_string(buffer_.data());
        buffer_.consume(buffer_.size());
        server_.on_frame(shared_from_this(), text);
        do_read();
    }

    void do_write() {
        ws_.text(true);
        ws_.async_write(net::buffer(queue_.front()),
                        [self = shared_from_this()](beast::error_code ec, std::size_t) {
                            if (ec) {
                                self->queue_.clear();
                                return;
                            }
                            self->queue_.pop_front();
                            if (!self->queue_.empty()) {
                                self->do_write();
                            }
                        });
    }

    websocket::stream<beast::tcp_stream> ws_;
    beast::flat_buffer buffer_;
    std::deque<std::string> queue_;
    GameServer::Impl& server_;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
    HttpSession(tcp::socket&& socket, GameServer::Impl& server)
        : stream_(std::move(socket)), server_(server) {}

    void run() {
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, request_,
                         [self = shared_from_this()](beast::error_code ec, std::size_t) {
                             self->on_read(ec);
                         });
    }

private:
    void on_read(beast::error_code ec) {
        if (ec) {
            return;
        }
        if (websocket::is_upgrade(request_)) {
            stream_.expires_never();
            std::make_shared<WsSession>(stream_.release_socket(), server_)->run(std::move(request_));
            return;
        }
        respond();
    }

    template <typename Body>
    void write(http::response<Body> response) {
        response.set(http::field::server, "placement");
        response.keep_alive(false);
        response.prepare_payload();
        auto shared = std::make_shared<http::response<Body>>(std::move(response));
        http::async_write(stream_, *shared,
                          [self = shared_from_this(), shared](beast::error_code, std::size_t) {
                              beast::error_code ignored;
                              self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
                          });
    }

    void text_response(http::status status, const std::string& body) {
        http::response<http::string_body> res{status, request_.version()};
        res.set(http::field::content_type, "text/plain; charset=utf-8");
        res.body() = body;
        write(std::move(res));
    }

    void respond() {
        if (request_.method() != http::verb::get && request_.method() != http::verb::head) {
            text_response(http::status::method_not_allowed, "only GET is supported\n");
            return;
        }
        std::string target(request_.target());
        target = target.substr(0, target.find('?'));
        if (target == "/app") {
            http::response<http::empty_body> res{http::status::moved_permanently, request_.version()};
            res.set(http::field::location, "/app/");
            write(std::move(res));
            return;
        }
        if (target.rfind("/app/", 0) != 0 || !server_.options.app_dir) {
            text_response(http::status::not_found, "not found\n");
            return;
        }
        std::filesystem::path rel = std::filesystem::path(target.substr(5)).lexically_normal();
        for (const auto& part : rel) {
            if (part == "..") {
                text_response(http::status::bad_request, "bad path\n");
                return;
            }
        }
        std::filesystem::path file = *server_.options.app_dir / rel;
        if (target.back() == '/' || std::filesystem::is_directory(file)) {
            file /= "index.html";
        }
        http::file_body::value_type body;
        beast::error_code ec;
        body.open(file.string().c_str(), beast::file_mode::scan, ec);
        if (ec) {
            text_response(http::status::not_found, "not found\n");
            return;
        }
        http::response<http::file_body> res{std::piecewise_construct, std::make_tuple(std::move(body)),
                                            std::make_tuple(http::status::ok, request_.version())};
        res.set(http::field::content_type, std::string(mime_type(file)));
        write(std::move(res));
    }

    beast::tcp_stream stream_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> request_;
    GameServer::Impl& server_;
};

void send_error(WsSession& to, const std::string& code, const std::string& message) {
    to.send(msg::error(code, message).dump());
}

} // namespace

std::shared_ptr<RoomEntry> GameServer::Impl::room_for(const std::string& room_id) {
    std::lock_guard lock(rooms_mutex_);
    auto it = rooms_.find(room_id);
    if (it != rooms_.end()) {
        return it->second;
    }
    if (!valid_room_id(room_id)) {
        throw ProtocolError("bad_room", "room ids use letters, digits, '-', '_' and '.'");
    }
    std::optional<EventLog> log;
    if (options.log_dir) {
        const auto path = log_path(*options.log_dir, room_id);
        std::error_code ec;
        if (std::filesystem::exists(path, ec) && std::filesystem::file_size(path, ec) > 0) {
            throw ProtocolError("room_closed", "room " + room_id + " already has a log");
        }
        log = EventLog::open_file(path);
    }
    auto entry = std::make_shared<RoomEntry>();
    entry->session = std::make_unique<RoomSession>(room_id, options.scenes,
                                                   seeded_board_source(room_seed(options.seed, room_id)),
                                                   std::move(log));
    rooms_.emplace(room_id, entry);
    return entry;
}

void GameServer::Impl::dispatch(RoomEntry& room, const std::shared_ptr<WsSession>& from,
                                const std::vector<Outbound>& frames) {
    for (const auto& out : frames) {
        if (out.to.empty()) {
            from->send(out.frame.dump());
            continue;
        }
        auto it = room.members.find(out.to);
        if (it == room.members.end()) {
            continue;
        }
        if (auto target = it->second.lock()) {
            target->send(out.frame.dump());
        }
    }
}

void GameServer::Impl::on_frame(const std::shared_ptr<WsSession>& from, const std::string& text) {
    json frame;
    try {
        frame = json::parse(text);
    } catch (const json::exception&) {
        send_error(*from, "bad_frame", "frame is not valid JSON");
        return;
    }

    if (!from->room) {
        std::shared_ptr<RoomEntry> room;
        try {
            auto parsed = msg::parse_client(frame);
            const auto* join = std::get_if<msg::Join>(&parsed);
            if (join == nullptr) {
                send_error(*from, "not_joined", "send a join frame first");
                return;
            }
            room = room_for(join->room);
        } catch (const ProtocolError& e) {
            send_error(*from, e.code, e.what());
            return;
        }
        std::lock_guard lock(room->mutex);
        auto frames = room->session->submit("", frame, now_ms());
        for (const auto& out : frames) {
            if (out.frame.value("type", "") == "joined") {
                from->room = room;
                from->player_id = out.to;
                room->members[out.to] = from;
            }
        }
        dispatch(*room, from, frames);
        return;
    }

    RoomEntry& room = *from->room;
    std::lock_guard lock(room.mutex);
    dispatch(room, from, room.session->submit(from->player_id, frame, now_ms()));
}

void GameServer::Impl::on_disconnect(const std::shared_ptr<WsSession>& from) {
    if (!from->room) {
        return;
    }
    RoomEntry& room = *from->room;
    std::lock_guard lock(room.mutex);
    room.members.erase(from->player_id);
    try {
        dispatch(room, from, room.session->disconnect(from->player_id, now_ms()));
    } catch (const std::exception& e) {
        std::cerr << "disconnect of " << from->player_id << ": " << e.what() << "\n";
    }
}

void GameServer::Impl::do_accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
        if (ec) {
            if (ec != net::error::operation_aborted) {
                std::cerr << "accept: " << ec.message() << "\n";
            }
            if (!running) {
                return;
            }
        } else {
            std::make_shared<HttpSession>(std::move(socket), *this)->run();
        }
        do_accept();
    });
}

GameServer::GameServer(ServerOptions options) : impl_(std::make_shared<Impl>(std::move(options))) {}

GameServer::~GameServer() {
    stop();
}

unsigned short GameServer::start() {
    auto& s = *impl_;
    if (s.running) {
        return s.bound_port;
    }
    for (const auto& [id, scene] : s.options.scenes.scenes) {
        check_scene(scene);
    }
    if (s.options.log_dir) {
        std::filesystem::create_directories(*s.options.log_dir);
    }
    const tcp::endpoint endpoint{net::ip::make_address(s.options.address), s.options.port};
    s.acceptor.open(endpoint.protocol());
    s.acceptor.set_option(net::socket_base::reuse_address(true));
    s.acceptor.bind(endpoint);
    s.acceptor.listen(net::socket_base::max_listen_connections);
    s.bound_port = s.acceptor.local_endpoint().port();
    s.running = true;
    s.do_accept();
    const int n = std::max(1, s.options.threads);
    for (int i = 0; i < n; ++i) {
        s.threads.emplace_back([&s] { s.ioc.run(); });
    }
    return s.bound_port;
}

void GameServer::stop() {
    auto& s = *impl_;
    if (!s.running.exchange(false)) {
        return;
    }
    net::post(s.ioc, [&s] {
        beast::error_code ignored;
        s.acceptor.close(ignored);
    });
    s.ioc.stop();
    for (auto& t : s.threads) {
        if (t.joinable()) {
            t.join();
        }
    }
    s.threads.clear();
    // No handler runs any more, so the sockets can be closed from here.
    {
        std::lock_guard lock(s.connections_mutex);
        for (const auto& w : s.connections) {
            if (auto c = w.lock()) {
                c->force_close();
            }
        }
        s.connections.clear();
    }
    {
        std::lock_guard lock(s.stop_mutex);
        s.stopped = true;
    }
    s.stopped_cv.notify_all();
}

void GameServer::wait() {
    auto& s = *impl_;
    std::unique_lock lock(s.stop_mutex);
    s.stopped_cv.wait(lock, [&s] { return s.stopped; });
}

unsigned short GameServer::port() const {
    return impl_->bound_port;
}

} // namespace placement
