#include "replica/gateway/server.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "replica/gateway/headless.hpp"

namespace replica::gateway {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

ServerOptions apply_env(ServerOptions options) {
    if (const char* port = std::getenv("REPLICA_PORT")) {
        unsigned value = 0;
        const std::string_view s(port);
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc() || p != s.data() + s.size() || value > 65535) {
            throw Error(ErrorCode::InvalidConfig, "REPLICA_PORT is not a port number: " + std::string(s));
        }
        options.port = static_cast<unsigned short>(value);
    }
    if (const char* dir = std::getenv("REPLICA_DATA_DIR")) options.data_dir = dir;
    return options;
}

namespace {

class Connection;

// Shared between the I/O thread (producer) and the simulation loop (consumer).
struct Inbox {
    std::mutex mutex;
    std::vector<std::pair<std::uint64_t, std::string>> frames;
    std::vector<std::uint64_t> joined;
};

// Lives on the I/O thread only.
struct Registry {
    std::map<std::uint64_t, std::weak_ptr<Connection>> connections;
    std::uint64_t next_id = 1;
};

class Connection : public std::enable_shared_from_this<Connection> {
public:
    Connection(tcp::socket socket, std::uint64_t id, Inbox& inbox, Registry& registry, std::size_t max_queue)
        : ws_(std::move(socket)), id_(id), inbox_(inbox), registry_(registry), max_queue_(max_queue) {}

    void run() {
        ws_.text(true);
        ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
            if (ec) return self->close();
            self->open_ = true;
            {
                std::lock_guard lock(self->inbox_.mutex);
                self->inbox_.joined.push_back(self->id_);
            }
            self->read();
        });
    }

    /// `direct` frames are addressed to this client. The first one is always the
    /// join-time AffordanceUpdate; broadcasts are held back until it has gone out,
    /// and never touch the stream while the handshake is still running.
    void send(std::shared_ptr<const std::string> frame, bool direct) {
        if (closed_ || !open_) return;
        if (direct) welcomed_ = true;
        else if (!welcomed_) return;
        if (queue_.size() >= max_queue_) {
            std::cerr << "replica: dropping slow client " << id_ << '\n';
            return close();
        }
        queue_.push_back(std::move(frame));
        if (queue_.size() == 1) write();
    }

    void close() {
        if (closed_) return;
        closed_ = true;
        registry_.connections.erase(id_);
        queue_.clear();
        beast::error_code ignored;
        beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both, ignored);
        beast::get_lowest_layer(ws_).socket().close(ignored);
    }

private:
    void read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) return self->close();
            {
                std::lock_guard lock(self->inbox_.mutex);
                self->inbox_.frames.emplace_back(self->id_, beast::buffers_to_string(self->buffer_.data()));
            }
            self->buffer_.consume(self->buffer_.size());
            self->read();
        });
    }

    void write() {
        ws_.async_write(net::buffer(*queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) return self->close();
            if (self->queue_.empty()) return;
            self->queue_.pop_front();
            if (!self->queue_.empty()) self->write();
        });
    }

    websocket::stream<beast::tcp_stream> ws_;
    beast::flat_buffer buffer_;
    std::deque<std::shared_ptr<const std::string>> queue_;
    std::uint64_t id_;
    Inbox& inbox_;
    Registry& registry_;
    std::size_t max_queue_;
    bool open_ = false;
    bool welcomed_ = false;
    bool closed_ = false;
};

}  // namespace

struct Server::Impl {
    Impl(Engine e, ServerOptions o) : engine(std::move(e)), options(std::move(o)), acceptor(ioc) {}

    Engine engine;
    ServerOptions options;
    net::io_context ioc;
    tcp::acceptor acceptor;
    Registry registry;
    Inbox inbox;
    std::optional<net::executor_work_guard<net::io_context::executor_type>> work;
    std::thread io_thread;
    std::thread sim_thread;
    std::atomic<bool> running{false};
    std::mutex stop_mutex;
    std::condition_variable stopped_cv;
    bool stopped = false;

    void accept() {
        acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
            if (ec) return;  // acceptor closed
            const auto id = registry.next_id++;
            auto conn = std::make_shared<Connection>(std::move(socket), id, inbox, registry, options.max_queue);
            registry.connections[id] = conn;
            conn->run();
            accept();
        });
    }

    // Called from the simulation thread; the actual sends happen on the I/O thread.
    void deliver(std::optional<std::uint64_t> to, const Message& m) {
        auto frame = std::make_shared<const std::string>(encode(m));
        net::post(ioc, [this, to, frame] {
            if (to) {
                auto it = registry.connections.find(*to);
                if (it == registry.connections.end()) return;
                if (auto c = it->second.lock()) c->send(frame, true);
                return;
            }
            // Copy first: a send may drop a slow client and erase it from the registry.
            std::vector<std::shared_ptr<Connection>> all;
            for (auto& [_, weak] : registry.connections) {
                if (auto c = weak.lock()) all.push_back(c);
            }
            for (auto& c : all) c->send(frame, false);
        });
    }

    void persist(const FinishedSession& f) {
        const auto path = options.data_dir / log_file_name(f.subject, f.session, f.modality);
        try {
            std::filesystem::create_directories(options.data_dir);
            stats::write_log(path, f.log);
        } catch (const std::exception& e) {
            std::cerr << "replica: " << e.what() << '\n';
        }
    }

    void loop() {
        using clock = std::chrono::steady_clock;
        const auto period = std::chrono::duration_cast<clock::duration>(
            std::chrono::duration<double>(engine.world().config.dt / options.speed));
        auto next = clock::now();
        while (running) {
            std::vector<std::pair<std::uint64_t, std::string>> frames;
            std::vector<std::uint64_t> joined;
            {
                std::lock_guard lock(inbox.mutex);
                frames.swap(inbox.frames);
                joined.swap(inbox.joined);
            }
            for (auto id : joined) deliver(id, {0, engine.affordance_update()});
            for (const auto& [from, text] : frames) {
                std::vector<Message> out;
                try {
                    out = engine.handle(decode(text));
                } catch (const Error& e) {
                    out = {{0, msg::Err{peek_id(text), e.code(), e.what()}}};
                }
                deliver(from, out.front());
                for (std::size_t i = 1; i < out.size(); ++i) deliver(std::nullopt, out[i]);
            }
            for (const auto& m : engine.advance()) deliver(std::nullopt, m);
            for (const auto& f : engine.take_finished()) persist(f);

            next += period;
            const auto now = clock::now();
            if (next < now - period * 10) next = now;  // fell far behind; do not try to catch up
            std::this_thread::sleep_until(next);
        }
    }
};

Server::Server(Engine engine, ServerOptions options) : impl_(std::make_unique<Impl>(std::move(engine), std::move(options))) {
    if (!(impl_->options.speed > 0)) throw Error(ErrorCode::InvalidConfig, "speed must be positive");
    if (impl_->options.max_queue == 0) throw Error(ErrorCode::InvalidConfig, "max_queue must be positive");
}

Server::~Server() { stop(); }

void Server::start() {
    auto& i = *impl_;
    beast::error_code ec;
    const auto address = net::ip::make_address(i.options.address, ec);
    if (ec) throw Error(ErrorCode::InvalidConfig, "bad listen address '" + i.options.address + "'");
    const tcp::endpoint endpoint(address, i.options.port);
    i.acceptor.open(endpoint.protocol(), ec);
    if (!ec) i.acceptor.set_option(net::socket_base::reuse_address(true), ec);
    if (!ec) i.acceptor.bind(endpoint, ec);
    if (!ec) i.acceptor.listen(net::socket_base::max_listen_connections, ec);
    if (ec) {
        throw Error(ErrorCode::BindFailure,
                    "cannot listen on " + i.options.address + ":" + std::to_string(i.options.port) + ": " + ec.message());
    }
    i.running = true;
    i.accept();
    i.work.emplace(i.ioc.get_executor());
    i.io_thread = std::thread([&i] { i.ioc.run(); });
    i.sim_thread = std::thread([&i] { i.loop(); });
}

unsigned short Server::port() const {
    beast::error_code ec;
    auto ep = impl_->acceptor.local_endpoint(ec);
    return ec ? 0 : ep.port();
}

void Server::stop() {
    auto& i = *impl_;
    const bool was_running = i.running.exchange(false);
    if (i.sim_thread.joinable()) i.sim_thread.join();
    if (was_running) {
        net::post(i.ioc, [&i] {
            beast::error_code ignored;
            i.acceptor.close(ignored);
            std::vector<std::shared_ptr<Connection>> all;
            for (auto& [_, weak] : i.registry.connections) {
                if (auto c = weak.lock()) all.push_back(c);
            }
            for (auto& c : all) c->close();
        });
    }
    i.work.reset();
    if (i.io_thread.joinable()) i.io_thread.join();
    {
        std::lock_guard lock(i.stop_mutex);
        i.stopped = true;
    }
    i.stopped_cv.notify_all();
}

void Server::wait() {
    std::unique_lock lock(impl_->stop_mutex);
    impl_->stopped_cv.wait(lock, [this] { return impl_->stopped; });
}

}  // namespace replica::gateway
