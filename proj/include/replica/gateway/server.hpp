#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>

#include "replica/gateway/engine.hpp"

namespace replica::gateway {

struct ServerOptions {
    std::string address = "127.0.0.1";
    unsigned short port = 8765;           // 0 binds an ephemeral port
    std::filesystem::path data_dir = ".";  // session logs land here
    std::size_t max_queue = 1024;         // outbound frames per client before it is dropped
    double speed = 1.0;                   // simulated seconds per wall second
};

/// Applies REPLICA_PORT and REPLICA_DATA_DIR when set. Throws InvalidConfig
/// for a port that does not parse.
ServerOptions apply_env(ServerOptions options);

/// WebSocket front end for an Engine. One thread runs the simulation loop at
/// the engine's dt; another runs all socket I/O. They only exchange frames
/// through queues, and clients that fall behind are disconnected.
class Server {
public:
    Server(Engine engine, ServerOptions options);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds and starts both threads. Throws BindFailure.
    void start();
    /// Bound port (useful with port 0).
    unsigned short port() const;
    void stop();
    /// Blocks until stop() is called from another thread or a signal handler.
    void wait();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace replica::gateway
