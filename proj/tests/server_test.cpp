#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <thread>

#include <unistd.h>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "replica/error.hpp"
#include "replica/gateway/headless.hpp"
#include "replica/gateway/server.hpp"
#include "replica/orchestrator/plan.hpp"
#include "replica/scene.hpp"
#include "replica/stats/timings.hpp"

using namespace replica;
using namespace replica::gateway;
namespace net = boost::asio;
namespace websocket = boost::beast::websocket;
using tcp = net::ip::tcp;

namespace {

class Client {
public:
    explicit Client(unsigned short port) : ws_(ioc_) {
        tcp::resolver resolver(ioc_);
        net::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
        ws_.handshake("127.0.0.1", "/");
        ws_.text(true);
    }

    void send(const std::string& text) { ws_.write(net::buffer(text)); }
    void send(const Message& m) { send(encode(m)); }

    Message read() {
        boost::beast::flat_buffer buf;
        ws_.read(buf);
        return decode(boost::beast::buffers_to_string(buf.data()));
    }

    // Reads until a message satisfying pred arrives; everything seen is kept.
    template <class Pred>
    Message until(Pred pred, std::vector<Message>* seen = nullptr) {
        for (int i = 0; i < 5000; ++i) {
            auto m = read();
            if (seen) seen->push_back(m);
            if (pred(m)) return m;
        }
        FAIL("expected message never arrived");
        return {};
    }

    Message reply_to(std::uint64_t id, std::vector<Message>* seen = nullptr) {
        return until(
            [id](const Message& m) {
                if (const auto* a = std::get_if<msg::Ack>(&m.body)) return a->re == id;
                if (const auto* e = std::get_if<msg::Err>(&m.body)) return e->re == id || !e->re;
                return false;
            },
            seen);
    }

private:
    net::io_context ioc_;
    websocket::stream<tcp::socket> ws_;
};

struct Fixture {
    std::filesystem::path dir;
    std::unique_ptr<Server> server;

    explicit Fixture(double speed = 4.0) {
        dir = std::filesystem::temp_directory_path() / ("replica_server_test_" + std::to_string(::getpid()));
        std::filesystem::remove_all(dir);
        ServerOptions o;
        o.port = 0;
        o.data_dir = dir;
        o.speed = speed;
        server = std::make_unique<Server>(Engine(default_scene(), orchestrator::latin_plan(4, 1)), o);
        server->start();
    }
    ~Fixture() {
        server->stop();
        std::filesystem::remove_all(dir);
    }
};

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected replica::Error");
    return ErrorCode::InvalidConfig;
}

}  // namespace

TEST_CASE("socket session: hello, gestures, malformed frames") {
    Fixture f;
    REQUIRE(f.server->port() != 0);
    Client c(f.server->port());

    // The first frame on join is the current affordance state.
    CHECK(std::holds_alternative<msg::AffordanceUpdate>(c.read().body));

    c.send({1, msg::Hello{"test", kProtocolVersion}});
    const auto hello = c.reply_to(1);
    REQUIRE(std::holds_alternative<msg::Ack>(hello.body));
    CHECK(std::get<msg::Ack>(hello.body).info["protocol"] == kProtocolVersion);

    c.send({2, msg::Gesture{interaction::gesture::PalmUp{}}});
    c.reply_to(2);
    const auto upd = c.until([](const Message& m) { return std::holds_alternative<msg::AffordanceUpdate>(m.body); });
    CHECK(std::holds_alternative<interaction::controller::PaletteShown>(std::get<msg::AffordanceUpdate>(upd.body).state));

    c.send(std::string("{not json"));
    const auto err = c.reply_to(0);
    REQUIRE(std::holds_alternative<msg::Err>(err.body));
    CHECK(std::get<msg::Err>(err.body).code == ErrorCode::MalformedMessage);
    CHECK_FALSE(std::get<msg::Err>(err.body).re);

    c.send(std::string(R"({"type":"Gesture","id":9,"gesture":"Wave"})"));
    const auto err9 = c.reply_to(9);
    CHECK(std::get<msg::Err>(err9.body).re == 9u);

    // Still connected and served after the bad frames.
    c.send({3, msg::SessionControl{msg::SessionCommand::Status, 0, 0}});
    const auto status = c.reply_to(3);
    REQUIRE(std::holds_alternative<msg::Ack>(status.body));
    CHECK(std::get<msg::Ack>(status.body).info["running"] == false);
}

TEST_CASE("handshakes survive concurrent broadcasts") {
    // At high speed snapshots are broadcast every few hundred microseconds,
    // so they routinely land while a client is still handshaking.
    Fixture f(200.0);
    for (int i = 0; i < 30; ++i) {
        Client c(f.server->port());
        CHECK(std::holds_alternative<msg::AffordanceUpdate>(c.read().body));
    }
}

TEST_CASE("snapshots are broadcast with increasing time") {
    Fixture f;
    Client c(f.server->port());
    double last = -1;
    for (int n = 0; n < 10;) {
        const auto m = c.read();
        if (const auto* s = std::get_if<msg::Snapshot>(&m.body)) {
            CHECK(s->sim_time > last);
            last = s->sim_time;
            ++n;
        }
    }
}

TEST_CASE("a stopped session is written to the data directory") {
    Fixture f;
    Client c(f.server->port());
    const auto plan = orchestrator::latin_plan(4, 1)[0];
    c.send({1, msg::SessionControl{msg::SessionCommand::Start, plan.subject_id, 0}});
    REQUIRE(std::holds_alternative<msg::Ack>(c.reply_to(1).body));
    c.send({2, msg::SessionControl{msg::SessionCommand::Stop, 0, 0}});
    REQUIRE(std::holds_alternative<msg::Ack>(c.reply_to(2).body));

    const auto path = f.dir / log_file_name(plan.subject_id, 0, plan.modality_order[0]);
    for (int i = 0; i < 200 && !std::filesystem::exists(path); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
    REQUIRE(std::filesystem::exists(path));
    const auto log = stats::read_log(path);
    REQUIRE(log.size() >= 2);
    CHECK(log.front().kind == stats::LogKind::SessionStart);
    CHECK(log.back().kind == stats::LogKind::SessionEnd);
    CHECK(log.back().payload["aborted"] == true);
}

TEST_CASE("environment and bind errors") {
    ::setenv("REPLICA_PORT", "80x", 1);
    CHECK(code_of([] { apply_env({}); }) == ErrorCode::InvalidConfig);
    ::setenv("REPLICA_PORT", "70000", 1);
    CHECK(code_of([] { apply_env({}); }) == ErrorCode::InvalidConfig);
    ::setenv("REPLICA_PORT", "9100", 1);
    ::setenv("REPLICA_DATA_DIR", "/tmp/replica-env", 1);
    const auto o = apply_env({});
    CHECK(o.port == 9100);
    CHECK(o.data_dir == "/tmp/replica-env");
    ::unsetenv("REPLICA_PORT");
    ::unsetenv("REPLICA_DATA_DIR");

    Fixture f;
    ServerOptions clash;
    clash.port = f.server->port();
    Server second(Engine(default_scene(), {}), clash);
    // reuse_address does not allow two listeners on one port.
    CHECK(code_of([&] { second.start(); }) == ErrorCode::BindFailure);

    ServerOptions bad;
    bad.speed = 0;
    CHECK(code_of([&] { Server s(Engine(default_scene(), {}), bad); }) == ErrorCode::InvalidConfig);
}
