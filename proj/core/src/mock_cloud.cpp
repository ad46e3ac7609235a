#include "cascade/mock_cloud.hpp"

#include <fstream>

#include <httplib.h>

#include "cascade/backends.hpp"
#include "cascade/wire.hpp"

namespace cascade {

struct MockCloudServer::Impl {
    httplib::Server server;
};

MockCloudServer::MockCloudServer(std::shared_ptr<const ScriptedFixture> fixture,
                                 std::string capture_path)
    : impl_(std::make_unique<Impl>()), fixture_(std::move(fixture)),
      capture_path_(std::move(capture_path)) {
    if (!capture_path_.empty()) {
        std::ofstream out(capture_path_, std::ios::trunc);
        if (!out) {
            throw InvalidInputError("cannot open capture file '" + capture_path_ + "'");
        }
    }

    auto capture = [this](const std::string& body) {
        requests_served_.fetch_add(1);
        std::lock_guard<std::mutex> lock(capture_mutex_);
        captured_.push_back(body);
        if (!capture_path_.empty()) {
            std::ofstream out(capture_path_, std::ios::app);
            out << body;
            if (body.empty() || body.back() != '\n') out << '\n';
        }
    };

    auto fail = [](httplib::Response& res, int status, const std::string& code,
                   const std::string& message) {
        res.status = status;
        res.set_content(wire::encode_error(code, message), "application/json");
    };

    impl_->server.Post("/v1/gate", [this, capture, fail](const httplib::Request& req,
                                                         httplib::Response& res) {
        capture(req.body);
        try {
            const wire::GateRequest request = wire::decode_gate_request(req.body);
            ScriptedControllerBackend backend(fixture_);
            res.set_content(wire::encode(backend.gate(request)), "application/json");
        } catch (const ProtocolError& e) {
            fail(res, 400, "protocol_error", e.what());
        } catch (const FixtureError& e) {
            fail(res, 404, "fixture_miss", e.what());
        }
    });

    impl_->server.Post("/v1/plan", [this, capture, fail](const httplib::Request& req,
                                                         httplib::Response& res) {
        capture(req.body);
        try {
            const wire::PlanRequest request = wire::decode_plan_request(req.body);
            ScriptedControllerBackend backend(fixture_);
            res.set_content(wire::encode(backend.plan(request)), "application/json");
        } catch (const ProtocolError& e) {
            fail(res, 400, "protocol_error", e.what());
        } catch (const FixtureError& e) {
            fail(res, 404, "fixture_miss", e.what());
        }
    });

    impl_->server.Post("/v1/reason", [this, capture, fail](const httplib::Request& req,
                                                           httplib::Response& res) {
        capture(req.body);
        try {
            const wire::ReasonRequest request = wire::decode_reason_request(req.body);
            ScriptedControllerBackend backend(fixture_);
            res.set_content(wire::encode(backend.reason(request)), "application/json");
        } catch (const ProtocolError& e) {
            fail(res, 400, "protocol_error", e.what());
        } catch (const FixtureError& e) {
            fail(res, 404, "fixture_miss", e.what());
        }
    });

    impl_->server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("ok\n", "text/plain");
    });
}

MockCloudServer::~MockCloudServer() { stop(); }

void MockCloudServer::start(const std::string& host, int port) {
    host_ = host;
    if (port == 0) {
        port_ = impl_->server.bind_to_any_port(host);
        if (port_ <= 0) {
            throw NetworkError("mock cloud: cannot bind to any port on " + host,
                               /*retriable=*/false);
        }
    } else {
        if (!impl_->server.bind_to_port(host, port)) {
            throw NetworkError("mock cloud: cannot bind " + host + ":" + std::to_string(port),
                               /*retriable=*/false);
        }
        port_ = port;
    }
    server_thread_ = std::thread([this]() { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void MockCloudServer::stop() {
    if (server_thread_.joinable()) {
        impl_->server.stop();
        server_thread_.join();
    }
}

std::string MockCloudServer::url() const {
    return "http://" + host_ + ":" + std::to_string(port_);
}

std::vector<std::string> MockCloudServer::captured_requests() const {
    std::lock_guard<std::mutex> lock(capture_mutex_);
    return captured_;
}

}  // namespace cascade
