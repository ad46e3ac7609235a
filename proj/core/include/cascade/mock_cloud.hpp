#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "cascade/fixture.hpp"

namespace cascade {

// Fixture-backed controller service for end-to-end testing of the remote
// adapter, including the privacy audit on real wire bytes. Captures every
// request body it receives so runs can be audited post hoc.
class MockCloudServer {
public:
    explicit MockCloudServer(std::shared_ptr<const ScriptedFixture> fixture,
                             std::string capture_path = "");
    ~MockCloudServer();

    MockCloudServer(const MockCloudServer&) = delete;
    MockCloudServer& operator=(const MockCloudServer&) = delete;

    // Binds and serves on a background thread. port == 0 picks a free port.
    // Throws NetworkError when the port cannot be bound.
    void start(const std::string& host = "127.0.0.1", int port = 0);
    void stop();

    int port() const { return port_; }
    std::string url() const;
    std::size_t requests_served() const { return requests_served_.load(); }
    // Raw request bodies in arrival order.
    std::vector<std::string> captured_requests() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::shared_ptr<const ScriptedFixture> fixture_;
    std::string capture_path_;
    std::string host_;
    int port_ = 0;
    std::thread server_thread_;
    std::atomic<std::size_t> requests_served_{0};
    mutable std::mutex capture_mutex_;
    std::vector<std::string> captured_;
};

}  // namespace cascade
