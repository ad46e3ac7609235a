#include "cascade/remote.hpp"

#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace cascade {

RemoteControllerBackend::RemoteControllerBackend(std::string base_url, double timeout_s)
    : base_url_(std::move(base_url)), timeout_s_(timeout_s) {}

BackendInfo RemoteControllerBackend::info() const {
    return BackendInfo{"remote-controller(" + base_url_ + ")", 0};
}

std::string RemoteControllerBackend::post(const std::string& path, const std::string& body) {
    httplib::Client client(base_url_);
    const auto seconds = static_cast<time_t>(timeout_s_);
    const auto micros =
        static_cast<time_t>(std::llround((timeout_s_ - std::floor(timeout_s_)) * 1e6));
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);

    const httplib::Result result = client.Post(path, body, "application/json");
    if (!result) {
        throw NetworkError("transport failure on " + base_url_ + path + ": " +
                               httplib::to_string(result.error()),
                           /*retriable=*/true);
    }
    if (result->status != 200) {
        std::string detail = result->body;
        try {
            const auto j = nlohmann::json::parse(result->body);
            if (j.contains("error")) {
                detail = j.at("error").at("code").get<std::string>() + ": " +
                         j.at("error").at("message").get<std::string>();
            }
        } catch (const nlohmann::json::exception&) {
            // keep the raw body
        }
        throw ProtocolError("remote controller returned HTTP " +
                            std::to_string(result->status) + " on " + path + " (" + detail +
                            ")");
    }
    return result->body;
}

wire::GateResponse RemoteControllerBackend::gate(const wire::GateRequest& request) {
    return wire::decode_gate_response(post("/v1/gate", wire::encode(request)));
}

wire::PlanResponse RemoteControllerBackend::plan(const wire::PlanRequest& request) {
    return wire::decode_plan_response(post("/v1/plan", wire::encode(request)));
}

wire::ReasonResponse RemoteControllerBackend::reason(const wire::ReasonRequest& request) {
    return wire::decode_reason_response(post("/v1/reason", wire::encode(request)));
}

}  // namespace cascade
