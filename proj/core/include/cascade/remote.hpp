#pragma once

#include <memory>
#include <string>

#include "cascade/backends.hpp"

namespace cascade {

// Controller adapter speaking the wire protocol over HTTP. One independent
// connection per in-flight request; safe to call from concurrent pipelines.
class RemoteControllerBackend : public CloudControllerBackend {
public:
    explicit RemoteControllerBackend(std::string base_url, double timeout_s = 10.0);
    BackendInfo info() const override;
    wire::GateResponse gate(const wire::GateRequest& request) override;
    wire::PlanResponse plan(const wire::PlanRequest& request) override;
    wire::ReasonResponse reason(const wire::ReasonRequest& request) override;

private:
    std::string post(const std::string& path, const std::string& body);

    std::string base_url_;
    double timeout_s_;
};

}  // namespace cascade
