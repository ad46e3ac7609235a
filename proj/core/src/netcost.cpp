#include "cascade/netcost.hpp"

#include <cmath>

namespace cascade {

namespace {

// Standard-normal 95th-percentile quantile, pinned at four decimals so the
// fit is bit-stable across platforms.
constexpr double kZ95 = 1.6449;
constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

const char* network_mode_name(NetworkMode m) {
    return m == NetworkMode::Scripted ? "scripted" : "lognormal";
}

NetworkMode network_mode_from_name(const std::string& name) {
    if (name == "scripted") return NetworkMode::Scripted;
    if (name == "lognormal") return NetworkMode::Lognormal;
    throw InvalidInputError("unknown network mode '" + name + "'");
}

void validate_network_model(const NetworkModel& model) {
    if (!(model.rtt_p50_s > 0.0) || !(model.rtt_p50_s <= model.rtt_p95_s)) {
        throw InvalidInputError("network model: 0 < rtt_p50 <= rtt_p95 required");
    }
    if (model.mode == NetworkMode::Scripted && !(model.fixed_latency_s > 0.0)) {
        throw InvalidInputError("network model: scripted fixed latency must be positive");
    }
    if (model.uplink_bytes_per_s < 0.0 || model.downlink_bytes_per_s < 0.0) {
        throw InvalidInputError("network model: bandwidth must be >= 0");
    }
}

LognormalFit fit_lognormal(double p50_s, double p95_s) {
    if (!(p50_s > 0.0) || !(p50_s <= p95_s)) {
        throw InvalidInputError("fit_lognormal: 0 < p50 <= p95 required");
    }
    LognormalFit fit;
    fit.mu = std::log(p50_s);
    fit.sigma = p50_s == p95_s ? 0.0 : std::log(p95_s / p50_s) / kZ95;
    return fit;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

RttRng::RttRng(std::uint64_t seed, const std::string& sample_id)
    : state_(seed ^ fnv1a64(sample_id)) {
    if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
}

double RttRng::next_unit() {
    // splitmix64 step; portable and stateless beyond one word.
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * (1.0 / 9007199254740992.0);
}

double sample_rtt(const NetworkModel& model, RttRng& rng) {
    validate_network_model(model);
    if (model.mode == NetworkMode::Scripted) {
        return model.fixed_latency_s;
    }
    const LognormalFit fit = fit_lognormal(model.rtt_p50_s, model.rtt_p95_s);
    if (fit.sigma == 0.0) {
        return std::exp(fit.mu);
    }
    // Box-Muller, hand rolled so the draw sequence does not depend on the
    // standard library's distribution internals.
    const double u1 = 1.0 - rng.next_unit();  // (0, 1]
    const double u2 = rng.next_unit();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    return std::exp(fit.mu + fit.sigma * z);
}

void charge_transfer(CostLedger& ledger, TransferDirection direction,
                     std::uint64_t payload_bytes, const NetworkModel& model, RttRng& rng) {
    double latency_s = sample_rtt(model, rng);
    const double bandwidth = direction == TransferDirection::CloudBound
                                 ? model.uplink_bytes_per_s
                                 : model.downlink_bytes_per_s;
    if (bandwidth > 0.0) {
        latency_s += static_cast<double>(payload_bytes) / bandwidth;
    }
    const std::uint64_t cloud = direction == TransferDirection::CloudBound ? payload_bytes : 0;
    const std::uint64_t device = direction == TransferDirection::DeviceBound ? payload_bytes : 0;
    ledger.add(Stage::Network, latency_from_seconds(latency_s), cloud, device);
}

void extend_transfer(CostLedger& ledger, TransferDirection direction,
                     std::uint64_t payload_bytes, const NetworkModel& model) {
    double latency_s = 0.0;
    const double bandwidth = direction == TransferDirection::CloudBound
                                 ? model.uplink_bytes_per_s
                                 : model.downlink_bytes_per_s;
    if (bandwidth > 0.0) {
        latency_s = static_cast<double>(payload_bytes) / bandwidth;
    }
    const std::uint64_t cloud = direction == TransferDirection::CloudBound ? payload_bytes : 0;
    const std::uint64_t device = direction == TransferDirection::DeviceBound ? payload_bytes : 0;
    ledger.extend(Stage::Network, latency_from_seconds(latency_s), cloud, device);
}

}  // namespace cascade
