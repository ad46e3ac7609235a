#pragma once

#include <cstdint>
#include <string>

#include "cascade/domain.hpp"

namespace cascade {

enum class NetworkMode {
    Scripted,   // fixed per-call latency, used for exact table reproduction
    Lognormal,  // two-quantile lognormal fit over (p50, p95)
};

const char* network_mode_name(NetworkMode m);
NetworkMode network_mode_from_name(const std::string& name);

struct NetworkModel {
    NetworkMode mode = NetworkMode::Lognormal;
    double rtt_p50_s = 0.015;
    double rtt_p95_s = 0.045;
    double fixed_latency_s = 0.015;   // scripted mode
    double uplink_bytes_per_s = 0.0;  // 0 = unlimited
    double downlink_bytes_per_s = 0.0;
    std::uint64_t seed = 1;
};

void validate_network_model(const NetworkModel& model);

struct LognormalFit {
    double mu = 0.0;
    double sigma = 0.0;
};

// Inverts the (p50, p95) quantile pair: mu = ln p50,
// sigma = ln(p95/p50) / 1.6449 with the standard-normal 95th-percentile
// quantile pinned at four decimals. Degenerate p50 == p95 gives sigma = 0.
LognormalFit fit_lognormal(double p50_s, double p95_s);

// Deterministic per-sample RNG stream: a counter-free generator seeded from
// seed ^ fnv1a64(sample_id), so draws are independent of scheduling order.
class RttRng {
public:
    RttRng(std::uint64_t seed, const std::string& sample_id);
    // Uniform double in [0, 1).
    double next_unit();

private:
    std::uint64_t state_;
};

std::uint64_t fnv1a64(const std::string& text);

// One positive RTT draw in seconds (Box-Muller on the fitted lognormal, or
// the fixed latency in scripted mode).
double sample_rtt(const NetworkModel& model, RttRng& rng);

enum class TransferDirection { CloudBound, DeviceBound };

// Appends a network ledger entry: one sampled RTT plus payload transfer time
// at the configured bandwidth (zero when unlimited). Byte counters are
// incremented on the matching direction.
void charge_transfer(CostLedger& ledger, TransferDirection direction,
                     std::uint64_t payload_bytes, const NetworkModel& model, RttRng& rng);

// Extends the current network entry with the return-leg payload (no extra
// RTT); used for the response half of a round trip.
void extend_transfer(CostLedger& ledger, TransferDirection direction,
                     std::uint64_t payload_bytes, const NetworkModel& model);

}  // namespace cascade
