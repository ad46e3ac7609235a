#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cascade/domain.hpp"

namespace cascade::wire {

inline constexpr int kWireVersion = 1;

// Request/response messages for the cloud controller protocol. One JSON
// object per line; requests are self-describing via a "type" field so the
// privacy inspector and the wire log can audit them standalone.

struct GateRequest {
    int v = kWireVersion;
    std::string sample_id;
    std::string s0;
    std::string p0;
    std::string query_text;
    std::vector<std::string> candidates;
};

struct GateResponse {
    bool escalate = false;
    std::string note;
    // Scripted controller compute latency; absent in live deployments where
    // the caller measures wall-clock instead.
    std::optional<double> latency_s;
};

struct PlanRequest {
    int v = kWireVersion;
    std::string sample_id;
    std::string s0;
    std::string query_text;
    std::vector<RoiWindow> windows;  // ROI metadata only, never samples
};

struct PlanResponse {
    int roi_index = 0;
    std::string focused_query;
    std::vector<std::string> tools;
    std::string asr_scope;
    std::optional<double> latency_s;
};

struct ReasonRequest {
    int v = kWireVersion;
    std::string sample_id;
    std::string s0;
    std::string p0;
    std::optional<std::string> e_audio;
    std::optional<std::string> t_text;
    std::string query_text;
    std::vector<std::string> candidates;
};

struct ReasonResponse {
    std::string answer;
    std::optional<double> latency_s;
};

// Encoding appends the trailing newline (line-delimited protocol). Decoding
// is strict: unknown fields, missing required fields, or a mismatched "type"
// tag raise ProtocolError.
std::string encode(const GateRequest& msg);
std::string encode(const GateResponse& msg);
std::string encode(const PlanRequest& msg);
std::string encode(const PlanResponse& msg);
std::string encode(const ReasonRequest& msg);
std::string encode(const ReasonResponse& msg);

GateRequest decode_gate_request(const std::string& line);
GateResponse decode_gate_response(const std::string& line);
PlanRequest decode_plan_request(const std::string& line);
PlanResponse decode_plan_response(const std::string& line);
ReasonRequest decode_reason_request(const std::string& line);
ReasonResponse decode_reason_response(const std::string& line);

// Error body used by the mock cloud for protocol failures.
std::string encode_error(const std::string& code, const std::string& message);

// Field registry per request type, consumed by the privacy inspector.
struct MessageSchema {
    std::set<std::string> allowed_fields;
    // Fields that legitimately carry free text of arbitrary length
    // (transcripts, rationales) and are exempt from the blob threshold.
    std::set<std::string> text_fields;
};

// Returns nullptr for unknown request types.
const MessageSchema* request_schema(const std::string& type);

}  // namespace cascade::wire
