#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cascade/errors.hpp"

namespace cascade {

// Pattern-based on-device PII redaction applied to transcripts before any
// upload. Patterns are applied in order, left to right, non-overlapping;
// replacement tokens must not re-trigger their own pattern, which makes
// redaction idempotent.
struct RedactionPolicy {
    struct Rule {
        std::string pattern;      // ECMAScript regex
        std::string replacement;
    };
    std::vector<Rule> rules = {
        {R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})", "[REDACTED]"},  // email-shaped
        {R"([0-9]{7,})", "[REDACTED]"},                                       // phone-like digit runs
    };
    bool enabled = true;
};

void validate_redaction_policy(const RedactionPolicy& policy);

std::string redact(const std::string& text, const RedactionPolicy& policy);

// Result of inspecting one serialized cloud-bound message.
struct PayloadVerdict {
    bool ok = true;
    std::string reason;  // "waveform-field", "oversize-blob", "unknown-schema", ...
};

struct InspectionConfig {
    // Serialized size above which a non-text-registered field counts as an
    // opaque blob.
    std::uint64_t blob_threshold_bytes = 4096;
};

// Data-minimization audit over one serialized request. Violations:
//   - any waveform-named field anywhere in the message
//   - any field not registered as free text whose serialized value exceeds
//     the blob threshold
//   - unknown message type or fields outside the message schema
// The orchestrator runs this on every cloud-bound message unconditionally.
PayloadVerdict inspect_cloud_payload(const std::string& serialized_request,
                                     const InspectionConfig& config = {});

}  // namespace cascade
