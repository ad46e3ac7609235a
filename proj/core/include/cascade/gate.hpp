#pragma once

#include <string>
#include <vector>

#include "cascade/domain.hpp"

namespace cascade {

// Deterministic reference heuristic for the confidence gate. The deployed
// gate is a remote classifier (see backends); this one keeps the full
// pipeline testable offline.
struct GateConfig {
    std::vector<std::string> hedging_lexicon = {
        "possibly", "might", "unclear", "hard to tell", "i think", "not sure", "seems",
    };
    int min_rationale_tokens = 6;
    bool require_candidate_match = true;
};

void validate_gate_config(const GateConfig& config);

// Decides escalation from (s0, Q, p0). Cues:
//   hedging          - a lexicon phrase occurs in lowercase s0 or p0
//   missing_evidence - s0 is shorter than min_rationale_tokens, or shares no
//                      content token (length >= 4, non-stopword) with the query
//   inconsistency    - candidates present and p0 matches none of them under
//                      case-insensitive containment in either direction
GateDecision evaluate(const std::string& s0, const Query& q, const std::string& p0,
                      const GateConfig& config);

// Fraction of escalated decisions. Errors on an empty sequence.
double escalation_rate(const std::vector<GateDecision>& decisions);

// "0.6180" style rendering used in reports.
std::string format_rate_4dp(double rate);

}  // namespace cascade
