#include "cascade/gate.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>

namespace cascade {

namespace {

std::string to_lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

// Small fixed stopword list for the content-token overlap check.
const std::set<std::string>& stopwords() {
    static const std::set<std::string> kStopwords = {
        "the",  "this",  "that",   "with",  "from",  "what",  "which", "when",
        "where", "there", "their",  "they",  "have",  "does",  "been",  "about",
        "will",  "would", "could",  "should", "them",  "then",  "than",  "some",
        "such",  "into",  "your",   "very",  "just",  "also",  "each",  "other",
        "more",  "most",  "only",   "both",  "same",  "after", "before",
    };
    return kStopwords;
}

std::vector<std::string> whitespace_tokens(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream in(text);
    std::string token;
    while (in >> token) tokens.push_back(token);
    return tokens;
}

std::string strip_punct(const std::string& token) {
    std::size_t first = 0;
    std::size_t last = token.size();
    while (first < last && !std::isalnum(static_cast<unsigned char>(token[first]))) ++first;
    while (last > first && !std::isalnum(static_cast<unsigned char>(token[last - 1]))) --last;
    return token.substr(first, last - first);
}

std::set<std::string> content_tokens(const std::string& text) {
    std::set<std::string> out;
    for (const std::string& raw : whitespace_tokens(to_lower(text))) {
        const std::string token = strip_punct(raw);
        if (token.size() >= 4 && stopwords().count(token) == 0) {
            out.insert(token);
        }
    }
    return out;
}

bool contains_ci(const std::string& haystack_lower, const std::string& needle_lower) {
    return haystack_lower.find(needle_lower) != std::string::npos;
}

}  // namespace

void validate_gate_config(const GateConfig& config) {
    if (config.hedging_lexicon.empty()) {
        throw InvalidInputError("gate: hedging lexicon must be non-empty");
    }
    if (config.min_rationale_tokens < 1) {
        throw InvalidInputError("gate: min_rationale_tokens must be >= 1");
    }
}

GateDecision evaluate(const std::string& s0, const Query& q, const std::string& p0,
                      const GateConfig& config) {
    validate_gate_config(config);
    GateDecision decision;
    const std::string s0_lower = to_lower(s0);
    const std::string p0_lower = to_lower(trim(p0));

    for (const std::string& phrase : config.hedging_lexicon) {
        const std::string phrase_lower = to_lower(phrase);
        if (contains_ci(s0_lower, phrase_lower) || contains_ci(p0_lower, phrase_lower)) {
            decision.triggered_cues.insert(Cue::Hedging);
            decision.rationale_note += "hedging phrase '" + phrase + "'; ";
            break;
        }
    }

    const auto tokens = whitespace_tokens(s0);
    if (static_cast<int>(tokens.size()) < config.min_rationale_tokens) {
        decision.triggered_cues.insert(Cue::MissingEvidence);
        decision.rationale_note += "rationale too short; ";
    } else {
        const std::set<std::string> rationale_terms = content_tokens(s0);
        const std::set<std::string> query_terms = content_tokens(q.text);
        const bool overlaps = std::any_of(
            rationale_terms.begin(), rationale_terms.end(),
            [&](const std::string& t) { return query_terms.count(t) > 0; });
        if (!query_terms.empty() && !overlaps) {
            decision.triggered_cues.insert(Cue::MissingEvidence);
            decision.rationale_note += "no content overlap with query; ";
        }
    }

    if (config.require_candidate_match && !q.candidates.empty()) {
        const bool matches_any = std::any_of(
            q.candidates.begin(), q.candidates.end(), [&](const std::string& cand) {
                const std::string cand_lower = to_lower(trim(cand));
                if (cand_lower.empty() || p0_lower.empty()) return cand_lower == p0_lower;
                return contains_ci(p0_lower, cand_lower) || contains_ci(cand_lower, p0_lower);
            });
        if (!matches_any) {
            decision.triggered_cues.insert(Cue::Inconsistency);
            decision.rationale_note += "answer matches no candidate; ";
        }
    }

    decision.escalate = !decision.triggered_cues.empty();
    return decision;
}

double escalation_rate(const std::vector<GateDecision>& decisions) {
    if (decisions.empty()) {
        throw InvalidInputError("escalation_rate: empty decision sequence");
    }
    const auto escalated = std::count_if(decisions.begin(), decisions.end(),
                                         [](const GateDecision& d) { return d.escalate; });
    return static_cast<double>(escalated) / static_cast<double>(decisions.size());
}

std::string format_rate_4dp(double rate) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", rate);
    return buf;
}

}  // namespace cascade
