#include "cascade/domain.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace cascade {

LatencyUs latency_from_seconds(double seconds) {
    return static_cast<LatencyUs>(std::llround(seconds * 1e6));
}

double latency_to_seconds(LatencyUs us) {
    return static_cast<double>(us) / 1e6;
}

double AudioClip::duration_seconds() const {
    if (sample_rate <= 0) return 0.0;
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
}

void validate_clip(const AudioClip& clip) {
    if (clip.sample_rate <= 0) {
        throw InvalidInputError("audio clip '" + clip.id + "': sample_rate must be > 0");
    }
    for (float v : clip.samples) {
        if (!std::isfinite(v)) {
            throw InvalidInputError("audio clip '" + clip.id + "': non-finite sample");
        }
    }
}

AudioClip make_clip(std::string id, std::vector<float> samples, int sample_rate) {
    AudioClip clip{std::move(id), std::move(samples), sample_rate};
    validate_clip(clip);
    return clip;
}

AudioClip slice_clip(const AudioClip& clip, double start_s, double end_s) {
    const double duration = clip.duration_seconds();
    if (start_s < 0.0) {
        throw RangeError("slice start " + std::to_string(start_s) + " is before clip start");
    }
    if (!(start_s < end_s)) {
        throw RangeError("slice start " + std::to_string(start_s) +
                         " is not before slice end " + std::to_string(end_s));
    }
    if (end_s > duration + 1e-9) {
        throw RangeError("slice end " + std::to_string(end_s) + " exceeds clip duration " +
                         std::to_string(duration));
    }
    const auto len = static_cast<std::int64_t>(clip.samples.size());
    const double rate = static_cast<double>(clip.sample_rate);
    std::int64_t first = static_cast<std::int64_t>(std::floor(start_s * rate));
    first = std::clamp<std::int64_t>(first, 0, len);
    std::int64_t count = std::llround((end_s - start_s) * rate);
    const std::int64_t last = std::min(len, first + count);

    AudioClip out;
    out.id = clip.id;
    out.sample_rate = clip.sample_rate;
    out.samples.assign(clip.samples.begin() + first, clip.samples.begin() + last);
    return out;
}

void validate_query(const Query& q) {
    if (q.text.empty()) {
        throw InvalidInputError("query text must be non-empty (sample '" + q.sample_id + "')");
    }
    for (std::size_t i = 0; i < q.candidates.size(); ++i) {
        for (std::size_t j = i + 1; j < q.candidates.size(); ++j) {
            if (q.candidates[i] == q.candidates[j]) {
                throw InvalidInputError("duplicate candidate '" + q.candidates[i] +
                                        "' (sample '" + q.sample_id + "')");
            }
        }
    }
}

const char* cue_name(Cue cue) {
    switch (cue) {
        case Cue::Hedging: return "hedging";
        case Cue::MissingEvidence: return "missing_evidence";
        case Cue::Inconsistency: return "inconsistency";
        case Cue::Remote: return "remote";
    }
    return "unknown";
}

const char* window_source_name(WindowSource s) {
    return s == WindowSource::EnergyEvent ? "energy_event" : "fixed_window";
}

WindowSource window_source_from_name(const std::string& name) {
    if (name == "energy_event") return WindowSource::EnergyEvent;
    if (name == "fixed_window") return WindowSource::FixedWindow;
    throw InvalidInputError("unknown window source '" + name + "'");
}

void validate_proposal(const SegmentProposal& proposal) {
    for (std::size_t i = 0; i < proposal.windows.size(); ++i) {
        const RoiWindow& w = proposal.windows[i];
        if (w.index != static_cast<int>(i)) {
            throw InvalidInputError("proposal for '" + proposal.clip_id +
                                    "': window indices not contiguous");
        }
        if (!(w.start_s >= 0.0 && w.start_s < w.end_s)) {
            throw InvalidInputError("proposal for '" + proposal.clip_id +
                                    "': window bounds out of order");
        }
        if (w.end_s > proposal.clip_duration + 1e-9) {
            throw InvalidInputError("proposal for '" + proposal.clip_id +
                                    "': window end exceeds clip duration");
        }
    }
}

const char* tool_name(ToolKind t) {
    return t == ToolKind::Relisten ? "relisten" : "asr";
}

ToolKind tool_from_name(const std::string& name) {
    if (name == "relisten") return ToolKind::Relisten;
    if (name == "asr") return ToolKind::Asr;
    throw InvalidInputError("unknown tool '" + name + "'");
}

const char* asr_scope_name(AsrScope s) {
    return s == AsrScope::WholeClip ? "whole_clip" : "selected_roi";
}

AsrScope asr_scope_from_name(const std::string& name) {
    if (name == "whole_clip") return AsrScope::WholeClip;
    if (name == "selected_roi") return AsrScope::SelectedRoi;
    throw InvalidInputError("unknown asr scope '" + name + "'");
}

const char* path_name(Path p) {
    return p == Path::Fast ? "fast" : "investigate";
}

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::EdgePerception: return "edge_perception";
        case Stage::Network: return "network";
        case Stage::CloudGate: return "cloud_gate";
        case Stage::ToolRelisten: return "tool_relisten";
        case Stage::ToolAsr: return "tool_asr";
        case Stage::CloudPlan: return "cloud_plan";
        case Stage::CloudReason: return "cloud_reason";
    }
    return "unknown";
}

Stage stage_from_name(const std::string& name) {
    if (name == "edge_perception") return Stage::EdgePerception;
    if (name == "network") return Stage::Network;
    if (name == "cloud_gate") return Stage::CloudGate;
    if (name == "tool_relisten") return Stage::ToolRelisten;
    if (name == "tool_asr") return Stage::ToolAsr;
    if (name == "cloud_plan") return Stage::CloudPlan;
    if (name == "cloud_reason") return Stage::CloudReason;
    throw InvalidInputError("unknown ledger stage '" + name + "'");
}

void CostLedger::add(Stage stage, LatencyUs latency_us, std::uint64_t cloud_bytes,
                     std::uint64_t device_bytes) {
    if (latency_us < 0) {
        throw InvalidInputError("ledger latency must be >= 0");
    }
    entries_.push_back(LedgerEntry{stage, latency_us, cloud_bytes, device_bytes});
}

void CostLedger::extend(Stage stage, LatencyUs extra_latency_us, std::uint64_t cloud_bytes,
                        std::uint64_t device_bytes) {
    if (extra_latency_us < 0) {
        throw InvalidInputError("ledger latency must be >= 0");
    }
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
        if (it->stage == stage) {
            it->latency_us += extra_latency_us;
            it->cloud_bound_bytes += cloud_bytes;
            it->device_bound_bytes += device_bytes;
            return;
        }
    }
    entries_.push_back(LedgerEntry{stage, extra_latency_us, cloud_bytes, device_bytes});
}

LatencyUs CostLedger::total_us() const {
    LatencyUs total = 0;
    for (const LedgerEntry& e : entries_) total += e.latency_us;
    return total;
}

LatencyUs CostLedger::stage_total_us(Stage stage) const {
    LatencyUs total = 0;
    for (const LedgerEntry& e : entries_) {
        if (e.stage == stage) total += e.latency_us;
    }
    return total;
}

std::uint64_t CostLedger::cloud_bound_bytes() const {
    std::uint64_t total = 0;
    for (const LedgerEntry& e : entries_) total += e.cloud_bound_bytes;
    return total;
}

std::uint64_t CostLedger::device_bound_bytes() const {
    std::uint64_t total = 0;
    for (const LedgerEntry& e : entries_) total += e.device_bound_bytes;
    return total;
}

bool CostLedger::has_stage(Stage stage) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [stage](const LedgerEntry& e) { return e.stage == stage; });
}

double ledger_total(const CostLedger& ledger) {
    return latency_to_seconds(ledger.total_us());
}

bool answers_match(const std::string& answer, const std::string& gold) {
    auto normalize = [](const std::string& s) {
        const auto first = s.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) return std::string();
        const auto last = s.find_last_not_of(" \t\r\n");
        std::string out = s.substr(first, last - first + 1);
        std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
            return static_cast<char>(std::tolower(c));
        });
        return out;
    };
    return normalize(answer) == normalize(gold);
}

}  // namespace cascade
