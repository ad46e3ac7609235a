#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cascade/errors.hpp"

namespace cascade {

// Latencies are held as integer microseconds everywhere so that ledger sums
// are exact; they are rendered as seconds only at the reporting edge.
using LatencyUs = std::int64_t;

LatencyUs latency_from_seconds(double seconds);
double latency_to_seconds(LatencyUs us);

// A half-open-ish time window in seconds. Used both for perception scopes
// and as the payload of an RoiWindow.
struct TimeWindow {
    double start_s = 0.0;
    double end_s = 0.0;

    double duration() const { return end_s - start_s; }
    bool operator==(const TimeWindow&) const = default;
};

// On-device waveform. Never serialized into a cloud-bound message; the
// privacy module enforces that at the wire boundary.
struct AudioClip {
    std::string id;
    std::vector<float> samples;
    int sample_rate = 0;

    double duration_seconds() const;
    // Size of the clip as 16-bit PCM, the reference point for the
    // symbolic-transmission bound (cloud bytes per sample must stay below it).
    std::uint64_t raw_pcm16_bytes() const { return samples.size() * 2; }
};

// Validates sample_rate > 0 and all samples finite. Throws InvalidInputError.
void validate_clip(const AudioClip& clip);
AudioClip make_clip(std::string id, std::vector<float> samples, int sample_rate);

// Extracts clip[start_s, end_s). Index mapping: start index = floor(start*rate),
// sample count = round((end-start)*rate) capped at the clip length. This makes
// slice(slice(a,b), 0, b-a) reproduce slice(a,b) exactly.
AudioClip slice_clip(const AudioClip& clip, double start_s, double end_s);

struct Query {
    std::string text;
    std::vector<std::string> candidates;  // empty for open-ended questions
    std::string sample_id;
};

void validate_query(const Query& q);

// Output of one edge perception pass: rationale + initial answer.
struct PerceptionResult {
    std::string rationale;
    std::string answer;
    LatencyUs measured_latency_us = 0;
    std::optional<TimeWindow> scope;  // nullopt = whole clip
};

// The three heuristic cue classes, plus the opaque marker a remote gate sets
// when it escalates without exposing its internals.
enum class Cue { Hedging, MissingEvidence, Inconsistency, Remote };

const char* cue_name(Cue cue);

struct GateDecision {
    bool escalate = false;
    std::set<Cue> triggered_cues;
    std::string rationale_note;
};

enum class WindowSource { EnergyEvent, FixedWindow };

const char* window_source_name(WindowSource s);
WindowSource window_source_from_name(const std::string& name);

// A timestamped region of interest. The only audio-derived temporal metadata
// that ever crosses to the cloud.
struct RoiWindow {
    int index = 0;
    double start_s = 0.0;
    double end_s = 0.0;
    WindowSource source = WindowSource::FixedWindow;
    std::optional<double> energy_score;

    TimeWindow window() const { return TimeWindow{start_s, end_s}; }
};

struct SegmentProposal {
    std::string clip_id;
    std::vector<RoiWindow> windows;
    double clip_duration = 0.0;
};

// Checks window bounds against clip_duration and index contiguity.
void validate_proposal(const SegmentProposal& proposal);

enum class ToolKind { Relisten, Asr };

const char* tool_name(ToolKind t);
ToolKind tool_from_name(const std::string& name);

enum class AsrScope { WholeClip, SelectedRoi };

const char* asr_scope_name(AsrScope s);
AsrScope asr_scope_from_name(const std::string& name);

struct RefinementPlan {
    int roi_index = 0;
    std::string focused_query;
    std::set<ToolKind> tools;
    AsrScope asr_scope = AsrScope::WholeClip;
};

struct EvidenceBundle {
    PerceptionResult initial;
    std::optional<PerceptionResult> relisten_evidence;
    std::optional<std::string> transcript;
    Query query;

    bool has_tool_evidence() const {
        return relisten_evidence.has_value() || transcript.has_value();
    }
};

enum class Path { Fast, Investigate };

const char* path_name(Path p);

struct Verdict {
    std::string answer;
    Path path = Path::Fast;
    std::set<ToolKind> tools_used;
};

// Ledger stages, fixed vocabulary. cloud_plan exists as a separately nameable
// stage; by default planning latency is folded into cloud_gate when both are
// served by the same round trip.
enum class Stage {
    EdgePerception,
    Network,
    CloudGate,
    ToolRelisten,
    ToolAsr,
    CloudPlan,
    CloudReason,
};

const char* stage_name(Stage s);
Stage stage_from_name(const std::string& name);

struct LedgerEntry {
    Stage stage = Stage::EdgePerception;
    LatencyUs latency_us = 0;
    std::uint64_t cloud_bound_bytes = 0;
    std::uint64_t device_bound_bytes = 0;
};

// Per-sample latency and byte accounting for one end-to-end trace.
class CostLedger {
public:
    void add(Stage stage, LatencyUs latency_us, std::uint64_t cloud_bytes = 0,
             std::uint64_t device_bytes = 0);
    // Folds extra latency/bytes into the most recent entry of `stage`;
    // appends a fresh entry if none exists yet.
    void extend(Stage stage, LatencyUs extra_latency_us, std::uint64_t cloud_bytes = 0,
                std::uint64_t device_bytes = 0);

    const std::vector<LedgerEntry>& entries() const { return entries_; }
    LatencyUs total_us() const;
    LatencyUs stage_total_us(Stage stage) const;
    std::uint64_t cloud_bound_bytes() const;
    std::uint64_t device_bound_bytes() const;
    bool has_stage(Stage stage) const;

private:
    std::vector<LedgerEntry> entries_;
};

// Exact sum of entry latencies, in seconds.
double ledger_total(const CostLedger& ledger);

// Exact-match comparison used for scoring: case-insensitive after trimming
// surrounding whitespace.
bool answers_match(const std::string& answer, const std::string& gold);

}  // namespace cascade
