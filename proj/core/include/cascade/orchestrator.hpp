#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cascade/backends.hpp"
#include "cascade/dataset.hpp"
#include "cascade/domain.hpp"
#include "cascade/gate.hpp"
#include "cascade/netcost.hpp"
#include "cascade/privacy.hpp"
#include "cascade/segmenter.hpp"

namespace cascade {

enum class RunMode { Sim, Live };

const char* run_mode_name(RunMode m);
RunMode run_mode_from_name(const std::string& name);

enum class GatingMode { None, Always, Adaptive };

const char* gating_mode_name(GatingMode m);

// A named row of the policy matrix.
struct Policy {
    std::string name;
    GatingMode gating = GatingMode::None;
    std::set<ToolKind> tools_allowed;
};

// The five reference policies: baseline, hybrid_describe_reason,
// adaptive_relisten, always_on_asr, adaptive_asr.
Policy policy_from_name(const std::string& name);
const std::vector<std::string>& all_policy_names();

// Append-only sink for serialized cloud-bound messages; thread safe.
class WireLog {
public:
    WireLog() = default;                       // in-memory only
    explicit WireLog(const std::string& path); // tee to file
    void append(const std::string& line);
    std::vector<std::string> lines() const;

private:
    mutable std::mutex mutex_;
    std::vector<std::string> lines_;
    std::string path_;
};

struct Backends {
    EdgePerceptionBackend* edge = nullptr;
    AsrBackend* asr = nullptr;
    CloudControllerBackend* controller = nullptr;
};

struct RunConfigs {
    RunMode mode = RunMode::Sim;
    SegmenterConfig segmenter;
    GateConfig gate;
    RedactionPolicy redaction;
    NetworkModel network;
    InspectionConfig inspection;
};

// Everything recorded about one sample's end-to-end execution.
struct TraceRecord {
    std::string sample_id;
    Verdict verdict;
    CostLedger ledger;
    std::optional<GateDecision> gate_decision;
    std::optional<RefinementPlan> plan;
    std::string initial_answer;       // p0, for tool-noise regression counting
    std::optional<bool> correct;      // vs gold, when known
    int suppressed_tools = 0;         // planner requests forbidden by the policy
    std::uint64_t clip_raw_bytes = 0; // PCM16 size, for the transmission bound
    std::string error;                // non-empty when the sample failed
    bool privacy_violation = false;

    bool failed() const { return !error.empty(); }
};

// Runs one sample through the coarse-to-fine pipeline. Failures never throw:
// they are recorded in-trace together with the partial ledger.
TraceRecord run_sample(const AudioClip& clip, const Query& q, const Policy& policy,
                       const Backends& backends, const RunConfigs& configs,
                       WireLog* wire_log = nullptr);

// Runs a dataset with per-sample pipelines fanned out over `workers` threads.
// Output order always matches input order; traces are a pure function of
// (dataset, fixture, configs), independent of scheduling.
std::vector<TraceRecord> run_dataset(const std::vector<DatasetRecord>& samples,
                                     const Policy& policy, const Backends& backends,
                                     const RunConfigs& configs, int workers,
                                     WireLog* wire_log = nullptr,
                                     const std::string& dataset_dir = "");

// Trace log serialization (one JSON object per line, stable field order).
std::string trace_to_line(const TraceRecord& trace);
TraceRecord trace_from_line(const std::string& line);
void write_trace_log(const std::string& path, const std::vector<TraceRecord>& traces);
std::vector<TraceRecord> read_trace_log(const std::string& path);

}  // namespace cascade
