#pragma once

#include <map>
#include <string>
#include <vector>

#include "cascade/orchestrator.hpp"

namespace cascade {

// The five inference-path buckets. no_tool covers investigate-path samples
// that reached the reasoner with s0 only (describe-then-reason policies, or
// every planned tool suppressed by the policy).
struct PathDistribution {
    double fast = 0.0;
    double relisten_only = 0.0;
    double asr_only = 0.0;
    double both = 0.0;
    double no_tool = 0.0;

    double sum() const { return fast + relisten_only + asr_only + both + no_tool; }
};

struct RunReport {
    std::string policy;
    int n_samples = 0;
    double accuracy = 0.0;
    double mean_latency_s = 0.0;
    double p50_latency_s = 0.0;
    double p95_latency_s = 0.0;
    // Per-stage arithmetic means over all samples (absent stages count as 0),
    // so the stage means sum to the mean of totals.
    std::map<std::string, double> stage_mean_latencies_s;
    // Combined groupings exposed alongside the raw stages.
    double tools_mean_latency_s = 0.0;       // tool_relisten + tool_asr
    double cloud_gate_plan_mean_latency_s = 0.0;  // cloud_gate + cloud_plan
    PathDistribution path_distribution;
    double escalation_rate = 0.0;
    int privacy_violations = 0;
    int failures = 0;
    // Samples answered correctly at stage 0 but wrong after investigation.
    int regressions = 0;
    int suppressed_tool_requests = 0;
    std::uint64_t mean_cloud_bound_bytes = 0;
};

// Scores one policy's traces against the gold map. Every trace's sample must
// be present in gold.
RunReport score(const std::vector<TraceRecord>& traces,
                const std::map<std::string, std::string>& gold, const std::string& policy);

// Per-stage mean table (seconds) with a total row; averaged over all samples.
std::map<std::string, double> breakdown(const std::vector<TraceRecord>& traces);

struct TradeoffRow {
    std::string policy;
    double accuracy = 0.0;
    double mean_latency_s = 0.0;
    bool pareto_dominated = false;
};

// Accuracy/latency trade-off table, sorted by mean latency ascending. A row
// is Pareto-dominated when some other row is strictly better on both axes.
std::vector<TradeoffRow> compare_policies(const std::vector<RunReport>& reports);

// Serialization + human-readable rendering.
std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);
std::string render_report_table(const RunReport& report);
std::string render_tradeoff_table(const std::vector<TradeoffRow>& rows);
std::string render_breakdown_table(const std::map<std::string, double>& stage_means);

}  // namespace cascade
