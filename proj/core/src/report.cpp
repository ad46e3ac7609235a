#include "cascade/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

namespace cascade {

using ordered_json = nlohmann::ordered_json;

namespace {

const std::vector<Stage>& all_stages() {
    static const std::vector<Stage> kStages = {
        Stage::EdgePerception, Stage::Network,   Stage::CloudGate, Stage::ToolRelisten,
        Stage::ToolAsr,        Stage::CloudPlan, Stage::CloudReason,
    };
    return kStages;
}

double percentile(std::vector<LatencyUs> totals, double q) {
    if (totals.empty()) return 0.0;
    std::sort(totals.begin(), totals.end());
    const double rank = q * static_cast<double>(totals.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = static_cast<std::size_t>(std::ceil(rank));
    const double frac = rank - static_cast<double>(lo);
    const double lo_s = latency_to_seconds(totals[lo]);
    const double hi_s = latency_to_seconds(totals[hi]);
    return lo_s + (hi_s - lo_s) * frac;
}

}  // namespace

RunReport score(const std::vector<TraceRecord>& traces,
                const std::map<std::string, std::string>& gold, const std::string& policy) {
    if (traces.empty()) {
        throw InvalidInputError("score: no traces");
    }
    RunReport report;
    report.policy = policy;
    report.n_samples = static_cast<int>(traces.size());

    const double n = static_cast<double>(traces.size());
    std::map<Stage, LatencyUs> stage_sums;
    LatencyUs total_sum = 0;
    std::vector<LatencyUs> totals;
    totals.reserve(traces.size());
    int correct = 0;
    int fast = 0, relisten_only = 0, asr_only = 0, both = 0, no_tool = 0;
    int escalated = 0;
    std::uint64_t cloud_bytes_sum = 0;

    for (const TraceRecord& trace : traces) {
        const auto gold_it = gold.find(trace.sample_id);
        if (gold_it == gold.end()) {
            throw ScoringError("no gold answer for sample '" + trace.sample_id + "'");
        }
        if (trace.privacy_violation) ++report.privacy_violations;
        if (trace.failed()) {
            ++report.failures;
            totals.push_back(trace.ledger.total_us());
            total_sum += trace.ledger.total_us();
            continue;
        }

        const bool is_correct = answers_match(trace.verdict.answer, gold_it->second);
        if (is_correct) ++correct;
        const bool stage0_correct = answers_match(trace.initial_answer, gold_it->second);
        if (stage0_correct && !is_correct) ++report.regressions;

        for (const LedgerEntry& e : trace.ledger.entries()) {
            stage_sums[e.stage] += e.latency_us;
        }
        totals.push_back(trace.ledger.total_us());
        total_sum += trace.ledger.total_us();
        cloud_bytes_sum += trace.ledger.cloud_bound_bytes();
        report.suppressed_tool_requests += trace.suppressed_tools;

        if (trace.verdict.path == Path::Fast) {
            ++fast;
        } else {
            ++escalated;
            const bool used_relisten = trace.verdict.tools_used.count(ToolKind::Relisten) > 0;
            const bool used_asr = trace.verdict.tools_used.count(ToolKind::Asr) > 0;
            if (used_relisten && used_asr) ++both;
            else if (used_relisten) ++relisten_only;
            else if (used_asr) ++asr_only;
            else ++no_tool;
        }
    }

    report.accuracy = static_cast<double>(correct) / n;
    report.mean_latency_s = latency_to_seconds(total_sum) / n;
    report.p50_latency_s = percentile(totals, 0.50);
    report.p95_latency_s = percentile(totals, 0.95);
    for (Stage s : all_stages()) {
        report.stage_mean_latencies_s[stage_name(s)] =
            latency_to_seconds(stage_sums[s]) / n;
    }
    report.tools_mean_latency_s =
        latency_to_seconds(stage_sums[Stage::ToolRelisten] + stage_sums[Stage::ToolAsr]) / n;
    report.cloud_gate_plan_mean_latency_s =
        latency_to_seconds(stage_sums[Stage::CloudGate] + stage_sums[Stage::CloudPlan]) / n;
    // Paths are fractions of completed samples so the distribution sums to 1
    // even when some samples failed.
    const int completed = fast + relisten_only + asr_only + both + no_tool;
    const double denom = completed > 0 ? static_cast<double>(completed) : 1.0;
    report.path_distribution.fast = fast / denom;
    report.path_distribution.relisten_only = relisten_only / denom;
    report.path_distribution.asr_only = asr_only / denom;
    report.path_distribution.both = both / denom;
    report.path_distribution.no_tool = no_tool / denom;
    report.escalation_rate = escalated / denom;
    report.mean_cloud_bound_bytes =
        cloud_bytes_sum / static_cast<std::uint64_t>(traces.size());
    return report;
}

std::map<std::string, double> breakdown(const std::vector<TraceRecord>& traces) {
    if (traces.empty()) {
        throw InvalidInputError("breakdown: no traces");
    }
    const double n = static_cast<double>(traces.size());
    std::map<Stage, LatencyUs> stage_sums;
    LatencyUs total_sum = 0;
    for (const TraceRecord& trace : traces) {
        for (const LedgerEntry& e : trace.ledger.entries()) {
            stage_sums[e.stage] += e.latency_us;
        }
        total_sum += trace.ledger.total_us();
    }
    std::map<std::string, double> means;
    for (Stage s : all_stages()) {
        means[stage_name(s)] = latency_to_seconds(stage_sums[s]) / n;
    }
    means["total"] = latency_to_seconds(total_sum) / n;
    return means;
}

std::vector<TradeoffRow> compare_policies(const std::vector<RunReport>& reports) {
    if (reports.size() < 2) {
        throw InvalidInputError("compare_policies: need at least two reports");
    }
    std::vector<TradeoffRow> rows;
    rows.reserve(reports.size());
    for (const RunReport& r : reports) {
        rows.push_back(TradeoffRow{r.policy, r.accuracy, r.mean_latency_s, false});
    }
    for (TradeoffRow& row : rows) {
        row.pareto_dominated = std::any_of(rows.begin(), rows.end(), [&](const TradeoffRow& o) {
            return o.accuracy > row.accuracy && o.mean_latency_s < row.mean_latency_s;
        });
    }
    std::sort(rows.begin(), rows.end(), [](const TradeoffRow& a, const TradeoffRow& b) {
        if (a.mean_latency_s != b.mean_latency_s) return a.mean_latency_s < b.mean_latency_s;
        return a.policy < b.policy;
    });
    return rows;
}

std::string report_to_json(const RunReport& report) {
    ordered_json j;
    j["policy"] = report.policy;
    j["n_samples"] = report.n_samples;
    j["accuracy"] = report.accuracy;
    j["mean_latency_s"] = report.mean_latency_s;
    j["p50_latency_s"] = report.p50_latency_s;
    j["p95_latency_s"] = report.p95_latency_s;
    j["stage_mean_latencies_s"] = report.stage_mean_latencies_s;
    j["tools_mean_latency_s"] = report.tools_mean_latency_s;
    j["cloud_gate_plan_mean_latency_s"] = report.cloud_gate_plan_mean_latency_s;
    j["path_distribution"]["fast"] = report.path_distribution.fast;
    j["path_distribution"]["relisten_only"] = report.path_distribution.relisten_only;
    j["path_distribution"]["asr_only"] = report.path_distribution.asr_only;
    j["path_distribution"]["both"] = report.path_distribution.both;
    j["path_distribution"]["no_tool"] = report.path_distribution.no_tool;
    j["escalation_rate"] = report.escalation_rate;
    j["privacy_violations"] = report.privacy_violations;
    j["failures"] = report.failures;
    j["regressions"] = report.regressions;
    j["suppressed_tool_requests"] = report.suppressed_tool_requests;
    j["mean_cloud_bound_bytes"] = report.mean_cloud_bound_bytes;
    return j.dump(2);
}

RunReport report_from_json(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    RunReport report;
    report.policy = j.at("policy").get<std::string>();
    report.n_samples = j.at("n_samples").get<int>();
    report.accuracy = j.at("accuracy").get<double>();
    report.mean_latency_s = j.at("mean_latency_s").get<double>();
    report.p50_latency_s = j.at("p50_latency_s").get<double>();
    report.p95_latency_s = j.at("p95_latency_s").get<double>();
    report.stage_mean_latencies_s =
        j.at("stage_mean_latencies_s").get<std::map<std::string, double>>();
    report.tools_mean_latency_s = j.at("tools_mean_latency_s").get<double>();
    report.cloud_gate_plan_mean_latency_s =
        j.at("cloud_gate_plan_mean_latency_s").get<double>();
    report.path_distribution.fast = j.at("path_distribution").at("fast").get<double>();
    report.path_distribution.relisten_only =
        j.at("path_distribution").at("relisten_only").get<double>();
    report.path_distribution.asr_only = j.at("path_distribution").at("asr_only").get<double>();
    report.path_distribution.both = j.at("path_distribution").at("both").get<double>();
    report.path_distribution.no_tool = j.at("path_distribution").at("no_tool").get<double>();
    report.escalation_rate = j.at("escalation_rate").get<double>();
    report.privacy_violations = j.at("privacy_violations").get<int>();
    report.failures = j.at("failures").get<int>();
    report.regressions = j.at("regressions").get<int>();
    report.suppressed_tool_requests = j.at("suppressed_tool_requests").get<int>();
    report.mean_cloud_bound_bytes = j.at("mean_cloud_bound_bytes").get<std::uint64_t>();
    return report;
}

namespace {

std::string fmt(double v, const char* spec = "%.4f") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

}  // namespace

std::string render_report_table(const RunReport& report) {
    std::ostringstream out;
    out << "policy: " << report.policy << "  (n=" << report.n_samples << ")\n";
    out << "  accuracy          " << fmt(report.accuracy) << "\n";
    out << "  mean latency      " << fmt(report.mean_latency_s, "%.3f") << " s"
        << "  (p50 " << fmt(report.p50_latency_s, "%.3f") << ", p95 "
        << fmt(report.p95_latency_s, "%.3f") << ")\n";
    out << "  escalation rate   " << fmt(report.escalation_rate) << "\n";
    out << "  paths             fast " << fmt(report.path_distribution.fast) << ", relisten "
        << fmt(report.path_distribution.relisten_only) << ", asr "
        << fmt(report.path_distribution.asr_only) << ", both "
        << fmt(report.path_distribution.both) << ", no-tool "
        << fmt(report.path_distribution.no_tool) << "\n";
    out << "  regressions       " << report.regressions << "\n";
    out << "  privacy failures  " << report.privacy_violations << "\n";
    out << "  stage means (s):\n";
    for (const auto& [stage, mean] : report.stage_mean_latencies_s) {
        out << "    " << stage << ": " << fmt(mean, "%.3f") << "\n";
    }
    out << "    tools (combined): " << fmt(report.tools_mean_latency_s, "%.3f") << "\n";
    return out.str();
}

std::string render_tradeoff_table(const std::vector<TradeoffRow>& rows) {
    std::ostringstream out;
    out << "policy                      accuracy   mean_latency_s   pareto\n";
    for (const TradeoffRow& row : rows) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-26s  %8.4f  %14.3f   %s\n", row.policy.c_str(),
                      row.accuracy, row.mean_latency_s,
                      row.pareto_dominated ? "dominated" : "-");
        out << line;
    }
    return out.str();
}

std::string render_breakdown_table(const std::map<std::string, double>& stage_means) {
    std::ostringstream out;
    out << "stage            mean_latency_s\n";
    for (const auto& [stage, mean] : stage_means) {
        if (stage == "total") continue;
        char line[96];
        std::snprintf(line, sizeof(line), "%-16s %14.3f\n", stage.c_str(), mean);
        out << line;
    }
    const auto total = stage_means.find("total");
    if (total != stage_means.end()) {
        char line[96];
        std::snprintf(line, sizeof(line), "%-16s %14.3f\n", "total", total->second);
        out << line;
    }
    return out.str();
}

}  // namespace cascade
