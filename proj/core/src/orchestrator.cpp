#include "cascade/orchestrator.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "cascade/wire.hpp"

namespace cascade {

using ordered_json = nlohmann::ordered_json;

const char* run_mode_name(RunMode m) { return m == RunMode::Sim ? "sim" : "live"; }

RunMode run_mode_from_name(const std::string& name) {
    if (name == "sim") return RunMode::Sim;
    if (name == "live") return RunMode::Live;
    throw InvalidInputError("unknown run mode '" + name + "'");
}

const char* gating_mode_name(GatingMode m) {
    switch (m) {
        case GatingMode::None: return "none";
        case GatingMode::Always: return "always";
        case GatingMode::Adaptive: return "adaptive";
    }
    return "unknown";
}

Policy policy_from_name(const std::string& name) {
    if (name == "baseline") {
        return Policy{name, GatingMode::None, {}};
    }
    if (name == "hybrid_describe_reason") {
        return Policy{name, GatingMode::Always, {}};
    }
    if (name == "adaptive_relisten") {
        return Policy{name, GatingMode::Adaptive, {ToolKind::Relisten}};
    }
    if (name == "always_on_asr") {
        return Policy{name, GatingMode::Always, {ToolKind::Relisten, ToolKind::Asr}};
    }
    if (name == "adaptive_asr") {
        return Policy{name, GatingMode::Adaptive, {ToolKind::Relisten, ToolKind::Asr}};
    }
    throw InvalidInputError("unknown policy '" + name + "'");
}

const std::vector<std::string>& all_policy_names() {
    static const std::vector<std::string> kNames = {
        "baseline", "hybrid_describe_reason", "adaptive_relisten", "always_on_asr",
        "adaptive_asr",
    };
    return kNames;
}

WireLog::WireLog(const std::string& path) : path_(path) {
    if (!path_.empty()) {
        std::ofstream out(path_, std::ios::trunc);  // start fresh per run
        if (!out) {
            throw InvalidInputError("cannot open wire log '" + path_ + "'");
        }
    }
}

void WireLog::append(const std::string& line) {
    std::lock_guard<std::mutex> lock(mutex_);
    lines_.push_back(line);
    if (!path_.empty()) {
        std::ofstream out(path_, std::ios::app);
        out << line;
        if (line.empty() || line.back() != '\n') out << '\n';
    }
}

std::vector<std::string> WireLog::lines() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return lines_;
}

namespace {

// One cloud round trip: serialize, privacy-audit, log, charge the network,
// call the controller, charge the compute stage. Every cloud-bound message
// flows through here; there is no other path to the controller.
class CloudChannel {
public:
    CloudChannel(const Backends& backends, const RunConfigs& configs, WireLog* wire_log,
                 RttRng& rng, CostLedger& ledger)
        : backends_(backends), configs_(configs), wire_log_(wire_log), rng_(rng),
          ledger_(ledger) {}

    GateDecision gate(const wire::GateRequest& request) {
        const std::string payload = audited(wire::encode(request));
        begin_round_trip(payload.size(), /*piggyback=*/false);
        const auto t0 = std::chrono::steady_clock::now();
        const wire::GateResponse response = backends_.controller->gate(request);
        const LatencyUs compute = compute_latency(response.latency_s, t0);
        end_round_trip(wire::encode(response).size());
        ledger_.add(Stage::CloudGate, compute);

        GateDecision decision;
        decision.escalate = response.escalate;
        decision.rationale_note = response.note;
        if (response.escalate) decision.triggered_cues.insert(Cue::Remote);
        return decision;
    }

    // `piggyback` folds the plan onto the gate round trip: no extra RTT, and
    // the planning latency lands in the cloud_gate stage.
    RefinementPlan plan(const wire::PlanRequest& request, bool piggyback) {
        const std::string payload = audited(wire::encode(request));
        begin_round_trip(payload.size(), piggyback);
        const auto t0 = std::chrono::steady_clock::now();
        const wire::PlanResponse response = backends_.controller->plan(request);
        const LatencyUs compute = compute_latency(response.latency_s, t0);
        end_round_trip(wire::encode(response).size());
        ledger_.extend(piggyback ? Stage::CloudGate : Stage::CloudPlan, compute);

        if (response.roi_index < 0 ||
            response.roi_index >= static_cast<int>(request.windows.size())) {
            throw ProtocolError("plan response roi_index " +
                                std::to_string(response.roi_index) + " out of range for " +
                                std::to_string(request.windows.size()) + " windows");
        }
        if (response.tools.empty()) {
            throw ProtocolError("plan response has an empty tool set");
        }
        RefinementPlan plan;
        plan.roi_index = response.roi_index;
        plan.focused_query = response.focused_query;
        for (const std::string& t : response.tools) plan.tools.insert(tool_from_name(t));
        plan.asr_scope = asr_scope_from_name(response.asr_scope);
        return plan;
    }

    std::string reason(const wire::ReasonRequest& request) {
        const std::string payload = audited(wire::encode(request));
        begin_round_trip(payload.size(), /*piggyback=*/false);
        const auto t0 = std::chrono::steady_clock::now();
        const wire::ReasonResponse response = backends_.controller->reason(request);
        const LatencyUs compute = compute_latency(response.latency_s, t0);
        end_round_trip(wire::encode(response).size());
        ledger_.add(Stage::CloudReason, compute);
        return response.answer;
    }

private:
    std::string audited(const std::string& payload) {
        const PayloadVerdict verdict = inspect_cloud_payload(payload, configs_.inspection);
        if (!verdict.ok) {
            throw PrivacyViolationError(verdict.reason);
        }
        if (wire_log_ != nullptr) wire_log_->append(payload);
        return payload;
    }

    // In simulation mode the network stage carries the modeled RTT and
    // transfer time. In live mode the measured call wall-clock already
    // includes real transport, so the network entry only accounts bytes.
    void begin_round_trip(std::uint64_t request_bytes, bool piggyback) {
        if (piggyback) {
            extend_transfer(ledger_, TransferDirection::CloudBound, request_bytes,
                            configs_.network);
            return;
        }
        if (configs_.mode == RunMode::Sim) {
            charge_transfer(ledger_, TransferDirection::CloudBound, request_bytes,
                            configs_.network, rng_);
        } else {
            ledger_.add(Stage::Network, 0, request_bytes, 0);
        }
    }

    void end_round_trip(std::uint64_t response_bytes) {
        if (configs_.mode == RunMode::Sim) {
            extend_transfer(ledger_, TransferDirection::DeviceBound, response_bytes,
                            configs_.network);
        } else {
            ledger_.extend(Stage::Network, 0, 0, response_bytes);
        }
    }

    LatencyUs compute_latency(const std::optional<double>& scripted_latency_s,
                              std::chrono::steady_clock::time_point started) const {
        if (configs_.mode == RunMode::Sim) {
            return latency_from_seconds(scripted_latency_s.value_or(0.0));
        }
        const auto elapsed = std::chrono::steady_clock::now() - started;
        return std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count();
    }

    const Backends& backends_;
    const RunConfigs& configs_;
    WireLog* wire_log_;
    RttRng& rng_;
    CostLedger& ledger_;
};

std::set<ToolKind> intersect_tools(const std::set<ToolKind>& planned,
                                   const std::set<ToolKind>& allowed) {
    std::set<ToolKind> out;
    for (ToolKind t : planned) {
        if (allowed.count(t) > 0) out.insert(t);
    }
    return out;
}

}  // namespace

TraceRecord run_sample(const AudioClip& clip, const Query& q, const Policy& policy,
                       const Backends& backends, const RunConfigs& configs,
                       WireLog* wire_log) {
    TraceRecord trace;
    trace.sample_id = q.sample_id;
    trace.clip_raw_bytes = clip.raw_pcm16_bytes();
    RttRng rng(configs.network.seed, q.sample_id);
    CloudChannel channel(backends, configs, wire_log, rng, trace.ledger);

    try {
        // Stage 0: coarse edge perception over the whole clip.
        const PerceptionResult initial = backends.edge->infer(clip, std::nullopt, q.text);
        trace.ledger.add(Stage::EdgePerception, initial.measured_latency_us);
        trace.initial_answer = initial.answer;

        bool escalate = false;
        bool gate_round_trip = false;
        switch (policy.gating) {
            case GatingMode::None:
                break;
            case GatingMode::Always:
                escalate = true;
                break;
            case GatingMode::Adaptive: {
                wire::GateRequest request;
                request.sample_id = q.sample_id;
                request.s0 = initial.rationale;
                request.p0 = initial.answer;
                request.query_text = q.text;
                request.candidates = q.candidates;
                const GateDecision decision = channel.gate(request);
                trace.gate_decision = decision;
                escalate = decision.escalate;
                gate_round_trip = true;
                break;
            }
        }

        if (!escalate) {
            trace.verdict = Verdict{initial.answer, Path::Fast, {}};
            return trace;
        }

        EvidenceBundle evidence;
        evidence.initial = initial;
        evidence.query = q;
        std::set<ToolKind> tools_used;

        if (!policy.tools_allowed.empty()) {
            const SegmentProposal proposal = propose(clip, configs.segmenter);

            wire::PlanRequest plan_request;
            plan_request.sample_id = q.sample_id;
            plan_request.s0 = initial.rationale;
            plan_request.query_text = q.text;
            plan_request.windows = proposal.windows;
            const RefinementPlan plan = channel.plan(plan_request, gate_round_trip);
            trace.plan = plan;

            const std::set<ToolKind> effective =
                intersect_tools(plan.tools, policy.tools_allowed);
            trace.suppressed_tools =
                static_cast<int>(plan.tools.size()) - static_cast<int>(effective.size());
            const TimeWindow roi = proposal.windows[plan.roi_index].window();

            if (effective.count(ToolKind::Relisten) > 0) {
                const PerceptionResult focused =
                    backends.edge->infer(clip, roi, plan.focused_query);
                trace.ledger.add(Stage::ToolRelisten, focused.measured_latency_us);
                evidence.relisten_evidence = focused;
                tools_used.insert(ToolKind::Relisten);
            }
            if (effective.count(ToolKind::Asr) > 0) {
                const std::optional<TimeWindow> scope =
                    plan.asr_scope == AsrScope::SelectedRoi ? std::optional<TimeWindow>(roi)
                                                            : std::nullopt;
                const TranscriptResult transcript = backends.asr->transcribe(clip, scope);
                trace.ledger.add(Stage::ToolAsr, transcript.latency_us);
                evidence.transcript = transcript.text;
                tools_used.insert(ToolKind::Asr);
            }
        }

        // Evidence integration: on-device redaction, then the cloud verdict.
        wire::ReasonRequest reason_request;
        reason_request.sample_id = q.sample_id;
        reason_request.s0 = initial.rationale;
        reason_request.p0 = initial.answer;
        if (evidence.relisten_evidence) {
            reason_request.e_audio = evidence.relisten_evidence->rationale;
        }
        if (evidence.transcript) {
            reason_request.t_text = redact(*evidence.transcript, configs.redaction);
        }
        reason_request.query_text = q.text;
        reason_request.candidates = q.candidates;
        const std::string answer = channel.reason(reason_request);

        trace.verdict = Verdict{answer, Path::Investigate, tools_used};
        return trace;
    } catch (const PrivacyViolationError& e) {
        trace.privacy_violation = true;
        trace.error = e.what();
        return trace;
    } catch (const Error& e) {
        trace.error = e.what();
        return trace;
    }
}

std::vector<TraceRecord> run_dataset(const std::vector<DatasetRecord>& samples,
                                     const Policy& policy, const Backends& backends,
                                     const RunConfigs& configs, int workers,
                                     WireLog* wire_log, const std::string& dataset_dir) {
    if (samples.empty()) {
        throw InvalidInputError("run_dataset: no samples");
    }
    if (workers < 1) workers = 1;

    std::vector<TraceRecord> traces(samples.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= samples.size()) break;
            const DatasetRecord& record = samples[i];
            try {
                const AudioClip clip = record.load_clip(dataset_dir);
                const Query q = record.query();
                traces[i] = run_sample(clip, q, policy, backends, configs, wire_log);
            } catch (const std::exception& e) {
                TraceRecord failed;
                failed.sample_id = record.sample_id;
                failed.error = e.what();
                traces[i] = failed;
            }
            if (!traces[i].failed()) {
                const std::string& answer = traces[i].verdict.answer;
                traces[i].correct = !record.gold_answer.empty() &&
                                    answers_match(answer, record.gold_answer);
            } else {
                traces[i].correct = false;
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    return traces;
}

std::string trace_to_line(const TraceRecord& trace) {
    ordered_json j;
    j["sample_id"] = trace.sample_id;
    j["answer"] = trace.verdict.answer;
    j["path"] = path_name(trace.verdict.path);
    ordered_json tools = ordered_json::array();
    for (ToolKind t : trace.verdict.tools_used) tools.push_back(tool_name(t));
    j["tools_used"] = std::move(tools);
    j["initial_answer"] = trace.initial_answer;
    if (trace.gate_decision) {
        ordered_json cues = ordered_json::array();
        for (Cue c : trace.gate_decision->triggered_cues) cues.push_back(cue_name(c));
        j["gate"]["escalate"] = trace.gate_decision->escalate;
        j["gate"]["cues"] = std::move(cues);
    }
    if (trace.plan) {
        j["plan"]["roi_index"] = trace.plan->roi_index;
        ordered_json planned = ordered_json::array();
        for (ToolKind t : trace.plan->tools) planned.push_back(tool_name(t));
        j["plan"]["tools"] = std::move(planned);
        j["plan"]["asr_scope"] = asr_scope_name(trace.plan->asr_scope);
    }
    ordered_json entries = ordered_json::array();
    for (const LedgerEntry& e : trace.ledger.entries()) {
        ordered_json entry;
        entry["stage"] = stage_name(e.stage);
        entry["latency_us"] = e.latency_us;
        entry["cloud_bytes"] = e.cloud_bound_bytes;
        entry["device_bytes"] = e.device_bound_bytes;
        entries.push_back(std::move(entry));
    }
    j["ledger"] = std::move(entries);
    if (trace.correct.has_value()) j["correct"] = *trace.correct;
    if (trace.suppressed_tools > 0) j["suppressed_tools"] = trace.suppressed_tools;
    j["clip_raw_bytes"] = trace.clip_raw_bytes;
    if (!trace.error.empty()) j["error"] = trace.error;
    if (trace.privacy_violation) j["privacy_violation"] = true;
    return j.dump();
}

TraceRecord trace_from_line(const std::string& line) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInputError(std::string("malformed trace line: ") + e.what());
    }
    TraceRecord trace;
    trace.sample_id = j.at("sample_id").get<std::string>();
    trace.verdict.answer = j.at("answer").get<std::string>();
    trace.verdict.path =
        j.at("path").get<std::string>() == "fast" ? Path::Fast : Path::Investigate;
    for (const auto& t : j.at("tools_used")) {
        trace.verdict.tools_used.insert(tool_from_name(t.get<std::string>()));
    }
    trace.initial_answer = j.at("initial_answer").get<std::string>();
    if (j.contains("gate")) {
        GateDecision decision;
        decision.escalate = j.at("gate").at("escalate").get<bool>();
        for (const auto& c : j.at("gate").at("cues")) {
            const std::string name = c.get<std::string>();
            if (name == "hedging") decision.triggered_cues.insert(Cue::Hedging);
            else if (name == "missing_evidence") decision.triggered_cues.insert(Cue::MissingEvidence);
            else if (name == "inconsistency") decision.triggered_cues.insert(Cue::Inconsistency);
            else decision.triggered_cues.insert(Cue::Remote);
        }
        trace.gate_decision = decision;
    }
    if (j.contains("plan")) {
        RefinementPlan plan;
        plan.roi_index = j.at("plan").at("roi_index").get<int>();
        for (const auto& t : j.at("plan").at("tools")) {
            plan.tools.insert(tool_from_name(t.get<std::string>()));
        }
        plan.asr_scope = asr_scope_from_name(j.at("plan").at("asr_scope").get<std::string>());
        trace.plan = plan;
    }
    for (const auto& e : j.at("ledger")) {
        trace.ledger.add(stage_from_name(e.at("stage").get<std::string>()),
                         e.at("latency_us").get<LatencyUs>(),
                         e.at("cloud_bytes").get<std::uint64_t>(),
                         e.at("device_bytes").get<std::uint64_t>());
    }
    if (j.contains("correct")) trace.correct = j.at("correct").get<bool>();
    if (j.contains("suppressed_tools")) trace.suppressed_tools = j.at("suppressed_tools").get<int>();
    trace.clip_raw_bytes = j.at("clip_raw_bytes").get<std::uint64_t>();
    if (j.contains("error")) trace.error = j.at("error").get<std::string>();
    if (j.contains("privacy_violation")) trace.privacy_violation = j.at("privacy_violation").get<bool>();
    return trace;
}

void write_trace_log(const std::string& path, const std::vector<TraceRecord>& traces) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw InvalidInputError("cannot open trace log '" + path + "' for writing");
    }
    for (const TraceRecord& trace : traces) {
        out << trace_to_line(trace) << '\n';
    }
}

std::vector<TraceRecord> read_trace_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInputError("cannot open trace log '" + path + "'");
    }
    std::vector<TraceRecord> traces;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) traces.push_back(trace_from_line(line));
    }
    return traces;
}

}  // namespace cascade
