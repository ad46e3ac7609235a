#include "cascade/backends.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace cascade {

namespace {

std::string to_lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string reason_scope_for(const wire::ReasonRequest& request) {
    const bool relisten = request.e_audio.has_value();
    const bool asr = request.t_text.has_value();
    if (relisten && asr) return "relisten+asr";
    if (relisten) return "relisten";
    if (asr) return "asr";
    return "s0";
}

}  // namespace

ScriptedEdgeBackend::ScriptedEdgeBackend(std::shared_ptr<const ScriptedFixture> fixture)
    : fixture_(std::move(fixture)) {}

BackendInfo ScriptedEdgeBackend::info() const {
    return BackendInfo{"scripted-edge", latency_from_seconds(0.16)};
}

PerceptionResult ScriptedEdgeBackend::infer(const AudioClip& clip,
                                            const std::optional<TimeWindow>& scope,
                                            const std::string& question) {
    (void)question;  // scripted answers are keyed by sample and scope only
    const ScriptedRecord* record = nullptr;
    if (!scope.has_value()) {
        record = &fixture_->get(clip.id, FixtureStage::Stage0, "whole_clip");
    } else {
        record = fixture_->find(clip.id, FixtureStage::Relisten, window_scope_key(*scope));
        if (record == nullptr) {
            record = &fixture_->get(clip.id, FixtureStage::Relisten, "roi");
        }
    }
    PerceptionResult result;
    result.rationale = record->rationale;
    result.answer = record->answer;
    result.measured_latency_us = record->latency_us;
    result.scope = scope;
    return result;
}

ScriptedAsrBackend::ScriptedAsrBackend(std::shared_ptr<const ScriptedFixture> fixture)
    : fixture_(std::move(fixture)) {}

BackendInfo ScriptedAsrBackend::info() const {
    return BackendInfo{"scripted-asr", latency_from_seconds(1.0)};
}

TranscriptResult ScriptedAsrBackend::transcribe(const AudioClip& clip,
                                                const std::optional<TimeWindow>& scope) {
    const std::string scope_key = scope.has_value() ? "roi" : "whole_clip";
    const ScriptedRecord* record = fixture_->find(clip.id, FixtureStage::Asr, scope_key);
    if (record == nullptr) {
        // A fixture may script only one ASR scope; fall back to the other.
        record = &fixture_->get(clip.id, FixtureStage::Asr,
                                scope.has_value() ? "whole_clip" : "roi");
    }
    return TranscriptResult{record->transcript, record->latency_us};
}

ScriptedControllerBackend::ScriptedControllerBackend(
    std::shared_ptr<const ScriptedFixture> fixture)
    : fixture_(std::move(fixture)) {}

BackendInfo ScriptedControllerBackend::info() const {
    return BackendInfo{"scripted-controller", latency_from_seconds(0.6)};
}

wire::GateResponse ScriptedControllerBackend::gate(const wire::GateRequest& request) {
    const ScriptedRecord& record = fixture_->get(request.sample_id, FixtureStage::Gate, "");
    wire::GateResponse response;
    response.escalate = record.escalate.value_or(false);
    response.note = record.note;
    response.latency_s = latency_to_seconds(record.latency_us);
    return response;
}

wire::PlanResponse ScriptedControllerBackend::plan(const wire::PlanRequest& request) {
    const ScriptedRecord& record = fixture_->get(request.sample_id, FixtureStage::Plan, "");
    wire::PlanResponse response;
    response.roi_index = record.roi_index.value_or(0);
    response.focused_query = record.focused_query;
    response.tools = record.tools;
    response.asr_scope = record.asr_scope;
    response.latency_s = latency_to_seconds(record.latency_us);
    return response;
}

wire::ReasonResponse ScriptedControllerBackend::reason(const wire::ReasonRequest& request) {
    const ScriptedRecord& record =
        fixture_->get(request.sample_id, FixtureStage::Reason, reason_scope_for(request));
    wire::ReasonResponse response;
    response.answer = record.answer;
    response.latency_s = latency_to_seconds(record.latency_us);
    return response;
}

bool is_speech_heavy(const std::string& query_text) {
    static const std::array<const char*, 7> kKeywords = {
        "say", "said", "word", "speaker", "password", "mean", "statement",
    };
    const std::string lower = to_lower(query_text);
    return std::any_of(kKeywords.begin(), kKeywords.end(), [&](const char* kw) {
        return lower.find(kw) != std::string::npos;
    });
}

RefinementPlan reference_plan(const SegmentProposal& proposal, const std::string& s0,
                              const Query& q) {
    (void)s0;
    if (proposal.windows.empty()) {
        throw InvalidInputError("reference_plan: empty proposal for '" + proposal.clip_id + "'");
    }
    const RoiWindow* best = &proposal.windows.front();
    bool any_energy_event = false;
    for (const RoiWindow& w : proposal.windows) {
        if (w.source == WindowSource::EnergyEvent) any_energy_event = true;
        const double we = w.energy_score.value_or(0.0);
        const double be = best->energy_score.value_or(0.0);
        if (we > be || (we == be && w.start_s < best->start_s)) {
            best = &w;
        }
    }

    RefinementPlan plan;
    plan.roi_index = best->index;
    plan.focused_query = "Focus on the selected segment: " + q.text;
    if (is_speech_heavy(q.text)) {
        plan.tools.insert(ToolKind::Asr);
        if (any_energy_event) plan.tools.insert(ToolKind::Relisten);
    } else {
        plan.tools.insert(ToolKind::Relisten);
    }
    plan.asr_scope = AsrScope::WholeClip;
    return plan;
}

LocalControllerBackend::LocalControllerBackend(GateConfig gate_config)
    : gate_config_(std::move(gate_config)) {}

BackendInfo LocalControllerBackend::info() const {
    return BackendInfo{"local-controller", 0};
}

wire::GateResponse LocalControllerBackend::gate(const wire::GateRequest& request) {
    Query q;
    q.text = request.query_text;
    q.candidates = request.candidates;
    q.sample_id = request.sample_id;
    const GateDecision decision = evaluate(request.s0, q, request.p0, gate_config_);
    wire::GateResponse response;
    response.escalate = decision.escalate;
    response.note = decision.rationale_note;
    response.latency_s = 0.0;
    return response;
}

wire::PlanResponse LocalControllerBackend::plan(const wire::PlanRequest& request) {
    SegmentProposal proposal;
    proposal.clip_id = request.sample_id;
    proposal.windows = request.windows;
    proposal.clip_duration = 0.0;
    for (const RoiWindow& w : request.windows) {
        proposal.clip_duration = std::max(proposal.clip_duration, w.end_s);
    }
    Query q;
    q.text = request.query_text;
    q.sample_id = request.sample_id;
    const RefinementPlan plan = reference_plan(proposal, request.s0, q);
    wire::PlanResponse response;
    response.roi_index = plan.roi_index;
    response.focused_query = plan.focused_query;
    for (ToolKind t : plan.tools) response.tools.emplace_back(tool_name(t));
    response.asr_scope = asr_scope_name(plan.asr_scope);
    response.latency_s = 0.0;
    return response;
}

wire::ReasonResponse LocalControllerBackend::reason(const wire::ReasonRequest& request) {
    // Degenerate local reasoner: no cloud model available, keep the initial
    // answer.
    wire::ReasonResponse response;
    response.answer = request.p0;
    response.latency_s = 0.0;
    return response;
}

}  // namespace cascade
