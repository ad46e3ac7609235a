#pragma once

#include <memory>
#include <optional>
#include <string>

#include "cascade/domain.hpp"
#include "cascade/fixture.hpp"
#include "cascade/gate.hpp"
#include "cascade/wire.hpp"

namespace cascade {

struct BackendInfo {
    std::string name;
    LatencyUs nominal_latency_us = 0;
};

// On-device Audio-LLM surface. `scope` selects a window for targeted
// re-listening; nullopt means the whole clip.
class EdgePerceptionBackend {
public:
    virtual ~EdgePerceptionBackend() = default;
    virtual BackendInfo info() const = 0;
    virtual PerceptionResult infer(const AudioClip& clip,
                                   const std::optional<TimeWindow>& scope,
                                   const std::string& question) = 0;
};

struct TranscriptResult {
    std::string text;
    LatencyUs latency_us = 0;
};

// On-device ASR surface.
class AsrBackend {
public:
    virtual ~AsrBackend() = default;
    virtual BackendInfo info() const = 0;
    virtual TranscriptResult transcribe(const AudioClip& clip,
                                        const std::optional<TimeWindow>& scope) = 0;
};

// Cloud controller surface: gate, plan, reason. All calls speak the wire
// message types so every implementation sits behind the same privacy and
// byte-accounting boundary.
class CloudControllerBackend {
public:
    virtual ~CloudControllerBackend() = default;
    virtual BackendInfo info() const = 0;
    virtual wire::GateResponse gate(const wire::GateRequest& request) = 0;
    virtual wire::PlanResponse plan(const wire::PlanRequest& request) = 0;
    virtual wire::ReasonResponse reason(const wire::ReasonRequest& request) = 0;
};

// Fixture-driven edge model. Lookup key is (clip id, scope, stage); relisten
// falls back from the exact window key to the generic "roi" record.
class ScriptedEdgeBackend : public EdgePerceptionBackend {
public:
    explicit ScriptedEdgeBackend(std::shared_ptr<const ScriptedFixture> fixture);
    BackendInfo info() const override;
    PerceptionResult infer(const AudioClip& clip, const std::optional<TimeWindow>& scope,
                           const std::string& question) override;

private:
    std::shared_ptr<const ScriptedFixture> fixture_;
};

class ScriptedAsrBackend : public AsrBackend {
public:
    explicit ScriptedAsrBackend(std::shared_ptr<const ScriptedFixture> fixture);
    BackendInfo info() const override;
    TranscriptResult transcribe(const AudioClip& clip,
                                const std::optional<TimeWindow>& scope) override;

private:
    std::shared_ptr<const ScriptedFixture> fixture_;
};

class ScriptedControllerBackend : public CloudControllerBackend {
public:
    explicit ScriptedControllerBackend(std::shared_ptr<const ScriptedFixture> fixture);
    BackendInfo info() const override;
    wire::GateResponse gate(const wire::GateRequest& request) override;
    wire::PlanResponse plan(const wire::PlanRequest& request) override;
    wire::ReasonResponse reason(const wire::ReasonRequest& request) override;

private:
    std::shared_ptr<const ScriptedFixture> fixture_;
};

// Deterministic local fallback planner: picks the highest-energy window
// (ties by earliest start, fixed windows count as zero energy), chooses
// {asr} plus {relisten when any energy event exists} for speech-heavy
// queries and {relisten} otherwise, and prefixes the query to focus it.
RefinementPlan reference_plan(const SegmentProposal& proposal, const std::string& s0,
                              const Query& q);

bool is_speech_heavy(const std::string& query_text);

// Fully local controller: heuristic gate + reference planner + an identity
// reasoner that returns p0. Lets the pipeline run with no cloud at all.
class LocalControllerBackend : public CloudControllerBackend {
public:
    explicit LocalControllerBackend(GateConfig gate_config = {});
    BackendInfo info() const override;
    wire::GateResponse gate(const wire::GateRequest& request) override;
    wire::PlanResponse plan(const wire::PlanRequest& request) override;
    wire::ReasonResponse reason(const wire::ReasonRequest& request) override;

private:
    GateConfig gate_config_;
};

}  // namespace cascade
