// Microbenchmarks for the hot paths: segmentation DSP, network-model draws,
// redaction, wire encoding and the full scripted per-sample pipeline.

#include <memory>

#include <benchmark/benchmark.h>

#include "cascade/backends.hpp"
#include "cascade/netcost.hpp"
#include "cascade/orchestrator.hpp"
#include "cascade/privacy.hpp"
#include "cascade/segmenter.hpp"
#include "cascade/synth.hpp"
#include "cascade/wire.hpp"

namespace {

using namespace cascade;

AudioClip bench_clip(double seconds) {
    char spec[96];
    std::snprintf(spec, sizeof(spec), "sr=16000;silence:%.1f;burst:0.8:1.0;silence:%.1f",
                  seconds * 0.4, seconds * 0.6 - 1.0);
    return synthesize_clip("bench", spec);
}

void BM_FrameEnergies(benchmark::State& state) {
    const AudioClip clip = bench_clip(static_cast<double>(state.range(0)));
    const SegmenterConfig config;
    for (auto _ : state) {
        benchmark::DoNotOptimize(frame_energies(clip, config));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(clip.samples.size()));
}
BENCHMARK(BM_FrameEnergies)->Arg(10)->Arg(60)->Arg(300);

void BM_Propose(benchmark::State& state) {
    const AudioClip clip = bench_clip(static_cast<double>(state.range(0)));
    const SegmenterConfig config;
    for (auto _ : state) {
        benchmark::DoNotOptimize(propose(clip, config));
    }
}
BENCHMARK(BM_Propose)->Arg(10)->Arg(60);

void BM_SampleRtt(benchmark::State& state) {
    NetworkModel model;
    model.mode = NetworkMode::Lognormal;
    RttRng rng(7, "bench");
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_rtt(model, rng));
    }
}
BENCHMARK(BM_SampleRtt);

void BM_Redact(benchmark::State& state) {
    const RedactionPolicy policy;
    const std::string text =
        "the customer said call me at 5551234567 or write to leak@example.com and then "
        "repeated the order twice before leaving through the side door";
    for (auto _ : state) {
        benchmark::DoNotOptimize(redact(text, policy));
    }
}
BENCHMARK(BM_Redact);

void BM_WireEncodeInspect(benchmark::State& state) {
    wire::ReasonRequest request;
    request.sample_id = "bench";
    request.s0 = "a rationale of plausible length describing the acoustic scene in detail";
    request.p0 = "Answer";
    request.t_text = std::string(512, 't');
    request.query_text = "what happened in the clip?";
    request.candidates = {"A", "B", "C", "D"};
    for (auto _ : state) {
        const std::string payload = wire::encode(request);
        benchmark::DoNotOptimize(inspect_cloud_payload(payload));
    }
}
BENCHMARK(BM_WireEncodeInspect);

void BM_RunSampleScripted(benchmark::State& state) {
    auto fixture = std::make_shared<ScriptedFixture>();
    auto add = [&fixture](const char* id) {
        ScriptedRecord stage0{id, FixtureStage::Stage0, "whole_clip", 155000};
        stage0.rationale = "hedged rationale, possibly two events overlapping";
        stage0.answer = "A";
        fixture->add(stage0);
        ScriptedRecord gate{id, FixtureStage::Gate, "", 600000};
        gate.escalate = true;
        fixture->add(gate);
        ScriptedRecord plan{id, FixtureStage::Plan, "", 50000};
        plan.roi_index = 0;
        plan.focused_query = "focus";
        plan.tools = {"relisten", "asr"};
        plan.asr_scope = "whole_clip";
        fixture->add(plan);
        ScriptedRecord relisten{id, FixtureStage::Relisten, "roi", 2100000};
        relisten.rationale = "focused";
        relisten.answer = "B";
        fixture->add(relisten);
        ScriptedRecord asr{id, FixtureStage::Asr, "whole_clip", 2600000};
        asr.transcript = "two speakers discuss the order";
        fixture->add(asr);
        for (const char* scope : {"s0", "relisten", "asr", "relisten+asr"}) {
            ScriptedRecord reason{id, FixtureStage::Reason, scope, 6800000};
            reason.answer = "B";
            fixture->add(reason);
        }
    };
    add("bench");

    ScriptedEdgeBackend edge(fixture);
    ScriptedAsrBackend asr(fixture);
    ScriptedControllerBackend controller(fixture);
    Backends backends{&edge, &asr, &controller};
    RunConfigs configs;
    configs.mode = RunMode::Sim;
    configs.network.mode = NetworkMode::Scripted;
    configs.network.fixed_latency_s = 0.125;

    const AudioClip clip = bench_clip(10.0);
    Query q;
    q.text = "which event first?";
    q.candidates = {"A", "B"};
    q.sample_id = "bench";
    const Policy policy = policy_from_name("adaptive_asr");

    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sample(clip, q, policy, backends, configs));
    }
}
BENCHMARK(BM_RunSampleScripted);

}  // namespace

BENCHMARK_MAIN();
