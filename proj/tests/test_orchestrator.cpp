#include <gtest/gtest.h>

#include <memory>

#include "cascade/backends.hpp"
#include "cascade/orchestrator.hpp"
#include "cascade/synth.hpp"
#include "helpers.hpp"

namespace cascade {
namespace {

using test::MiniSample;

struct Rig {
    std::shared_ptr<const ScriptedFixture> fixture;
    std::unique_ptr<ScriptedEdgeBackend> edge;
    std::unique_ptr<ScriptedAsrBackend> asr;
    std::unique_ptr<ScriptedControllerBackend> controller;
    RunConfigs configs = test::sim_configs();

    explicit Rig(std::vector<MiniSample> samples) {
        auto f = std::make_shared<ScriptedFixture>();
        for (const MiniSample& s : samples) test::add_mini_sample(*f, s);
        fixture = f;
        edge = std::make_unique<ScriptedEdgeBackend>(fixture);
        asr = std::make_unique<ScriptedAsrBackend>(fixture);
        controller = std::make_unique<ScriptedControllerBackend>(fixture);
    }

    Backends backends() const { return Backends{edge.get(), asr.get(), controller.get()}; }
};

std::vector<Stage> stages_of(const TraceRecord& trace) {
    std::vector<Stage> stages;
    for (const LedgerEntry& e : trace.ledger.entries()) stages.push_back(e.stage);
    return stages;
}

AudioClip clip_for(const std::string& id, double duration = 4.0) {
    char spec[64];
    std::snprintf(spec, sizeof(spec), "sr=8000;const:0.5:%.3f", duration);
    return synthesize_clip(id, spec);
}

Query query_for(const std::string& id) {
    Query q;
    q.text = "Which event occurs first in the recording?";
    q.candidates = {"A", "B", "C"};
    q.sample_id = id;
    return q;
}

TEST(RunSample, BaselineIsFastPathWithEdgeOnly) {
    MiniSample s;
    s.id = "s1";
    Rig rig({s});
    const TraceRecord trace = run_sample(clip_for("s1"), query_for("s1"),
                                         policy_from_name("baseline"), rig.backends(),
                                         rig.configs);
    EXPECT_EQ(trace.verdict.path, Path::Fast);
    EXPECT_EQ(trace.verdict.answer, "A");
    EXPECT_TRUE(trace.verdict.tools_used.empty());
    EXPECT_EQ(stages_of(trace), std::vector<Stage>{Stage::EdgePerception});
    EXPECT_EQ(trace.ledger.total_us(), latency_from_seconds(0.2));
    EXPECT_FALSE(trace.gate_decision.has_value());
    EXPECT_FALSE(trace.plan.has_value());
}

TEST(RunSample, AdaptiveFastPathKeepsInitialAnswer) {
    MiniSample s;
    s.id = "s1";
    s.escalate = false;
    Rig rig({s});
    const TraceRecord trace = run_sample(clip_for("s1"), query_for("s1"),
                                         policy_from_name("adaptive_asr"), rig.backends(),
                                         rig.configs);
    EXPECT_EQ(trace.verdict.path, Path::Fast);
    EXPECT_EQ(trace.verdict.answer, "A");
    EXPECT_TRUE(trace.verdict.tools_used.empty());
    const std::vector<Stage> expected = {Stage::EdgePerception, Stage::Network,
                                         Stage::CloudGate};
    EXPECT_EQ(stages_of(trace), expected);
    // edge 0.2 + network 0.1 + gate 0.5
    EXPECT_EQ(trace.ledger.total_us(), 800000);
    ASSERT_TRUE(trace.gate_decision.has_value());
    EXPECT_FALSE(trace.gate_decision->escalate);
    EXPECT_FALSE(trace.plan.has_value());
}

TEST(RunSample, EscalatedPipelineChargesStagesInOrder) {
    MiniSample s;
    s.id = "s1";
    Rig rig({s});
    const TraceRecord trace = run_sample(clip_for("s1"), query_for("s1"),
                                         policy_from_name("adaptive_asr"), rig.backends(),
                                         rig.configs);
    EXPECT_EQ(trace.verdict.path, Path::Investigate);
    EXPECT_EQ(trace.verdict.answer, "B");
    EXPECT_EQ(trace.verdict.tools_used.size(), 2u);
    const std::vector<Stage> expected = {Stage::EdgePerception, Stage::Network,
                                         Stage::CloudGate,      Stage::ToolRelisten,
                                         Stage::ToolAsr,        Stage::Network,
                                         Stage::CloudReason};
    EXPECT_EQ(stages_of(trace), expected);
    // Plan latency folds into cloud_gate: 0.5 + 0.1 = 0.6.
    EXPECT_EQ(trace.ledger.stage_total_us(Stage::CloudGate), 600000);
    EXPECT_EQ(trace.ledger.stage_total_us(Stage::CloudPlan), 0);
    // edge 0.2 + net 0.1 + gate+plan 0.6 + relisten 1.5 + asr 2.0 + net 0.1 + reason 4.0
    EXPECT_EQ(trace.ledger.total_us(), latency_from_seconds(8.5));
    EXPECT_GT(trace.ledger.cloud_bound_bytes(), 0u);
    EXPECT_GT(trace.ledger.device_bound_bytes(), 0u);
}

TEST(RunSample, AlwaysGatingSkipsTheGateCall) {
    MiniSample s;
    s.id = "s1";
    Rig rig({s});
    const TraceRecord trace = run_sample(clip_for("s1"), query_for("s1"),
                                         policy_from_name("always_on_asr"), rig.backends(),
                                         rig.configs);
    EXPECT_EQ(trace.verdict.path, Path::Investigate);
    EXPECT_FALSE(trace.gate_decision.has_value());
    EXPECT_FALSE(trace.ledger.has_stage(Stage::CloudGate));
    // The plan gets its own round trip and its own stage.
    EXPECT_EQ(trace.ledger.stage_total_us(Stage::CloudPlan), latency_from_seconds(0.1));
    const std::vector<Stage> expected = {Stage::EdgePerception, Stage::Network,
                                         Stage::CloudPlan,      Stage::ToolRelisten,
                                         Stage::ToolAsr,        Stage::Network,
                                         Stage::CloudReason};
    EXPECT_EQ(stages_of(trace), expected);
}

TEST(RunSample, DescribeThenReasonRunsNoToolsAndNoPlanner) {
    MiniSample s;
    s.id = "s1";
    Rig rig({s});
    const TraceRecord trace = run_sample(clip_for("s1"), query_for("s1"),
                                         policy_from_name("hybrid_describe_reason"),
                                         rig.backends(), rig.configs);
    EXPECT_EQ(trace.verdict.path, Path::Investigate);
    EXPECT_TRUE(trace.verdict.tools_used.empty());
    EXPECT_FALSE(trace.plan.has_value());
    const std::vector<Stage> expected = {Stage::EdgePerception, Stage::Network,
                                         Stage::CloudReason};
    EXPECT_EQ(stages_of(trace), expected);
    // edge 0.2 + network 0.1 + reason 4.0
    EXPECT_EQ(trace.ledger.total_us(), latency_from_seconds(4.3));
}

TEST(RunSample, PolicyIntersectionSuppressesForbiddenTools) {
    MiniSample s;
    s.id = "s1";
    s.plan_tools = {"asr"};
    Rig rig({s});
    const TraceRecord trace = run_sample(clip_for("s1"), query_for("s1"),
                                         policy_from_name("adaptive_relisten"),
                                         rig.backends(), rig.configs);
    EXPECT_EQ(trace.verdict.path, Path::Investigate);
    EXPECT_TRUE(trace.verdict.tools_used.empty());
    EXPECT_EQ(trace.suppressed_tools, 1);
    EXPECT_FALSE(trace.ledger.has_stage(Stage::ToolAsr));
    EXPECT_FALSE(trace.ledger.has_stage(Stage::ToolRelisten));
    // Reason still runs, over s0 alone.
    EXPECT_TRUE(trace.ledger.has_stage(Stage::CloudReason));
}

TEST(RunSample, RoiIndexOutOfRangeIsAProtocolErrorTrace) {
    MiniSample s;
    s.id = "s1";
    s.roi_index = 9;  // proposals for a 4 s constant clip have four windows
    Rig rig({s});
    const TraceRecord trace = run_sample(clip_for("s1"), query_for("s1"),
                                         policy_from_name("adaptive_asr"), rig.backends(),
                                         rig.configs);
    EXPECT_TRUE(trace.failed());
    EXPECT_NE(trace.error.find("roi_index"), std::string::npos);
    // Partial ledger: everything up to and including the failed plan call.
    EXPECT_TRUE(trace.ledger.has_stage(Stage::EdgePerception));
    EXPECT_TRUE(trace.ledger.has_stage(Stage::CloudGate));
    EXPECT_FALSE(trace.ledger.has_stage(Stage::CloudReason));
}

TEST(RunSample, SelectedRoiScopeGoesToTheAsrBackend) {
    MiniSample s;
    s.id = "s1";
    s.plan_tools = {"asr"};
    s.asr_scope = "selected_roi";
    Rig rig({s});
    const TraceRecord trace = run_sample(clip_for("s1", 10.0), query_for("s1"),
                                         policy_from_name("adaptive_asr"), rig.backends(),
                                         rig.configs);
    EXPECT_EQ(trace.verdict.path, Path::Investigate);
    EXPECT_TRUE(trace.ledger.has_stage(Stage::ToolAsr));
    ASSERT_TRUE(trace.plan.has_value());
    EXPECT_EQ(trace.plan->asr_scope, AsrScope::SelectedRoi);
}

TEST(RunSample, PrivacyViolationAbortsTheSample) {
    MiniSample s;
    s.id = "s1";
    Rig rig({s});
    rig.configs.inspection.blob_threshold_bytes = 8;  // windows array trips it
    const TraceRecord trace = run_sample(clip_for("s1"), query_for("s1"),
                                         policy_from_name("adaptive_asr"), rig.backends(),
                                         rig.configs);
    EXPECT_TRUE(trace.failed());
    EXPECT_TRUE(trace.privacy_violation);
}

TEST(RunSample, FastPathPurityHoldsAcrossPolicies) {
    for (const std::string& name : all_policy_names()) {
        MiniSample s;
        s.id = "s1";
        s.escalate = false;
        Rig rig({s});
        const TraceRecord trace = run_sample(clip_for("s1"), query_for("s1"),
                                             policy_from_name(name), rig.backends(),
                                             rig.configs);
        if (trace.verdict.path == Path::Fast) {
            EXPECT_TRUE(trace.verdict.tools_used.empty());
            EXPECT_EQ(trace.verdict.answer, "A");
            EXPECT_FALSE(trace.ledger.has_stage(Stage::ToolRelisten));
            EXPECT_FALSE(trace.ledger.has_stage(Stage::ToolAsr));
            EXPECT_FALSE(trace.ledger.has_stage(Stage::CloudReason));
            EXPECT_FALSE(trace.ledger.has_stage(Stage::CloudPlan));
        }
    }
}

TEST(RunSample, LiveModeMeasuresCallsInsteadOfCharingModeledRtt) {
    MiniSample s;
    s.id = "s1";
    Rig rig({s});
    rig.configs.mode = RunMode::Live;
    const TraceRecord trace = run_sample(clip_for("s1"), query_for("s1"),
                                         policy_from_name("adaptive_asr"), rig.backends(),
                                         rig.configs);
    ASSERT_FALSE(trace.failed()) << trace.error;
    // Transport time is inside the measured call; network entries only
    // account bytes at unlimited bandwidth.
    EXPECT_EQ(trace.ledger.stage_total_us(Stage::Network), 0);
    EXPECT_GT(trace.ledger.cloud_bound_bytes(), 0u);
    EXPECT_GT(trace.ledger.device_bound_bytes(), 0u);
    EXPECT_TRUE(trace.ledger.has_stage(Stage::CloudGate));
    EXPECT_TRUE(trace.ledger.has_stage(Stage::CloudReason));
}

TEST(RunDataset, FailuresAreContainedPerSample) {
    MiniSample ok;
    ok.id = "s1";
    Rig rig({ok});
    std::vector<DatasetRecord> dataset = {
        test::mini_dataset_record("s1", "B"),
        test::mini_dataset_record("s2", "A"),  // no fixture records at all
    };
    const auto traces = run_dataset(dataset, policy_from_name("adaptive_asr"),
                                    rig.backends(), rig.configs, 1);
    ASSERT_EQ(traces.size(), 2u);
    EXPECT_FALSE(traces[0].failed());
    EXPECT_EQ(traces[0].correct, true);
    EXPECT_TRUE(traces[1].failed());
    EXPECT_EQ(traces[1].correct, false);
    EXPECT_NE(traces[1].error.find("s2"), std::string::npos);
}

TEST(RunDataset, OutputOrderAndContentIndependentOfWorkers) {
    std::vector<MiniSample> samples;
    std::vector<DatasetRecord> dataset;
    for (int i = 0; i < 24; ++i) {
        MiniSample s;
        s.id = "s" + std::to_string(i);
        s.escalate = i % 3 != 0;
        s.plan_tools = (i % 2 == 0) ? std::vector<std::string>{"relisten"}
                                    : std::vector<std::string>{"relisten", "asr"};
        s.reason_latency = 1.0 + 0.25 * i;
        samples.push_back(s);
        dataset.push_back(test::mini_dataset_record(s.id, "B"));
    }
    Rig rig(samples);
    const auto one = run_dataset(dataset, policy_from_name("adaptive_asr"), rig.backends(),
                                 rig.configs, 1);
    const auto eight = run_dataset(dataset, policy_from_name("adaptive_asr"), rig.backends(),
                                   rig.configs, 8);
    ASSERT_EQ(one.size(), eight.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        EXPECT_EQ(trace_to_line(one[i]), trace_to_line(eight[i]));
        EXPECT_EQ(one[i].sample_id, dataset[i].sample_id);
    }
    EXPECT_THROW(run_dataset({}, policy_from_name("baseline"), rig.backends(), rig.configs, 1),
                 InvalidInputError);
}

TEST(RunDataset, WireLogSeesEveryCloudMessage) {
    MiniSample s;
    s.id = "s1";
    Rig rig({s});
    WireLog log;
    const std::vector<DatasetRecord> dataset = {test::mini_dataset_record("s1", "B")};
    run_dataset(dataset, policy_from_name("adaptive_asr"), rig.backends(), rig.configs, 1,
                &log);
    // gate + plan + reason
    EXPECT_EQ(log.lines().size(), 3u);
    for (const std::string& line : log.lines()) {
        EXPECT_TRUE(inspect_cloud_payload(line).ok);
    }
}

TEST(Policy, NamesRoundTripAndInvariantsHold) {
    for (const std::string& name : all_policy_names()) {
        const Policy policy = policy_from_name(name);
        EXPECT_EQ(policy.name, name);
        if (name == "baseline") {
            EXPECT_EQ(policy.gating, GatingMode::None);
            EXPECT_TRUE(policy.tools_allowed.empty());
        }
        if (name == "always_on_asr") {
            EXPECT_EQ(policy.gating, GatingMode::Always);
        }
    }
    EXPECT_THROW(policy_from_name("nope"), InvalidInputError);
}

TEST(TraceLog, LineRoundTripIsLossless) {
    MiniSample s;
    s.id = "s1";
    Rig rig({s});
    TraceRecord trace = run_sample(clip_for("s1"), query_for("s1"),
                                   policy_from_name("adaptive_asr"), rig.backends(),
                                   rig.configs);
    trace.correct = false;
    const std::string line = trace_to_line(trace);
    EXPECT_EQ(trace_to_line(trace_from_line(line)), line);
}

TEST(TraceLog, FileRoundTrip) {
    test::ScratchDir dir("cascade-tracelog");
    MiniSample s;
    s.id = "s1";
    Rig rig({s});
    const std::vector<DatasetRecord> dataset = {test::mini_dataset_record("s1", "B")};
    const auto traces = run_dataset(dataset, policy_from_name("baseline"), rig.backends(),
                                    rig.configs, 1);
    const std::string path = dir.file("traces.jsonl");
    write_trace_log(path, traces);
    const auto loaded = read_trace_log(path);
    ASSERT_EQ(loaded.size(), traces.size());
    EXPECT_EQ(trace_to_line(loaded[0]), trace_to_line(traces[0]));
}

}  // namespace
}  // namespace cascade
