#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "cascade/dataset.hpp"
#include "cascade/fixture.hpp"
#include "cascade/orchestrator.hpp"

namespace cascade::test {

// Deterministic splitmix64 for hand-rolled generators.
struct TestRng {
    std::uint64_t state;
    explicit TestRng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    double unit() { return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0); }
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
};

// Options for one fully scripted sample.
struct MiniSample {
    std::string id;
    bool escalate = true;
    std::vector<std::string> plan_tools = {"relisten", "asr"};
    int roi_index = 0;
    std::string asr_scope = "whole_clip";
    std::string p0 = "A";
    std::string reason_answer = "B";
    std::string transcript = "two speakers talking";
    double stage0_latency = 0.2;
    double gate_latency = 0.5;
    double plan_latency = 0.1;
    double relisten_latency = 1.5;
    double asr_latency = 2.0;
    double reason_latency = 4.0;
};

inline void add_mini_sample(ScriptedFixture& fixture, const MiniSample& s) {
    ScriptedRecord stage0;
    stage0.sample_id = s.id;
    stage0.stage = FixtureStage::Stage0;
    stage0.scope = "whole_clip";
    stage0.rationale = "a short scripted rationale about the clip";
    stage0.answer = s.p0;
    stage0.latency_us = latency_from_seconds(s.stage0_latency);
    fixture.add(stage0);

    ScriptedRecord gate;
    gate.sample_id = s.id;
    gate.stage = FixtureStage::Gate;
    gate.escalate = s.escalate;
    gate.latency_us = latency_from_seconds(s.gate_latency);
    fixture.add(gate);

    ScriptedRecord plan;
    plan.sample_id = s.id;
    plan.stage = FixtureStage::Plan;
    plan.roi_index = s.roi_index;
    plan.focused_query = "Focus on the selected segment: scripted question";
    plan.tools = s.plan_tools;
    plan.asr_scope = s.asr_scope;
    plan.latency_us = latency_from_seconds(s.plan_latency);
    fixture.add(plan);

    ScriptedRecord relisten;
    relisten.sample_id = s.id;
    relisten.stage = FixtureStage::Relisten;
    relisten.scope = "roi";
    relisten.rationale = "focused segment observation";
    relisten.answer = s.reason_answer;
    relisten.latency_us = latency_from_seconds(s.relisten_latency);
    fixture.add(relisten);

    ScriptedRecord asr;
    asr.sample_id = s.id;
    asr.stage = FixtureStage::Asr;
    asr.scope = s.asr_scope == "selected_roi" ? "roi" : "whole_clip";
    asr.transcript = s.transcript;
    asr.latency_us = latency_from_seconds(s.asr_latency);
    fixture.add(asr);

    for (const char* scope : {"s0", "relisten", "asr", "relisten+asr"}) {
        ScriptedRecord reason;
        reason.sample_id = s.id;
        reason.stage = FixtureStage::Reason;
        reason.scope = scope;
        reason.answer = s.reason_answer;
        reason.latency_us = latency_from_seconds(s.reason_latency);
        fixture.add(reason);
    }
}

inline DatasetRecord mini_dataset_record(const std::string& id, const std::string& gold,
                                         const std::string& synth = "sr=8000;const:0.5:4.0") {
    DatasetRecord record;
    record.sample_id = id;
    record.synth_spec = synth;
    record.question = "Which event occurs first in the recording?";
    record.candidates = {"A", "B", "C"};
    record.gold_answer = gold;
    return record;
}

inline RunConfigs sim_configs(double fixed_network_latency_s = 0.1) {
    RunConfigs configs;
    configs.mode = RunMode::Sim;
    configs.network.mode = NetworkMode::Scripted;
    configs.network.fixed_latency_s = fixed_network_latency_s;
    configs.network.seed = 7;
    return configs;
}

// Scratch directory under the system temp dir, cleaned per construction.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& name) {
        path_ = std::filesystem::temp_directory_path() / name;
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    out << content;
}

}  // namespace cascade::test
