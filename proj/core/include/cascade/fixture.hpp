#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cascade/domain.hpp"

namespace cascade {

enum class FixtureStage { Stage0, Gate, Plan, Relisten, Asr, Reason };

const char* fixture_stage_name(FixtureStage s);
FixtureStage fixture_stage_from_name(const std::string& name);

// Scope key conventions per stage:
//   stage0   -> "whole_clip"
//   gate     -> ""
//   plan     -> ""
//   relisten -> "roi" (any window) or "window:<start>-<end>" for an exact one
//   asr      -> "whole_clip" | "roi"
//   reason   -> evidence combination: "s0" | "relisten" | "asr" | "relisten+asr"
std::string window_scope_key(const TimeWindow& w);

// One scripted record; which fields are meaningful depends on the stage.
struct ScriptedRecord {
    std::string sample_id;
    FixtureStage stage = FixtureStage::Stage0;
    std::string scope;
    LatencyUs latency_us = 0;

    std::string rationale;               // stage0, relisten
    std::string answer;                  // stage0, relisten, reason
    std::optional<bool> correct;         // stage0, reason
    std::optional<bool> escalate;        // gate
    std::string note;                    // gate
    std::optional<int> roi_index;        // plan
    std::string focused_query;           // plan
    std::vector<std::string> tools;      // plan
    std::string asr_scope;               // plan
    std::string transcript;              // asr
};

// Deterministic per-sample scripts for the three external intelligences.
// Read-only after load; safe to share across concurrent pipelines.
class ScriptedFixture {
public:
    void add(ScriptedRecord record);

    const ScriptedRecord* find(const std::string& sample_id, FixtureStage stage,
                               const std::string& scope) const;
    // Throws FixtureError naming sample and stage on a miss.
    const ScriptedRecord& get(const std::string& sample_id, FixtureStage stage,
                              const std::string& scope) const;

    bool has_sample(const std::string& sample_id) const;
    std::vector<std::string> sample_ids() const;
    std::size_t size() const { return records_.size(); }

    // Every sample must carry a stage-0 record, gate + plan records, tool
    // records, and a reason record for every evidence combination reachable
    // from its plan's tool set. Called by the file loader.
    void validate_complete() const;

private:
    static std::string key(const std::string& sample_id, FixtureStage stage,
                           const std::string& scope);
    std::map<std::string, ScriptedRecord> records_;
};

// Loads a line-delimited fixture file. Strict: unknown fields, missing
// required fields, duplicate keys and incomplete samples are load errors
// with line context.
ScriptedFixture load_fixture(const std::string& path);

// Serializes one record to its fixture line (used by fixture tooling).
std::string fixture_record_line(const ScriptedRecord& record);

}  // namespace cascade
