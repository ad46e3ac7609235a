#include "cascade/fixture.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace cascade {

using ordered_json = nlohmann::ordered_json;

namespace {

struct StageFieldSpec {
    std::set<std::string> allowed;
    std::set<std::string> required;
};

const std::map<std::string, StageFieldSpec>& stage_fields() {
    static const std::map<std::string, StageFieldSpec> kFields = {
        {"stage0",
         {{"v", "sample_id", "stage", "scope", "rationale", "answer", "correct", "latency_s"},
          {"rationale", "answer", "latency_s"}}},
        {"gate",
         {{"v", "sample_id", "stage", "scope", "escalate", "note", "latency_s"},
          {"escalate", "latency_s"}}},
        {"plan",
         {{"v", "sample_id", "stage", "scope", "roi_index", "focused_query", "tools",
           "asr_scope", "latency_s"},
          {"roi_index", "focused_query", "tools", "asr_scope", "latency_s"}}},
        {"relisten",
         {{"v", "sample_id", "stage", "scope", "rationale", "answer", "correct", "latency_s"},
          {"scope", "rationale", "answer", "latency_s"}}},
        {"asr",
         {{"v", "sample_id", "stage", "scope", "transcript", "latency_s"},
          {"scope", "transcript", "latency_s"}}},
        {"reason",
         {{"v", "sample_id", "stage", "scope", "answer", "correct", "latency_s"},
          {"scope", "answer", "latency_s"}}},
    };
    return kFields;
}

const std::set<std::string>& reason_scopes() {
    static const std::set<std::string> kScopes = {"s0", "relisten", "asr", "relisten+asr"};
    return kScopes;
}

std::string reason_scope_for_tools(bool relisten, bool asr) {
    if (relisten && asr) return "relisten+asr";
    if (relisten) return "relisten";
    if (asr) return "asr";
    return "s0";
}

}  // namespace

const char* fixture_stage_name(FixtureStage s) {
    switch (s) {
        case FixtureStage::Stage0: return "stage0";
        case FixtureStage::Gate: return "gate";
        case FixtureStage::Plan: return "plan";
        case FixtureStage::Relisten: return "relisten";
        case FixtureStage::Asr: return "asr";
        case FixtureStage::Reason: return "reason";
    }
    return "unknown";
}

FixtureStage fixture_stage_from_name(const std::string& name) {
    if (name == "stage0") return FixtureStage::Stage0;
    if (name == "gate") return FixtureStage::Gate;
    if (name == "plan") return FixtureStage::Plan;
    if (name == "relisten") return FixtureStage::Relisten;
    if (name == "asr") return FixtureStage::Asr;
    if (name == "reason") return FixtureStage::Reason;
    throw FixtureError("unknown fixture stage '" + name + "'");
}

std::string window_scope_key(const TimeWindow& w) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "window:%.3f-%.3f", w.start_s, w.end_s);
    return buf;
}

std::string ScriptedFixture::key(const std::string& sample_id, FixtureStage stage,
                                 const std::string& scope) {
    return sample_id + '\x1f' + fixture_stage_name(stage) + '\x1f' + scope;
}

void ScriptedFixture::add(ScriptedRecord record) {
    const std::string k = key(record.sample_id, record.stage, record.scope);
    if (records_.count(k) > 0) {
        throw FixtureError("duplicate fixture record: sample '" + record.sample_id +
                           "' stage '" + fixture_stage_name(record.stage) + "' scope '" +
                           record.scope + "'");
    }
    records_.emplace(k, std::move(record));
}

const ScriptedRecord* ScriptedFixture::find(const std::string& sample_id, FixtureStage stage,
                                            const std::string& scope) const {
    const auto it = records_.find(key(sample_id, stage, scope));
    return it == records_.end() ? nullptr : &it->second;
}

const ScriptedRecord& ScriptedFixture::get(const std::string& sample_id, FixtureStage stage,
                                           const std::string& scope) const {
    const ScriptedRecord* record = find(sample_id, stage, scope);
    if (record == nullptr) {
        throw FixtureError("fixture miss: sample '" + sample_id + "' stage '" +
                           fixture_stage_name(stage) + "' scope '" + scope + "'");
    }
    return *record;
}

bool ScriptedFixture::has_sample(const std::string& sample_id) const {
    return find(sample_id, FixtureStage::Stage0, "whole_clip") != nullptr;
}

std::vector<std::string> ScriptedFixture::sample_ids() const {
    std::vector<std::string> ids;
    std::string last;
    for (const auto& [k, record] : records_) {
        if (record.sample_id != last) {
            ids.push_back(record.sample_id);
            last = record.sample_id;
        }
    }
    return ids;
}

void ScriptedFixture::validate_complete() const {
    for (const std::string& id : sample_ids()) {
        if (!has_sample(id)) {
            throw FixtureError("fixture: sample '" + id + "' has no stage-0 record");
        }
        const ScriptedRecord* plan = find(id, FixtureStage::Plan, "");
        if (find(id, FixtureStage::Gate, "") == nullptr || plan == nullptr) {
            throw FixtureError("fixture: sample '" + id +
                               "' is missing investigate-stage records (gate/plan)");
        }
        bool plans_relisten = false;
        bool plans_asr = false;
        for (const std::string& t : plan->tools) {
            if (t == "relisten") plans_relisten = true;
            if (t == "asr") plans_asr = true;
        }
        if (plans_relisten && find(id, FixtureStage::Relisten, "roi") == nullptr) {
            throw FixtureError("fixture: sample '" + id + "' plans relisten but has no record");
        }
        if (plans_asr && find(id, FixtureStage::Asr, "whole_clip") == nullptr &&
            find(id, FixtureStage::Asr, "roi") == nullptr) {
            throw FixtureError("fixture: sample '" + id + "' plans asr but has no record");
        }
        // Policy intersection can strip any subset of the planned tools, so
        // every reachable evidence combination needs a reason record.
        for (int use_relisten = 0; use_relisten <= (plans_relisten ? 1 : 0); ++use_relisten) {
            for (int use_asr = 0; use_asr <= (plans_asr ? 1 : 0); ++use_asr) {
                const std::string scope =
                    reason_scope_for_tools(use_relisten != 0, use_asr != 0);
                if (find(id, FixtureStage::Reason, scope) == nullptr) {
                    throw FixtureError("fixture: sample '" + id +
                                       "' is missing reason record for evidence '" + scope +
                                       "'");
                }
            }
        }
    }
}

ScriptedFixture load_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw FixtureError("cannot open fixture file '" + path + "'");
    }
    ScriptedFixture fixture;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string context = path + ":" + std::to_string(line_no);
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw FixtureError(context + ": malformed record: " + e.what());
        }
        if (!j.is_object()) {
            throw FixtureError(context + ": record is not an object");
        }
        try {
            const std::string stage_str = j.at("stage").get<std::string>();
            const auto spec_it = stage_fields().find(stage_str);
            if (spec_it == stage_fields().end()) {
                throw FixtureError("unknown stage '" + stage_str + "'");
            }
            for (const auto& item : j.items()) {
                if (spec_it->second.allowed.count(item.key()) == 0) {
                    throw FixtureError("unknown field '" + item.key() + "' for stage '" +
                                       stage_str + "'");
                }
            }
            for (const std::string& field : spec_it->second.required) {
                if (!j.contains(field)) {
                    throw FixtureError("missing field '" + field + "' for stage '" +
                                       stage_str + "'");
                }
            }

            ScriptedRecord record;
            record.sample_id = j.at("sample_id").get<std::string>();
            record.stage = fixture_stage_from_name(stage_str);
            record.scope = j.value("scope", record.stage == FixtureStage::Stage0
                                                ? std::string("whole_clip")
                                                : std::string(""));
            record.latency_us = latency_from_seconds(j.at("latency_s").get<double>());
            if (record.latency_us < 0) {
                throw FixtureError("negative latency");
            }
            if (j.contains("rationale")) record.rationale = j.at("rationale").get<std::string>();
            if (j.contains("answer")) record.answer = j.at("answer").get<std::string>();
            if (j.contains("correct")) record.correct = j.at("correct").get<bool>();
            if (j.contains("escalate")) record.escalate = j.at("escalate").get<bool>();
            if (j.contains("note")) record.note = j.at("note").get<std::string>();
            if (j.contains("roi_index")) record.roi_index = j.at("roi_index").get<int>();
            if (j.contains("focused_query"))
                record.focused_query = j.at("focused_query").get<std::string>();
            if (j.contains("tools"))
                record.tools = j.at("tools").get<std::vector<std::string>>();
            if (j.contains("asr_scope")) record.asr_scope = j.at("asr_scope").get<std::string>();
            if (j.contains("transcript"))
                record.transcript = j.at("transcript").get<std::string>();

            if (record.stage == FixtureStage::Reason &&
                reason_scopes().count(record.scope) == 0) {
                throw FixtureError("bad reason scope '" + record.scope + "'");
            }
            fixture.add(std::move(record));
        } catch (const nlohmann::json::exception& e) {
            throw FixtureError(context + ": " + e.what());
        } catch (const FixtureError& e) {
            throw FixtureError(context + ": " + e.what());
        }
    }
    fixture.validate_complete();
    return fixture;
}

std::string fixture_record_line(const ScriptedRecord& record) {
    ordered_json j;
    j["v"] = 1;
    j["sample_id"] = record.sample_id;
    j["stage"] = fixture_stage_name(record.stage);
    switch (record.stage) {
        case FixtureStage::Stage0:
            j["rationale"] = record.rationale;
            j["answer"] = record.answer;
            if (record.correct) j["correct"] = *record.correct;
            break;
        case FixtureStage::Gate:
            j["escalate"] = record.escalate.value_or(false);
            if (!record.note.empty()) j["note"] = record.note;
            break;
        case FixtureStage::Plan:
            j["roi_index"] = record.roi_index.value_or(0);
            j["focused_query"] = record.focused_query;
            j["tools"] = record.tools;
            j["asr_scope"] = record.asr_scope;
            break;
        case FixtureStage::Relisten:
            j["scope"] = record.scope;
            j["rationale"] = record.rationale;
            j["answer"] = record.answer;
            break;
        case FixtureStage::Asr:
            j["scope"] = record.scope;
            j["transcript"] = record.transcript;
            break;
        case FixtureStage::Reason:
            j["scope"] = record.scope;
            j["answer"] = record.answer;
            if (record.correct) j["correct"] = *record.correct;
            break;
    }
    j["latency_s"] = latency_to_seconds(record.latency_us);
    return j.dump();
}

}  // namespace cascade
