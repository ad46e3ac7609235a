#include "cascade/wire.hpp"

#include <map>

#include <nlohmann/json.hpp>

namespace cascade::wire {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json parse_line(const std::string& line) {
    try {
        return ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ProtocolError(std::string("malformed wire message: ") + e.what());
    }
}

void check_fields(const ordered_json& obj, const std::string& what,
                  const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
    if (!obj.is_object()) {
        throw ProtocolError(what + ": message is not an object");
    }
    for (const auto& item : obj.items()) {
        if (allowed.count(item.key()) == 0) {
            throw ProtocolError(what + ": unknown field '" + item.key() + "'");
        }
    }
    for (const std::string& field : required) {
        if (!obj.contains(field)) {
            throw ProtocolError(what + ": missing field '" + field + "'");
        }
    }
}

void check_type_tag(const ordered_json& obj, const std::string& expected) {
    const std::string type = obj.at("type").get<std::string>();
    if (type != expected) {
        throw ProtocolError("expected message type '" + expected + "', got '" + type + "'");
    }
}

void check_version(const ordered_json& obj, const std::string& what) {
    const int v = obj.at("v").get<int>();
    if (v != kWireVersion) {
        throw ProtocolError(what + ": unsupported wire version " + std::to_string(v));
    }
}

ordered_json window_to_json(const RoiWindow& w) {
    ordered_json j;
    j["index"] = w.index;
    j["start_s"] = w.start_s;
    j["end_s"] = w.end_s;
    j["source"] = window_source_name(w.source);
    if (w.energy_score) j["energy_score"] = *w.energy_score;
    return j;
}

RoiWindow window_from_json(const ordered_json& j) {
    check_fields(j, "plan window", {"index", "start_s", "end_s", "source", "energy_score"},
                 {"index", "start_s", "end_s", "source"});
    RoiWindow w;
    w.index = j.at("index").get<int>();
    w.start_s = j.at("start_s").get<double>();
    w.end_s = j.at("end_s").get<double>();
    w.source = window_source_from_name(j.at("source").get<std::string>());
    if (j.contains("energy_score")) w.energy_score = j.at("energy_score").get<double>();
    return w;
}

std::string dump_line(const ordered_json& j) { return j.dump() + "\n"; }

}  // namespace

std::string encode(const GateRequest& msg) {
    ordered_json j;
    j["type"] = "gate";
    j["v"] = msg.v;
    j["sample_id"] = msg.sample_id;
    j["s0"] = msg.s0;
    j["p0"] = msg.p0;
    j["query_text"] = msg.query_text;
    j["candidates"] = msg.candidates;
    return dump_line(j);
}

GateRequest decode_gate_request(const std::string& line) {
    const ordered_json j = parse_line(line);
    check_fields(j, "gate request",
                 {"type", "v", "sample_id", "s0", "p0", "query_text", "candidates"},
                 {"type", "v", "sample_id", "s0", "p0", "query_text", "candidates"});
    check_type_tag(j, "gate");
    check_version(j, "gate request");
    GateRequest msg;
    msg.v = j.at("v").get<int>();
    msg.sample_id = j.at("sample_id").get<std::string>();
    msg.s0 = j.at("s0").get<std::string>();
    msg.p0 = j.at("p0").get<std::string>();
    msg.query_text = j.at("query_text").get<std::string>();
    msg.candidates = j.at("candidates").get<std::vector<std::string>>();
    return msg;
}

std::string encode(const GateResponse& msg) {
    ordered_json j;
    j["escalate"] = msg.escalate;
    j["note"] = msg.note;
    if (msg.latency_s) j["latency_s"] = *msg.latency_s;
    return dump_line(j);
}

GateResponse decode_gate_response(const std::string& line) {
    const ordered_json j = parse_line(line);
    check_fields(j, "gate response", {"escalate", "note", "latency_s"}, {"escalate", "note"});
    GateResponse msg;
    msg.escalate = j.at("escalate").get<bool>();
    msg.note = j.at("note").get<std::string>();
    if (j.contains("latency_s")) msg.latency_s = j.at("latency_s").get<double>();
    return msg;
}

std::string encode(const PlanRequest& msg) {
    ordered_json j;
    j["type"] = "plan";
    j["v"] = msg.v;
    j["sample_id"] = msg.sample_id;
    j["s0"] = msg.s0;
    j["query_text"] = msg.query_text;
    ordered_json windows = ordered_json::array();
    for (const RoiWindow& w : msg.windows) windows.push_back(window_to_json(w));
    j["windows"] = std::move(windows);
    return dump_line(j);
}

PlanRequest decode_plan_request(const std::string& line) {
    const ordered_json j = parse_line(line);
    check_fields(j, "plan request", {"type", "v", "sample_id", "s0", "query_text", "windows"},
                 {"type", "v", "sample_id", "s0", "query_text", "windows"});
    check_type_tag(j, "plan");
    check_version(j, "plan request");
    PlanRequest msg;
    msg.v = j.at("v").get<int>();
    msg.sample_id = j.at("sample_id").get<std::string>();
    msg.s0 = j.at("s0").get<std::string>();
    msg.query_text = j.at("query_text").get<std::string>();
    for (const auto& wj : j.at("windows")) msg.windows.push_back(window_from_json(wj));
    return msg;
}

std::string encode(const PlanResponse& msg) {
    ordered_json j;
    j["roi_index"] = msg.roi_index;
    j["focused_query"] = msg.focused_query;
    j["tools"] = msg.tools;
    j["asr_scope"] = msg.asr_scope;
    if (msg.latency_s) j["latency_s"] = *msg.latency_s;
    return dump_line(j);
}

PlanResponse decode_plan_response(const std::string& line) {
    const ordered_json j = parse_line(line);
    check_fields(j, "plan response",
                 {"roi_index", "focused_query", "tools", "asr_scope", "latency_s"},
                 {"roi_index", "focused_query", "tools", "asr_scope"});
    PlanResponse msg;
    msg.roi_index = j.at("roi_index").get<int>();
    msg.focused_query = j.at("focused_query").get<std::string>();
    msg.tools = j.at("tools").get<std::vector<std::string>>();
    msg.asr_scope = j.at("asr_scope").get<std::string>();
    if (j.contains("latency_s")) msg.latency_s = j.at("latency_s").get<double>();
    return msg;
}

std::string encode(const ReasonRequest& msg) {
    ordered_json j;
    j["type"] = "reason";
    j["v"] = msg.v;
    j["sample_id"] = msg.sample_id;
    j["s0"] = msg.s0;
    j["p0"] = msg.p0;
    if (msg.e_audio) j["e_audio"] = *msg.e_audio;
    if (msg.t_text) j["t_text"] = *msg.t_text;
    j["query_text"] = msg.query_text;
    j["candidates"] = msg.candidates;
    return dump_line(j);
}

ReasonRequest decode_reason_request(const std::string& line) {
    const ordered_json j = parse_line(line);
    check_fields(j, "reason request",
                 {"type", "v", "sample_id", "s0", "p0", "e_audio", "t_text", "query_text",
                  "candidates"},
                 {"type", "v", "sample_id", "s0", "p0", "query_text", "candidates"});
    check_type_tag(j, "reason");
    check_version(j, "reason request");
    ReasonRequest msg;
    msg.v = j.at("v").get<int>();
    msg.sample_id = j.at("sample_id").get<std::string>();
    msg.s0 = j.at("s0").get<std::string>();
    msg.p0 = j.at("p0").get<std::string>();
    if (j.contains("e_audio")) msg.e_audio = j.at("e_audio").get<std::string>();
    if (j.contains("t_text")) msg.t_text = j.at("t_text").get<std::string>();
    msg.query_text = j.at("query_text").get<std::string>();
    msg.candidates = j.at("candidates").get<std::vector<std::string>>();
    return msg;
}

std::string encode(const ReasonResponse& msg) {
    ordered_json j;
    j["answer"] = msg.answer;
    if (msg.latency_s) j["latency_s"] = *msg.latency_s;
    return dump_line(j);
}

ReasonResponse decode_reason_response(const std::string& line) {
    const ordered_json j = parse_line(line);
    check_fields(j, "reason response", {"answer", "latency_s"}, {"answer"});
    ReasonResponse msg;
    msg.answer = j.at("answer").get<std::string>();
    if (j.contains("latency_s")) msg.latency_s = j.at("latency_s").get<double>();
    return msg;
}

std::string encode_error(const std::string& code, const std::string& message) {
    ordered_json j;
    j["error"]["code"] = code;
    j["error"]["message"] = message;
    return dump_line(j);
}

const MessageSchema* request_schema(const std::string& type) {
    static const std::map<std::string, MessageSchema> kSchemas = {
        {"gate",
         {{"type", "v", "sample_id", "s0", "p0", "query_text", "candidates"},
          {"s0", "p0", "query_text", "candidates"}}},
        {"plan",
         {{"type", "v", "sample_id", "s0", "query_text", "windows"},
          {"s0", "query_text"}}},
        {"reason",
         {{"type", "v", "sample_id", "s0", "p0", "e_audio", "t_text", "query_text",
           "candidates"},
          {"s0", "p0", "e_audio", "t_text", "query_text", "candidates"}}},
    };
    const auto it = kSchemas.find(type);
    return it == kSchemas.end() ? nullptr : &it->second;
}

}  // namespace cascade::wire
