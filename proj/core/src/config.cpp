#include "cascade/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace cascade {

using ordered_json = nlohmann::ordered_json;

namespace {

void check_allowed(const ordered_json& obj, const std::string& what,
                   const std::set<std::string>& allowed) {
    for (const auto& item : obj.items()) {
        if (allowed.count(item.key()) == 0) {
            throw ConfigError(what + ": unknown field '" + item.key() + "'");
        }
    }
}

std::string resolve(const std::string& path, const std::string& base_dir) {
    if (path.empty() || base_dir.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(base_dir) / p).string();
}

void parse_network(const ordered_json& j, NetworkModel& model) {
    check_allowed(j, "network",
                  {"mode", "rtt_p50", "rtt_p95", "fixed_latency", "bandwidth",
                   "uplink_bytes_per_s", "downlink_bytes_per_s", "seed"});
    if (j.contains("mode")) {
        model.mode = network_mode_from_name(j.at("mode").get<std::string>());
    }
    if (j.contains("rtt_p50")) model.rtt_p50_s = j.at("rtt_p50").get<double>();
    if (j.contains("rtt_p95")) model.rtt_p95_s = j.at("rtt_p95").get<double>();
    if (j.contains("fixed_latency")) model.fixed_latency_s = j.at("fixed_latency").get<double>();
    if (j.contains("bandwidth")) {
        // symmetric link; per-direction keys below override
        model.uplink_bytes_per_s = j.at("bandwidth").get<double>();
        model.downlink_bytes_per_s = model.uplink_bytes_per_s;
    }
    if (j.contains("uplink_bytes_per_s"))
        model.uplink_bytes_per_s = j.at("uplink_bytes_per_s").get<double>();
    if (j.contains("downlink_bytes_per_s"))
        model.downlink_bytes_per_s = j.at("downlink_bytes_per_s").get<double>();
    if (j.contains("seed")) model.seed = j.at("seed").get<std::uint64_t>();
    validate_network_model(model);
}

void parse_segmenter(const ordered_json& j, SegmenterConfig& config) {
    check_allowed(j, "segmenter",
                  {"frame_ms", "hop_ms", "energy_threshold_ratio", "min_event_s",
                   "merge_gap_s", "window_count", "window_len_s", "short_clip_cutoff_s",
                   "percentile_anchors", "max_windows"});
    if (j.contains("frame_ms")) config.frame_ms = j.at("frame_ms").get<double>();
    if (j.contains("hop_ms")) config.hop_ms = j.at("hop_ms").get<double>();
    if (j.contains("energy_threshold_ratio"))
        config.energy_threshold_ratio = j.at("energy_threshold_ratio").get<double>();
    if (j.contains("min_event_s")) config.min_event_s = j.at("min_event_s").get<double>();
    if (j.contains("merge_gap_s")) config.merge_gap_s = j.at("merge_gap_s").get<double>();
    if (j.contains("window_count")) config.window_count = j.at("window_count").get<int>();
    if (j.contains("window_len_s")) config.window_len_s = j.at("window_len_s").get<double>();
    if (j.contains("short_clip_cutoff_s"))
        config.short_clip_cutoff_s = j.at("short_clip_cutoff_s").get<double>();
    if (j.contains("percentile_anchors"))
        config.percentile_anchors = j.at("percentile_anchors").get<std::vector<double>>();
    if (j.contains("max_windows")) config.max_windows = j.at("max_windows").get<int>();
    validate_segmenter_config(config);
}

void parse_gate(const ordered_json& j, GateConfig& config) {
    check_allowed(j, "gate",
                  {"hedging_lexicon", "min_rationale_tokens", "require_candidate_match"});
    if (j.contains("hedging_lexicon"))
        config.hedging_lexicon = j.at("hedging_lexicon").get<std::vector<std::string>>();
    if (j.contains("min_rationale_tokens"))
        config.min_rationale_tokens = j.at("min_rationale_tokens").get<int>();
    if (j.contains("require_candidate_match"))
        config.require_candidate_match = j.at("require_candidate_match").get<bool>();
    validate_gate_config(config);
}

void parse_redaction(const ordered_json& j, RedactionPolicy& policy) {
    check_allowed(j, "redaction", {"enabled", "patterns"});
    if (j.contains("enabled")) policy.enabled = j.at("enabled").get<bool>();
    if (j.contains("patterns")) {
        policy.rules.clear();
        for (const auto& p : j.at("patterns")) {
            check_allowed(p, "redaction pattern", {"pattern", "replacement"});
            policy.rules.push_back(RedactionPolicy::Rule{
                p.at("pattern").get<std::string>(), p.at("replacement").get<std::string>()});
        }
    }
    validate_redaction_policy(policy);
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& base_dir) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed run config: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("run config must be a JSON object");
    }
    check_allowed(j, "run config",
                  {"v", "mode", "seed", "workers", "policies", "dataset", "fixture", "out_dir",
                   "wire_log", "backends", "network", "segmenter", "gate", "redaction"});

    RunConfig config;
    try {
        if (j.contains("mode")) {
            config.mode = run_mode_from_name(j.at("mode").get<std::string>());
        }
        if (j.contains("workers")) config.workers = j.at("workers").get<int>();
        if (config.workers < 1) {
            throw ConfigError("workers must be >= 1");
        }
        if (j.contains("policies")) {
            config.policies = j.at("policies").get<std::vector<std::string>>();
            for (const std::string& name : config.policies) {
                policy_from_name(name);  // validate early
            }
        }
        if (j.contains("dataset")) {
            config.dataset_path = resolve(j.at("dataset").get<std::string>(), base_dir);
        }
        if (j.contains("fixture")) {
            config.fixture_path = resolve(j.at("fixture").get<std::string>(), base_dir);
        }
        if (j.contains("out_dir")) {
            config.out_dir = resolve(j.at("out_dir").get<std::string>(), base_dir);
        }
        if (j.contains("wire_log")) {
            config.wire_log_path = resolve(j.at("wire_log").get<std::string>(), base_dir);
        }
        if (j.contains("backends")) {
            const auto& b = j.at("backends");
            check_allowed(b, "backends", {"edge", "asr", "controller", "controller_url"});
            if (b.contains("edge")) config.edge_backend = b.at("edge").get<std::string>();
            if (b.contains("asr")) config.asr_backend = b.at("asr").get<std::string>();
            if (b.contains("controller"))
                config.controller_backend = b.at("controller").get<std::string>();
            if (b.contains("controller_url"))
                config.controller_url = b.at("controller_url").get<std::string>();
        }
        if (j.contains("network")) parse_network(j.at("network"), config.configs.network);
        if (j.contains("seed")) {
            config.configs.network.seed = j.at("seed").get<std::uint64_t>();
        }
        if (j.contains("segmenter")) parse_segmenter(j.at("segmenter"), config.configs.segmenter);
        if (j.contains("gate")) parse_gate(j.at("gate"), config.configs.gate);
        if (j.contains("redaction")) parse_redaction(j.at("redaction"), config.configs.redaction);
        config.configs.mode = config.mode;

        if (config.controller_url.empty()) {
            const char* env = std::getenv(kControllerUrlEnv);
            if (env != nullptr) config.controller_url = env;
        }
        if (config.controller_backend == "remote" && config.controller_url.empty()) {
            throw ConfigError("remote controller selected but no controller_url or " +
                              std::string(kControllerUrlEnv) + " set");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("run config: ") + e.what());
    } catch (const Error& e) {
        throw ConfigError(std::string("run config: ") + e.what());
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open run config '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string base_dir = std::filesystem::path(path).parent_path().string();
    try {
        return parse_run_config(buffer.str(), base_dir);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace cascade
