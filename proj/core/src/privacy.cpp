#include "cascade/privacy.hpp"

#include <regex>
#include <set>

#include <nlohmann/json.hpp>

#include "cascade/wire.hpp"

namespace cascade {

namespace {

const std::set<std::string>& waveform_field_names() {
    static const std::set<std::string> kNames = {
        "samples", "waveform", "pcm", "audio_samples", "audio_data", "wav",
    };
    return kNames;
}

// Recursively audits one JSON value under the given schema. `key` is the
// field name that owns this value ("" at the top level).
bool walk(const nlohmann::json& value, const std::string& key,
          const wire::MessageSchema& schema, const InspectionConfig& config,
          std::string& reason) {
    if (!key.empty() && waveform_field_names().count(key) > 0) {
        reason = "waveform-field: '" + key + "'";
        return false;
    }
    if (!key.empty() && schema.text_fields.count(key) == 0) {
        const std::string serialized = value.dump();
        if (serialized.size() > config.blob_threshold_bytes) {
            reason = "oversize-blob: field '" + key + "' is " +
                     std::to_string(serialized.size()) + " bytes";
            return false;
        }
    }
    if (value.is_object()) {
        for (const auto& item : value.items()) {
            if (!walk(item.value(), item.key(), schema, config, reason)) return false;
        }
    } else if (value.is_array()) {
        for (const auto& element : value) {
            if (!walk(element, key, schema, config, reason)) return false;
        }
    }
    return true;
}

}  // namespace

void validate_redaction_policy(const RedactionPolicy& policy) {
    for (const RedactionPolicy::Rule& rule : policy.rules) {
        std::regex re;
        try {
            re = std::regex(rule.pattern);
        } catch (const std::regex_error& e) {
            throw InvalidInputError(std::string("redaction: bad pattern: ") + e.what());
        }
        if (std::regex_search(rule.replacement, re)) {
            throw InvalidInputError("redaction: replacement '" + rule.replacement +
                                    "' re-triggers its own pattern");
        }
    }
}

std::string redact(const std::string& text, const RedactionPolicy& policy) {
    if (!policy.enabled) return text;
    validate_redaction_policy(policy);
    std::string out = text;
    for (const RedactionPolicy::Rule& rule : policy.rules) {
        out = std::regex_replace(out, std::regex(rule.pattern), rule.replacement);
    }
    return out;
}

PayloadVerdict inspect_cloud_payload(const std::string& serialized_request,
                                     const InspectionConfig& config) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(serialized_request);
    } catch (const nlohmann::json::parse_error&) {
        return PayloadVerdict{false, "unknown-schema: not a structured message"};
    }
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        return PayloadVerdict{false, "unknown-schema: missing type tag"};
    }
    const std::string type = j.at("type").get<std::string>();
    const wire::MessageSchema* schema = wire::request_schema(type);
    if (schema == nullptr) {
        return PayloadVerdict{false, "unknown-schema: '" + type + "'"};
    }

    std::string reason;
    for (const auto& item : j.items()) {
        // Waveform and blob checks run before the unknown-field check so a
        // smuggled payload is reported for what it is.
        if (!walk(item.value(), item.key(), *schema, config, reason)) {
            return PayloadVerdict{false, reason};
        }
        if (schema->allowed_fields.count(item.key()) == 0) {
            return PayloadVerdict{false, "unknown-field: '" + item.key() + "'"};
        }
    }
    return PayloadVerdict{true, ""};
}

}  // namespace cascade
