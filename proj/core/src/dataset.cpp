#include "cascade/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "cascade/synth.hpp"
#include "cascade/wav.hpp"

namespace cascade {

using ordered_json = nlohmann::ordered_json;

Query DatasetRecord::query() const {
    Query q;
    q.text = question;
    q.candidates = candidates;
    q.sample_id = sample_id;
    return q;
}

AudioClip DatasetRecord::load_clip(const std::string& dataset_dir) const {
    if (is_synthetic()) {
        return synthesize_clip(sample_id, synth_spec);
    }
    std::filesystem::path p(wav_path);
    if (p.is_relative() && !dataset_dir.empty()) {
        p = std::filesystem::path(dataset_dir) / p;
    }
    return read_wav(p.string(), sample_id);
}

std::vector<DatasetRecord> load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DatasetError("cannot open dataset file '" + path + "'");
    }
    static const std::set<std::string> kAllowed = {
        "v", "sample_id", "audio", "question", "candidates", "gold_answer"};

    std::vector<DatasetRecord> records;
    std::set<std::string> seen_ids;
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
            throw DatasetError(context + ": malformed record: " + e.what());
        }
        try {
            if (!j.is_object()) throw DatasetError("record is not an object");
            for (const auto& item : j.items()) {
                if (kAllowed.count(item.key()) == 0) {
                    throw DatasetError("unknown field '" + item.key() + "'");
                }
            }
            DatasetRecord record;
            record.sample_id = j.at("sample_id").get<std::string>();
            if (!seen_ids.insert(record.sample_id).second) {
                throw DatasetError("duplicate sample_id '" + record.sample_id + "'");
            }
            const auto& audio = j.at("audio");
            if (audio.contains("wav") == audio.contains("synth")) {
                throw DatasetError("audio must have exactly one of 'wav' or 'synth'");
            }
            if (audio.contains("wav")) {
                record.wav_path = audio.at("wav").get<std::string>();
            } else {
                record.synth_spec = audio.at("synth").get<std::string>();
                synth_spec_duration(record.synth_spec);  // validate the spec eagerly
            }
            record.question = j.at("question").get<std::string>();
            if (j.contains("candidates")) {
                record.candidates = j.at("candidates").get<std::vector<std::string>>();
            }
            record.gold_answer = j.at("gold_answer").get<std::string>();
            if (!record.candidates.empty()) {
                bool found = false;
                for (const std::string& c : record.candidates) {
                    if (c == record.gold_answer) found = true;
                }
                if (!found) {
                    throw DatasetError("gold answer '" + record.gold_answer +
                                       "' not among candidates");
                }
            }
            validate_query(record.query());
            records.push_back(std::move(record));
        } catch (const nlohmann::json::exception& e) {
            throw DatasetError(context + ": " + e.what());
        } catch (const DatasetError& e) {
            throw DatasetError(context + ": " + e.what());
        } catch (const Error& e) {
            throw DatasetError(context + ": " + e.what());
        }
    }
    return records;
}

std::map<std::string, std::string> gold_answers(const std::vector<DatasetRecord>& records) {
    std::map<std::string, std::string> gold;
    for (const DatasetRecord& r : records) gold[r.sample_id] = r.gold_answer;
    return gold;
}

std::string dataset_record_line(const DatasetRecord& record) {
    ordered_json j;
    j["v"] = 1;
    j["sample_id"] = record.sample_id;
    if (record.is_synthetic()) {
        j["audio"]["synth"] = record.synth_spec;
    } else {
        j["audio"]["wav"] = record.wav_path;
    }
    j["question"] = record.question;
    j["candidates"] = record.candidates;
    j["gold_answer"] = record.gold_answer;
    return j.dump();
}

}  // namespace cascade
