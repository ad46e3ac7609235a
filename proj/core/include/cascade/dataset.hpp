#pragma once

#include <map>
#include <string>
#include <vector>

#include "cascade/domain.hpp"

namespace cascade {

// One benchmark sample: an audio source (WAV path or synthetic spec), the
// question, multiple-choice candidates and the gold answer.
struct DatasetRecord {
    std::string sample_id;
    std::string wav_path;    // exactly one of wav_path / synth_spec is set
    std::string synth_spec;
    std::string question;
    std::vector<std::string> candidates;
    std::string gold_answer;

    bool is_synthetic() const { return !synth_spec.empty(); }
    Query query() const;
    // Expands the audio source. Synthetic specs render lazily, per call.
    AudioClip load_clip(const std::string& dataset_dir) const;
};

// Line-delimited dataset loader. Validation failures name the file and line;
// a gold answer outside the candidate set is a validation error.
std::vector<DatasetRecord> load_dataset(const std::string& path);

std::map<std::string, std::string> gold_answers(const std::vector<DatasetRecord>& records);

std::string dataset_record_line(const DatasetRecord& record);

}  // namespace cascade
