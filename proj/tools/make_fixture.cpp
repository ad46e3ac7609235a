// Generates the reference dataset + scripted fixture + run config that back
// the regression suite. The fixture is authored so that the five-policy run
// reproduces the published routing and latency arithmetic exactly; it tests
// the harness, not any model. Fully deterministic: re-running the tool
// produces byte-identical files.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cascade/dataset.hpp"
#include "cascade/fixture.hpp"

namespace {

using cascade::DatasetRecord;
using cascade::FixtureStage;
using cascade::ScriptedRecord;

constexpr int kSamples = 1000;
constexpr std::uint64_t kSeed = 0x5EEDCAFE0DDBALL;

// Deterministic splitmix64 stream.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
};

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = rng.below(i);
        std::swap(items[i - 1], items[j]);
    }
}

// Sample classes keyed by their adaptive-gating behavior.
enum class Cls { Fast, Relisten, Asr, Both };

char cls_tag(Cls c) {
    switch (c) {
        case Cls::Fast: return 'F';
        case Cls::Relisten: return 'R';
        case Cls::Asr: return 'A';
        case Cls::Both: return 'B';
    }
    return '?';
}

// Splits `total_us` over n members exactly: even base + remainder on the
// first members, then zero-sum pairwise jitter so per-sample latencies vary
// while group sums stay exact to the microsecond.
std::vector<std::int64_t> partition_exact(std::uint64_t total_us, std::size_t n,
                                          std::uint64_t tag) {
    std::vector<std::int64_t> out(n);
    const std::uint64_t base = total_us / n;
    const std::uint64_t rem = total_us % n;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<std::int64_t>(base + (i < rem ? 1 : 0));
    }
    const std::uint64_t spread = base / 5;
    Rng rng(kSeed ^ (tag * 0xA24BAED4963EE407ULL));
    for (std::size_t i = 0; i + 1 < n; i += 2) {
        const auto d = static_cast<std::int64_t>(rng.below(spread + 1));
        out[i] += d;
        out[i + 1] -= d;
    }
    return out;
}

struct Template {
    const char* question;
    std::vector<const char*> candidates;
    const char* confident;   // stage-0 rationale when the edge model is sure
    const char* hedged;      // stage-0 rationale carrying uncertainty cues
    const char* transcript;  // ASR output
    const char* focus_note;  // relisten rationale
};

const std::vector<Template>& templates() {
    static const std::vector<Template> kTemplates = {
        {"Which event occurs first in the recording?",
         {"Door slam", "Dog bark", "Car horn", "Glass breaking"},
         "The recording opens with a sharp percussive event before any other sound; the "
         "first event is distinct and well separated.",
         "There might be an early transient but it is hard to tell which event comes first "
         "over the background noise.",
         "and then the door went, you heard that, right after the bark started outside",
         "The selected segment isolates the opening transient and its decay."},
        {"How many distinct speakers take part in the conversation?",
         {"One", "Two", "Three", "Four"},
         "Two clearly distinct speakers alternate turns through the conversation with no "
         "overlap elsewhere.",
         "Possibly two or three speakers; the voices overlap and it is not sure how many "
         "take part.",
         "okay so I'll take the window seat. sure, and could we get two menus please. "
         "of course, right away",
         "Within the segment two alternating voices are audible with a brief pause."},
        {"Does the first speaker's second statement carry the same meaning as the first?",
         {"Same", "Different"},
         "Both statements are farewells delivered in the same friendly register and carry "
         "one meaning.",
         "The statements seem similar in tone but the second one might carry a different "
         "implication.",
         "have a good day. thanks. enjoy the next twenty four hours of your life",
         "The second statement in the segment lands with a flat, pointed delivery."},
        {"What is the wifi password mentioned in the dialogue?",
         {"Youhavetobuysmooziefirst", "Guest1234word", "No password is given",
          "It is the shop name"},
         "The staff member answers the password question directly and the phrase is "
         "repeated verbatim twice.",
         "The reply is unclear; the staff member might be refusing or joking about the "
         "password question.",
         "can I get the wifi password please. you have to buy smoothie first. I just did. "
         "that's the best word",
         "The segment repeats the same phrase in response to both password requests."},
        {"What kind of environment does the clip most likely capture?",
         {"Street", "Kitchen", "Office", "Beach"},
         "Steady traffic wash, a distant siren and footsteps place the environment "
         "outdoors on a street.",
         "The environment is ambiguous; it seems like outdoor noise but the low rumble is "
         "hard to tell apart from machinery.",
         "watch the curb. taxi! over here. mind the bikes",
         "The segment foregrounds engine idling and a pedestrian signal beep."},
        {"Which instrument enters after the percussion?",
         {"Guitar", "Violin", "Trumpet", "Piano"},
         "After the percussion settles, a bowed string instrument enters with a sustained "
         "line, clearly a violin entering second.",
         "Some instrument enters after the percussion but it is not sure whether the "
         "timbre is bowed or plucked.",
         "",
         "In the segment the entry after the percussion is sustained and bowed."},
        {"Is the word 'ni hao' spoken anywhere in the clip?",
         {"Includes", "Does not include"},
         "The speech is fully intelligible and the target word is absent from every "
         "utterance in the clip.",
         "Possibly the greeting appears early on, though the speech is muffled and it is "
         "hard to tell.",
         "dad, I'm in China, man. erho? erho. okay, good",
         "The segment covers the greeting exchange; the target word does not occur."},
        {"What does the customer ask for at the end?",
         {"The bill", "Directions", "A refill", "The time"},
         "The final utterance is a polite request for the bill, said once and "
         "acknowledged by the server.",
         "The final request is mumbled; the customer might be asking for the bill or "
         "the time, unclear which.",
         "that was great, thank you. could we get the bill when you have a second",
         "The closing segment contains a single short request and a confirmation."},
    };
    return kTemplates;
}

struct SamplePlanRow {
    Cls cls;
    std::string id;
    int tmpl = 0;
    int gold_idx = 0;
    double duration_s = 0.0;
    int sample_rate = 8000;
    std::string synth_spec;
    int roi_index = 0;
    std::string asr_scope = "whole_clip";
    int class_pos = 0;  // position within the class member list
};

std::string wrong_answer(const Template& t, int gold_idx, std::uint64_t salt) {
    const int k = static_cast<int>(t.candidates.size());
    const int offset = 1 + static_cast<int>(salt % static_cast<std::uint64_t>(k - 1));
    return t.candidates[(gold_idx + offset) % k];
}

std::string format_spec(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generate the reference dataset, scripted fixture and run config"};
    std::string out_dir = "fixtures";
    app.add_option("--out", out_dir, "output directory");
    CLI11_PARSE(app, argc, argv);

    std::filesystem::create_directories(out_dir);

    // Class labels: 382 fast, 274 relisten-only, 197 asr-only, 147 both.
    std::vector<Cls> labels;
    labels.insert(labels.end(), 382, Cls::Fast);
    labels.insert(labels.end(), 274, Cls::Relisten);
    labels.insert(labels.end(), 197, Cls::Asr);
    labels.insert(labels.end(), 147, Cls::Both);
    {
        Rng rng(kSeed ^ 0x11);
        shuffle(labels, rng);
    }

    std::map<Cls, std::vector<int>> members;
    for (int i = 0; i < kSamples; ++i) members[labels[i]].push_back(i);

    // Per-class permutation; correctness sets are prefixes of it, which keeps
    // the subset relations between stages trivially true.
    std::map<Cls, std::vector<int>> rank;  // sample index -> position in permuted class
    for (auto& [cls, list] : members) {
        std::vector<int> perm = list;
        Rng rng(kSeed ^ (0x22 + static_cast<std::uint64_t>(cls_tag(cls))));
        shuffle(perm, rng);
        std::vector<int> pos(kSamples, -1);
        for (std::size_t p = 0; p < perm.size(); ++p) pos[perm[p]] = static_cast<int>(p);
        rank[cls] = std::move(pos);
    }

    // Correct-count prefixes per class and stage. B/both is the one
    // non-prefix set: it keeps 5 of the 10 stage-0-correct samples and flips
    // the other 5, which is what the tool-noise regression counter measures.
    auto stage0_correct = [&](Cls c, int pos) {
        switch (c) {
            case Cls::Fast: return pos < 230;
            case Cls::Relisten: return pos < 20;
            case Cls::Asr: return pos < 12;
            case Cls::Both: return pos < 10;
        }
        return false;
    };
    auto reason_correct = [&](Cls c, const std::string& scope, int pos) {
        if (c == Cls::Fast) {
            if (scope == "s0") return pos < 280;
            if (scope == "relisten") return pos < 240;
            if (scope == "asr") return pos < 255;
            return pos < 211;  // relisten+asr: flips 19 of the 230 stage-0 hits
        }
        if (c == Cls::Relisten) {
            if (scope == "s0") return pos < 65;
            if (scope == "relisten") return pos < 151;
            if (scope == "asr") return pos < 60;
            return pos < 155;
        }
        if (c == Cls::Asr) {
            if (scope == "s0") return pos < 30;
            if (scope == "relisten") return pos < 40;
            if (scope == "asr") return pos < 107;
            return pos < 110;
        }
        // Cls::Both
        if (scope == "s0") return pos < 18;
        if (scope == "relisten") return pos < 20;
        if (scope == "asr") return pos < 25;
        return pos < 5 || (pos >= 10 && pos < 53);  // relisten+asr: 48 correct, 5 flips
    };

    // Latency plan, exact integer microseconds. Group sums are chosen so the
    // five-policy means and the stage breakdown come out exactly.
    std::map<std::string, std::vector<std::int64_t>> lat;  // group key -> per-member us
    auto assign_all = [&](const std::string& key, std::uint64_t total, std::uint64_t tag) {
        lat[key] = partition_exact(total, kSamples, tag);
    };
    auto assign_cls = [&](Cls c, const std::string& key, std::uint64_t total,
                          std::uint64_t tag) {
        lat[std::string(1, cls_tag(c)) + ":" + key] =
            partition_exact(total, members[c].size(), tag);
    };

    assign_all("stage0", 155'300'000, 0x31);  // 0.1553 s mean
    assign_all("gate", 569'100'000, 0x32);    // + 0.0309 plan fold = 0.60 over adaptive runs

    assign_cls(Cls::Fast, "plan", 382ULL * 50'000, 0x41);
    assign_cls(Cls::Relisten, "plan", 274ULL * 50'000, 0x42);
    assign_cls(Cls::Asr, "plan", 197ULL * 50'000, 0x43);
    assign_cls(Cls::Both, "plan", 147ULL * 50'000, 0x44);

    assign_cls(Cls::Fast, "relisten", 420'200'000, 0x51);      // 1.1 s
    assign_cls(Cls::Relisten, "relisten", 575'400'000, 0x52);  // 2.1 s
    assign_cls(Cls::Asr, "relisten", 197ULL * 2'200'000, 0x53);
    assign_cls(Cls::Both, "relisten", 338'100'000, 0x54);      // 2.3 s

    assign_cls(Cls::Fast, "asr", 534'800'000, 0x61);  // 1.4 s
    assign_cls(Cls::Relisten, "asr", 274ULL * 2'500'000, 0x62);
    assign_cls(Cls::Asr, "asr", 512'200'000, 0x63);   // 2.6 s
    assign_cls(Cls::Both, "asr", 426'300'000, 0x64);  // 2.9 s

    assign_cls(Cls::Fast, "reason:s0", 725'800'000, 0x71);
    assign_cls(Cls::Relisten, "reason:s0", 794'600'000, 0x72);
    assign_cls(Cls::Asr, "reason:s0", 669'800'000, 0x73);
    assign_cls(Cls::Both, "reason:s0", 395'500'000, 0x74);

    assign_cls(Cls::Fast, "reason:relisten", 382ULL * 2'200'000, 0x81);
    assign_cls(Cls::Relisten, "reason:relisten", 2'630'400'000, 0x82);  // 9.6 s
    assign_cls(Cls::Asr, "reason:relisten", 197ULL * 6'000'000, 0x83);
    assign_cls(Cls::Both, "reason:relisten", 1'274'750'000, 0x84);

    assign_cls(Cls::Fast, "reason:asr", 382ULL * 2'400'000, 0x91);
    assign_cls(Cls::Relisten, "reason:asr", 274ULL * 9'000'000, 0x92);
    assign_cls(Cls::Asr, "reason:asr", 2'192'550'000, 0x93);
    assign_cls(Cls::Both, "reason:asr", 147ULL * 9'500'000, 0x94);

    assign_cls(Cls::Fast, "reason:relisten+asr", 988'250'000, 0xA1);
    assign_cls(Cls::Relisten, "reason:relisten+asr", 274ULL * 10'000'000, 0xA2);
    assign_cls(Cls::Asr, "reason:relisten+asr", 197ULL * 11'500'000, 0xA3);
    assign_cls(Cls::Both, "reason:relisten+asr", 1'984'500'000, 0xA4);  // 13.5 s

    auto cls_lat = [&](Cls c, const std::string& key, int pos) {
        return lat.at(std::string(1, cls_tag(c)) + ":" + key)[pos];
    };

    // Audio plan. Tone/const clips produce no energy events, so escalated
    // samples on those clips see exactly the four fixed windows and any roi
    // index 0..3 is valid; burst clips always use roi 0.
    static const double kDurations[] = {2.5, 4.0, 5.5, 6.0, 7.5, 9.0,
                                        10.5, 13.0, 15.0, 18.0, 24.0, 40.0};

    std::vector<SamplePlanRow> rows(kSamples);
    std::map<Cls, int> class_seen;
    for (int i = 0; i < kSamples; ++i) {
        SamplePlanRow& row = rows[i];
        row.cls = labels[i];
        row.class_pos = rank[row.cls][i];
        char id[32];
        std::snprintf(id, sizeof(id), "ref-%04d", i + 1);
        row.id = id;
        Rng rng(kSeed ^ (0xB0 + static_cast<std::uint64_t>(i) * 0x9E37ULL));
        row.tmpl = static_cast<int>(rng.below(templates().size()));
        const Template& t = templates()[row.tmpl];
        row.gold_idx = static_cast<int>(rng.below(t.candidates.size()));
        row.duration_s = kDurations[i % 12];
        row.sample_rate = (i % 7 == 3) ? 16000 : 8000;

        const int kind = i % 3;
        char spec[160];
        if (kind == 2) {
            const double lead = row.duration_s * 0.3;
            std::snprintf(spec, sizeof(spec), "sr=%d;silence:%s;burst:0.8:1.0;silence:%s",
                          row.sample_rate, format_spec(lead).c_str(),
                          format_spec(row.duration_s - lead - 1.0).c_str());
            row.roi_index = 0;
        } else if (kind == 1) {
            std::snprintf(spec, sizeof(spec), "sr=%d;tone:%d:0.4:%s", row.sample_rate,
                          220 + static_cast<int>(i % 5) * 110,
                          format_spec(row.duration_s).c_str());
            row.roi_index = row.duration_s < 3.0 ? 0 : static_cast<int>(rng.below(4));
        } else {
            std::snprintf(spec, sizeof(spec), "sr=%d;const:0.5:%s", row.sample_rate,
                          format_spec(row.duration_s).c_str());
            row.roi_index = row.duration_s < 3.0 ? 0 : static_cast<int>(rng.below(4));
        }
        row.synth_spec = spec;
        if ((row.cls == Cls::Asr || row.cls == Cls::Both) && i % 4 == 1) {
            row.asr_scope = "selected_roi";
        }
        ++class_seen[row.cls];
    }

    // Emit the dataset.
    std::ofstream dataset(std::filesystem::path(out_dir) / "reference_dataset.jsonl",
                          std::ios::trunc);
    for (const SamplePlanRow& row : rows) {
        const Template& t = templates()[row.tmpl];
        DatasetRecord record;
        record.sample_id = row.id;
        record.synth_spec = row.synth_spec;
        record.question = t.question;
        for (const char* c : t.candidates) record.candidates.emplace_back(c);
        record.gold_answer = t.candidates[row.gold_idx];
        dataset << cascade::dataset_record_line(record) << '\n';
    }
    dataset.close();

    // Emit the fixture: nine records per sample.
    std::ofstream fixture(std::filesystem::path(out_dir) / "reference_fixture.jsonl",
                          std::ios::trunc);
    auto emit = [&fixture](const ScriptedRecord& record) {
        fixture << cascade::fixture_record_line(record) << '\n';
    };

    for (int i = 0; i < kSamples; ++i) {
        const SamplePlanRow& row = rows[i];
        const Template& t = templates()[row.tmpl];
        const std::string gold = t.candidates[row.gold_idx];
        const Cls c = row.cls;
        const int pos = row.class_pos;
        const bool escalates = c != Cls::Fast;

        ScriptedRecord stage0;
        stage0.sample_id = row.id;
        stage0.stage = FixtureStage::Stage0;
        stage0.scope = "whole_clip";
        stage0.rationale = escalates ? t.hedged : t.confident;
        stage0.correct = stage0_correct(c, pos);
        stage0.answer = *stage0.correct ? gold : wrong_answer(t, row.gold_idx, i * 11ULL);
        stage0.latency_us = lat.at("stage0")[i];
        emit(stage0);

        ScriptedRecord gate;
        gate.sample_id = row.id;
        gate.stage = FixtureStage::Gate;
        gate.escalate = escalates;
        gate.note = escalates ? "uncertainty cues in the rationale" : "confident and consistent";
        gate.latency_us = lat.at("gate")[i];
        emit(gate);

        ScriptedRecord plan;
        plan.sample_id = row.id;
        plan.stage = FixtureStage::Plan;
        plan.roi_index = row.roi_index;
        plan.focused_query = std::string("Focus on the selected segment: ") + t.question;
        switch (c) {
            case Cls::Fast: plan.tools = {"relisten", "asr"}; break;
            case Cls::Relisten: plan.tools = {"relisten"}; break;
            case Cls::Asr: plan.tools = {"asr"}; break;
            case Cls::Both: plan.tools = {"relisten", "asr"}; break;
        }
        plan.asr_scope = row.asr_scope;
        plan.latency_us = cls_lat(c, "plan", pos);
        emit(plan);

        ScriptedRecord relisten;
        relisten.sample_id = row.id;
        relisten.stage = FixtureStage::Relisten;
        relisten.scope = "roi";
        relisten.rationale = t.focus_note;
        relisten.answer = reason_correct(c, "relisten", pos)
                              ? gold
                              : wrong_answer(t, row.gold_idx, i * 13ULL);
        relisten.latency_us = cls_lat(c, "relisten", pos);
        emit(relisten);

        ScriptedRecord asr;
        asr.sample_id = row.id;
        asr.stage = FixtureStage::Asr;
        asr.scope = row.asr_scope == "selected_roi" ? "roi" : "whole_clip";
        std::string transcript = t.transcript;
        if (pos % 20 == 7) {
            transcript += transcript.empty() ? "call me back at 5551234567"
                                             : ". call me back at 5551234567";
        } else if (pos % 20 == 15) {
            transcript += transcript.empty() ? "send it to leak@example.com"
                                             : ". send it to leak@example.com";
        }
        asr.transcript = transcript;
        asr.latency_us = cls_lat(c, "asr", pos);
        emit(asr);

        for (const std::string scope : {"s0", "relisten", "asr", "relisten+asr"}) {
            ScriptedRecord reason;
            reason.sample_id = row.id;
            reason.stage = FixtureStage::Reason;
            reason.scope = scope;
            reason.correct = reason_correct(c, scope, pos);
            reason.answer = *reason.correct ? gold
                                            : wrong_answer(t, row.gold_idx,
                                                           i * 17ULL + scope.size());
            reason.latency_us = cls_lat(c, "reason:" + scope, pos);
            emit(reason);
        }
    }
    fixture.close();

    // Run config wired for exact reproduction: scripted backends, scripted
    // network at 0.125 s per round trip.
    std::ofstream config(std::filesystem::path(out_dir) / "reference_config.json",
                         std::ios::trunc);
    config << R"({
  "v": 1,
  "mode": "sim",
  "workers": 4,
  "policies": ["baseline", "hybrid_describe_reason", "adaptive_relisten", "always_on_asr", "adaptive_asr"],
  "dataset": "reference_dataset.jsonl",
  "fixture": "reference_fixture.jsonl",
  "out_dir": "../out/reference",
  "backends": {"edge": "scripted", "asr": "scripted", "controller": "scripted"},
  "network": {"mode": "scripted", "fixed_latency": 0.125, "rtt_p50": 0.015, "rtt_p95": 0.045, "seed": 2026}
}
)";
    config.close();

    std::printf("wrote %s/{reference_dataset.jsonl, reference_fixture.jsonl, reference_config.json}\n",
                out_dir.c_str());
    std::printf("classes: F=%d R=%d A=%d B=%d\n", class_seen[Cls::Fast],
                class_seen[Cls::Relisten], class_seen[Cls::Asr], class_seen[Cls::Both]);
    return 0;
}
