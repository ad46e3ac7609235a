#include "cascade/synth.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace cascade {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, sep)) parts.push_back(part);
    return parts;
}

double parse_number(const std::string& text, const std::string& what) {
    try {
        std::size_t consumed = 0;
        const double value = std::stod(text, &consumed);
        if (consumed != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw InvalidInputError("synth spec: bad " + what + " '" + text + "'");
    }
}

struct ParsedSpec {
    int sample_rate = 0;
    struct Segment {
        enum class Kind { Silence, Const, Tone } kind;
        double amplitude = 0.0;
        double freq_hz = 0.0;
        double duration_s = 0.0;
    };
    std::vector<Segment> segments;
};

ParsedSpec parse_spec(const std::string& spec) {
    ParsedSpec parsed;
    const std::vector<std::string> parts = split(spec, ';');
    if (parts.empty()) {
        throw InvalidInputError("synth spec: empty spec");
    }
    for (const std::string& part : parts) {
        if (part.empty()) continue;
        if (part.rfind("sr=", 0) == 0) {
            parsed.sample_rate = static_cast<int>(parse_number(part.substr(3), "sample rate"));
            continue;
        }
        const std::vector<std::string> fields = split(part, ':');
        ParsedSpec::Segment seg{};
        if (fields[0] == "silence" && fields.size() == 2) {
            seg.kind = ParsedSpec::Segment::Kind::Silence;
            seg.duration_s = parse_number(fields[1], "duration");
        } else if ((fields[0] == "const" || fields[0] == "burst") && fields.size() == 3) {
            seg.kind = ParsedSpec::Segment::Kind::Const;
            seg.amplitude = parse_number(fields[1], "amplitude");
            seg.duration_s = parse_number(fields[2], "duration");
        } else if (fields[0] == "tone" && fields.size() == 4) {
            seg.kind = ParsedSpec::Segment::Kind::Tone;
            seg.freq_hz = parse_number(fields[1], "frequency");
            seg.amplitude = parse_number(fields[2], "amplitude");
            seg.duration_s = parse_number(fields[3], "duration");
        } else {
            throw InvalidInputError("synth spec: bad segment '" + part + "'");
        }
        if (seg.duration_s <= 0.0) {
            throw InvalidInputError("synth spec: non-positive segment duration in '" + part +
                                    "'");
        }
        parsed.segments.push_back(seg);
    }
    if (parsed.sample_rate <= 0) {
        throw InvalidInputError("synth spec: missing or bad 'sr=' header");
    }
    if (parsed.segments.empty()) {
        throw InvalidInputError("synth spec: no segments");
    }
    return parsed;
}

}  // namespace

AudioClip synthesize_clip(const std::string& clip_id, const std::string& spec) {
    const ParsedSpec parsed = parse_spec(spec);
    std::vector<float> samples;
    for (const auto& seg : parsed.segments) {
        const auto count =
            static_cast<std::size_t>(std::llround(seg.duration_s * parsed.sample_rate));
        const std::size_t offset = samples.size();
        samples.resize(offset + count, 0.0f);
        switch (seg.kind) {
            case ParsedSpec::Segment::Kind::Silence:
                break;
            case ParsedSpec::Segment::Kind::Const:
                for (std::size_t i = 0; i < count; ++i) {
                    samples[offset + i] = static_cast<float>(seg.amplitude);
                }
                break;
            case ParsedSpec::Segment::Kind::Tone:
                for (std::size_t i = 0; i < count; ++i) {
                    const double t = static_cast<double>(i) / parsed.sample_rate;
                    samples[offset + i] =
                        static_cast<float>(seg.amplitude * std::sin(kTwoPi * seg.freq_hz * t));
                }
                break;
        }
    }
    return make_clip(clip_id, std::move(samples), parsed.sample_rate);
}

double synth_spec_duration(const std::string& spec) {
    const ParsedSpec parsed = parse_spec(spec);
    double total = 0.0;
    for (const auto& seg : parsed.segments) total += seg.duration_s;
    return total;
}

}  // namespace cascade
