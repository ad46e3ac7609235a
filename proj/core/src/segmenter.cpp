#include "cascade/segmenter.hpp"

#include <algorithm>
#include <cmath>

namespace cascade {

namespace {

constexpr double kSilenceRms = 1e-12;

double rms_over(const std::vector<float>& samples, std::size_t first, std::size_t last) {
    if (last <= first) return 0.0;
    double acc = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        acc += static_cast<double>(samples[i]) * static_cast<double>(samples[i]);
    }
    return std::sqrt(acc / static_cast<double>(last - first));
}

}  // namespace

void validate_segmenter_config(const SegmenterConfig& config) {
    if (!(config.hop_ms > 0.0) || config.frame_ms < config.hop_ms) {
        throw InvalidInputError("segmenter: frame_ms >= hop_ms > 0 required");
    }
    if (config.energy_threshold_ratio <= 0.0 || config.min_event_s <= 0.0 ||
        config.merge_gap_s <= 0.0 || config.window_len_s <= 0.0 ||
        config.short_clip_cutoff_s <= 0.0) {
        throw InvalidInputError("segmenter: thresholds and durations must be positive");
    }
    if (config.window_count < 1 || config.max_windows < 1) {
        throw InvalidInputError("segmenter: window counts must be >= 1");
    }
    for (double a : config.percentile_anchors) {
        if (a < 0.0 || a >= 1.0) {
            throw InvalidInputError("segmenter: percentile anchors must lie in [0, 1)");
        }
    }
}

std::vector<FrameEnergy> frame_energies(const AudioClip& clip, const SegmenterConfig& config) {
    validate_segmenter_config(config);
    if (clip.samples.empty()) {
        throw InvalidInputError("frame_energies: empty clip '" + clip.id + "'");
    }
    const auto len = clip.samples.size();
    const auto frame_len = static_cast<std::size_t>(
        std::llround(config.frame_ms / 1000.0 * clip.sample_rate));
    const auto hop_len = static_cast<std::size_t>(
        std::llround(config.hop_ms / 1000.0 * clip.sample_rate));
    if (frame_len == 0 || hop_len == 0) {
        throw InvalidInputError("frame_energies: frame or hop shorter than one sample");
    }

    std::vector<FrameEnergy> out;
    std::size_t start = 0;
    while (start + frame_len <= len) {
        out.push_back(FrameEnergy{static_cast<double>(start) / clip.sample_rate,
                                  rms_over(clip.samples, start, start + frame_len)});
        start += hop_len;
    }
    // Trailing partial frame, included only if it covers at least half a frame.
    if (start < len && (len - start) * 2 >= frame_len) {
        out.push_back(FrameEnergy{static_cast<double>(start) / clip.sample_rate,
                                  rms_over(clip.samples, start, len)});
    }
    return out;
}

std::vector<RoiWindow> energy_events(const AudioClip& clip, const SegmenterConfig& config) {
    const std::vector<FrameEnergy> frames = frame_energies(clip, config);
    const double global_rms = rms_over(clip.samples, 0, clip.samples.size());
    if (global_rms < kSilenceRms) {
        return {};  // silent clip
    }
    const double threshold = config.energy_threshold_ratio * global_rms;
    const double frame_s = config.frame_ms / 1000.0;
    const double clip_duration = clip.duration_seconds();

    // Maximal runs of active frames become raw events.
    struct Span {
        double start;
        double end;
    };
    std::vector<Span> events;
    bool in_event = false;
    double event_start = 0.0;
    double event_end = 0.0;
    for (const FrameEnergy& f : frames) {
        if (f.rms >= threshold) {
            if (!in_event) {
                in_event = true;
                event_start = f.frame_start_s;
            }
            event_end = std::min(clip_duration, f.frame_start_s + frame_s);
        } else if (in_event) {
            events.push_back(Span{event_start, event_end});
            in_event = false;
        }
    }
    if (in_event) {
        events.push_back(Span{event_start, event_end});
    }

    // Merge events separated by less than merge_gap_s.
    std::vector<Span> merged;
    for (const Span& e : events) {
        if (!merged.empty() && e.start - merged.back().end < config.merge_gap_s) {
            merged.back().end = std::max(merged.back().end, e.end);
        } else {
            merged.push_back(e);
        }
    }

    std::vector<RoiWindow> out;
    for (const Span& e : merged) {
        if (e.end - e.start < config.min_event_s) continue;
        const auto first = static_cast<std::size_t>(
            std::clamp(std::floor(e.start * clip.sample_rate), 0.0,
                       static_cast<double>(clip.samples.size())));
        const auto last = static_cast<std::size_t>(
            std::clamp(std::ceil(e.end * clip.sample_rate), 0.0,
                       static_cast<double>(clip.samples.size())));
        RoiWindow w;
        w.index = static_cast<int>(out.size());
        w.start_s = e.start;
        w.end_s = e.end;
        w.source = WindowSource::EnergyEvent;
        w.energy_score = rms_over(clip.samples, first, last);
        out.push_back(w);
    }
    return out;
}

std::vector<RoiWindow> fixed_windows(double clip_duration, const SegmenterConfig& config) {
    validate_segmenter_config(config);
    if (!(clip_duration > 0.0)) {
        throw InvalidInputError("fixed_windows: clip duration must be positive");
    }

    std::vector<RoiWindow> out;
    auto push = [&out](double start, double end) {
        for (const RoiWindow& w : out) {
            if (w.start_s == start && w.end_s == end) return;  // collapse exact duplicates
        }
        RoiWindow w;
        w.index = static_cast<int>(out.size());
        w.start_s = start;
        w.end_s = end;
        w.source = WindowSource::FixedWindow;
        out.push_back(w);
    };

    if (clip_duration < config.window_len_s) {
        push(0.0, clip_duration);
    } else if (clip_duration < config.short_clip_cutoff_s) {
        // Evenly spaced starts over [0, duration - window_len], extremes included.
        const int k = config.window_count;
        const double span = clip_duration - config.window_len_s;
        for (int i = 0; i < k; ++i) {
            const double start = (k == 1) ? 0.0 : span * i / (k - 1);
            push(start, start + config.window_len_s);
        }
    } else {
        for (std::size_t i = 0; i < config.percentile_anchors.size(); ++i) {
            const double start = config.percentile_anchors[i] * clip_duration;
            push(start, std::min(clip_duration, start + config.window_len_s));
        }
    }
    return out;
}

SegmentProposal propose(const AudioClip& clip, const SegmenterConfig& config) {
    if (clip.samples.empty()) {
        throw InvalidInputError("propose: empty clip '" + clip.id + "'");
    }
    const double duration = clip.duration_seconds();
    const std::vector<RoiWindow> events = energy_events(clip, config);
    const std::vector<RoiWindow> fixed = fixed_windows(duration, config);

    auto overlap_ratio = [](const RoiWindow& a, const RoiWindow& b) {
        const double inter =
            std::min(a.end_s, b.end_s) - std::max(a.start_s, b.start_s);
        if (inter <= 0.0) return 0.0;
        const double shorter = std::min(a.end_s - a.start_s, b.end_s - b.start_s);
        return shorter > 0.0 ? inter / shorter : 0.0;
    };

    std::vector<RoiWindow> pool = events;
    for (const RoiWindow& fw : fixed) {
        const bool duplicated = std::any_of(
            events.begin(), events.end(),
            [&](const RoiWindow& ev) { return overlap_ratio(fw, ev) >= 0.8; });
        if (!duplicated) pool.push_back(fw);
    }

    if (static_cast<int>(pool.size()) > config.max_windows) {
        std::stable_sort(pool.begin(), pool.end(), [](const RoiWindow& a, const RoiWindow& b) {
            const double ea = a.energy_score.value_or(0.0);
            const double eb = b.energy_score.value_or(0.0);
            if (ea != eb) return ea > eb;
            return a.start_s < b.start_s;
        });
        pool.resize(static_cast<std::size_t>(config.max_windows));
    }

    std::stable_sort(pool.begin(), pool.end(), [](const RoiWindow& a, const RoiWindow& b) {
        if (a.start_s != b.start_s) return a.start_s < b.start_s;
        return a.end_s < b.end_s;
    });
    for (std::size_t i = 0; i < pool.size(); ++i) {
        pool[i].index = static_cast<int>(i);
    }

    SegmentProposal proposal{clip.id, std::move(pool), duration};
    validate_proposal(proposal);
    return proposal;
}

}  // namespace cascade
