#pragma once

#include <vector>

#include "cascade/domain.hpp"

namespace cascade {

// On-device segment proposer configuration. K, the window length, the short
// clip cutoff and the percentile anchors follow the deployed defaults; the
// DSP knobs (frame/hop/threshold/merge) are tunable per experiment.
struct SegmenterConfig {
    double frame_ms = 25.0;
    double hop_ms = 10.0;
    double energy_threshold_ratio = 1.5;  // fraction of clip-global RMS
    double min_event_s = 0.2;
    double merge_gap_s = 0.3;
    int window_count = 4;            // K
    double window_len_s = 3.0;
    double short_clip_cutoff_s = 12.0;
    std::vector<double> percentile_anchors = {0.10, 0.30, 0.50, 0.70};
    int max_windows = 8;
};

void validate_segmenter_config(const SegmenterConfig& config);

struct FrameEnergy {
    double frame_start_s = 0.0;
    double rms = 0.0;
};

// Hop-aligned frame RMS energies. The trailing partial frame is included when
// it spans at least half a frame length.
std::vector<FrameEnergy> frame_energies(const AudioClip& clip, const SegmenterConfig& config);

// Energy-based event segmentation: frames at or above
// energy_threshold_ratio * clip-global RMS form events, events closer than
// merge_gap_s are merged, events shorter than min_event_s are dropped.
// A silent clip yields no events.
std::vector<RoiWindow> energy_events(const AudioClip& clip, const SegmenterConfig& config);

// Fixed-window strategy: whole clip below window_len_s; K evenly spaced
// windows (both extremes included) below the short-clip cutoff; K windows at
// the percentile anchors above it. Exact duplicate windows are collapsed
// (degenerate at duration == window_len_s).
std::vector<RoiWindow> fixed_windows(double clip_duration, const SegmenterConfig& config);

// Hybrid proposal: union of energy events and fixed windows. A fixed window
// overlapping an energy event by >= 80% (intersection over the shorter of the
// two) is dropped in favour of the event. The result is capped at max_windows
// by descending energy score then earliest start, and reindexed in start
// order.
SegmentProposal propose(const AudioClip& clip, const SegmenterConfig& config);

}  // namespace cascade
