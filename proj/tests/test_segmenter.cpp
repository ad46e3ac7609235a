#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "cascade/segmenter.hpp"
#include "cascade/synth.hpp"
#include "helpers.hpp"

namespace cascade {
namespace {

TEST(FrameEnergies, SilenceIsZero) {
    const AudioClip clip = synthesize_clip("z", "sr=8000;silence:1.0");
    const auto frames = frame_energies(clip, SegmenterConfig{});
    ASSERT_FALSE(frames.empty());
    for (const FrameEnergy& f : frames) EXPECT_EQ(f.rms, 0.0);
}

TEST(FrameEnergies, ConstantAmplitudeHasConstantRms) {
    const AudioClip clip = synthesize_clip("c", "sr=8000;const:0.5:1.0");
    for (const FrameEnergy& f : frame_energies(clip, SegmenterConfig{})) {
        EXPECT_NEAR(f.rms, 0.5, 1e-9);
    }
}

TEST(FrameEnergies, SquareWaveMatchesDirectRmsOracle) {
    // Unit-amplitude square wave; direct RMS over each frame is the oracle.
    std::vector<float> samples(8000);
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = (i / 8) % 2 ? -1.0f : 1.0f;
    const AudioClip clip = make_clip("sq", std::move(samples), 8000);
    SegmenterConfig config;
    const auto frames = frame_energies(clip, config);
    const auto frame_len = static_cast<std::size_t>(0.025 * 8000);
    const auto hop = static_cast<std::size_t>(0.010 * 8000);
    ASSERT_FALSE(frames.empty());
    for (std::size_t k = 0; k < frames.size(); ++k) {
        const std::size_t start = k * hop;
        const std::size_t stop = std::min(clip.samples.size(), start + frame_len);
        double acc = 0.0;
        for (std::size_t i = start; i < stop; ++i) {
            acc += clip.samples[i] * clip.samples[i];
        }
        const double expected = std::sqrt(acc / static_cast<double>(stop - start));
        EXPECT_NEAR(frames[k].rms, expected, 1e-12);
        EXPECT_NEAR(frames[k].rms, 1.0, 1e-12);  // |x| = 1 everywhere
    }
}

TEST(FrameEnergies, TrailingPartialFrameNeedsHalfALength) {
    SegmenterConfig config;
    config.frame_ms = 100.0;
    config.hop_ms = 100.0;
    // 0.26 s: frames at 0 and 0.1; remainder 0.06 >= half frame -> included.
    const AudioClip with_partial = synthesize_clip("p", "sr=1000;const:0.5:0.26");
    EXPECT_EQ(frame_energies(with_partial, config).size(), 3u);
    // 0.24 s: remainder 0.04 < half frame -> dropped.
    const AudioClip without_partial = synthesize_clip("q", "sr=1000;const:0.5:0.24");
    EXPECT_EQ(frame_energies(without_partial, config).size(), 2u);
}

TEST(FrameEnergies, EmptyClipRejected) {
    AudioClip clip;
    clip.id = "e";
    clip.sample_rate = 8000;
    EXPECT_THROW(frame_energies(clip, SegmenterConfig{}), InvalidInputError);
}

TEST(EnergyEvents, SilentClipYieldsNothing) {
    const AudioClip clip = synthesize_clip("s", "sr=8000;silence:10.0");
    EXPECT_TRUE(energy_events(clip, SegmenterConfig{}).empty());
}

TEST(EnergyEvents, ConstantClipHasNoEventsAboveThreshold) {
    const AudioClip clip = synthesize_clip("c", "sr=8000;const:0.5:10.0");
    EXPECT_TRUE(energy_events(clip, SegmenterConfig{}).empty());
}

TEST(EnergyEvents, SingleBurstIsLocalized) {
    // One 1 s burst at t=2 s in 10 s of silence.
    const AudioClip clip = synthesize_clip("b", "sr=8000;silence:2;burst:0.8:1;silence:7");
    SegmenterConfig config;
    const auto events = energy_events(clip, config);
    ASSERT_EQ(events.size(), 1u);
    const double hop = config.hop_ms / 1000.0;
    const double frame = config.frame_ms / 1000.0;
    EXPECT_GE(events[0].start_s, 2.0 - frame - 1e-9);
    EXPECT_LE(events[0].start_s, 2.0 + hop + 1e-9);
    EXPECT_GE(events[0].end_s, 3.0 - hop - 1e-9);
    EXPECT_LE(events[0].end_s, 3.0 + frame + hop + 1e-9);
    EXPECT_EQ(events[0].source, WindowSource::EnergyEvent);
    EXPECT_TRUE(events[0].energy_score.has_value());
}

TEST(EnergyEvents, CloseBurstsMergeAcrossTheGap) {
    // Two bursts 0.1 s apart with merge_gap_s = 0.3: a single merged event.
    const AudioClip clip = synthesize_clip(
        "m", "sr=8000;silence:2;burst:0.8:0.3;silence:0.1;burst:0.8:0.3;silence:7.3");
    const auto events = energy_events(clip, SegmenterConfig{});
    ASSERT_EQ(events.size(), 1u);
    EXPECT_LT(events[0].start_s, 2.1);
    EXPECT_GT(events[0].end_s, 2.6);
}

TEST(EnergyEvents, ShortBlipsAreDropped) {
    // A 0.05 s blip is shorter than min_event_s = 0.2 and far from others.
    const AudioClip clip =
        synthesize_clip("d", "sr=8000;silence:2;burst:0.9:0.05;silence:5;burst:0.8:1;silence:2");
    const auto events = energy_events(clip, SegmenterConfig{});
    ASSERT_EQ(events.size(), 1u);
    EXPECT_GT(events[0].start_s, 6.0);
}

TEST(EnergyEvents, TimeReversedClipGivesMirroredEvents) {
    SegmenterConfig config;
    config.frame_ms = 25.0;
    config.hop_ms = 25.0;  // aligned grid; reversal maps frames onto frames
    const AudioClip clip = synthesize_clip(
        "r", "sr=8000;silence:1;burst:0.8:0.5;silence:5;burst:0.6:1;silence:2.5");
    const double duration = clip.duration_seconds();
    AudioClip reversed = clip;
    std::reverse(reversed.samples.begin(), reversed.samples.end());

    auto forward = energy_events(clip, config);
    auto backward = energy_events(reversed, config);
    ASSERT_EQ(forward.size(), backward.size());
    std::reverse(backward.begin(), backward.end());
    const double hop_s = config.hop_ms / 1000.0;
    for (std::size_t i = 0; i < forward.size(); ++i) {
        EXPECT_NEAR(forward[i].start_s, duration - backward[i].end_s, hop_s + 1e-9);
        EXPECT_NEAR(forward[i].end_s, duration - backward[i].start_s, hop_s + 1e-9);
    }
}

TEST(FixedWindows, PercentileAnchorsForLongClips) {
    const auto windows = fixed_windows(60.0, SegmenterConfig{});
    ASSERT_EQ(windows.size(), 4u);
    const double expected_starts[] = {6.0, 18.0, 30.0, 42.0};
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(windows[i].start_s, expected_starts[i], 1e-9);
        EXPECT_NEAR(windows[i].end_s, expected_starts[i] + 3.0, 1e-9);
        EXPECT_EQ(windows[i].source, WindowSource::FixedWindow);
    }
}

TEST(FixedWindows, WholeClipBelowWindowLength) {
    const auto windows = fixed_windows(2.0, SegmenterConfig{});
    ASSERT_EQ(windows.size(), 1u);
    EXPECT_EQ(windows[0].start_s, 0.0);
    EXPECT_EQ(windows[0].end_s, 2.0);
}

TEST(FixedWindows, EvenSpacingForShortClips) {
    const auto windows = fixed_windows(9.0, SegmenterConfig{});
    ASSERT_EQ(windows.size(), 4u);
    const double expected_starts[] = {0.0, 2.0, 4.0, 6.0};
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(windows[i].start_s, expected_starts[i], 1e-9);
        EXPECT_NEAR(windows[i].end_s - windows[i].start_s, 3.0, 1e-9);
    }
}

TEST(FixedWindows, DegenerateDurationCollapsesToOneWindow) {
    const auto windows = fixed_windows(3.0, SegmenterConfig{});
    ASSERT_EQ(windows.size(), 1u);
    EXPECT_EQ(windows[0].start_s, 0.0);
    EXPECT_NEAR(windows[0].end_s, 3.0, 1e-12);
}

TEST(FixedWindows, PureFunctionOfInputs) {
    const SegmenterConfig config;
    const auto a = fixed_windows(47.5, config);
    const auto b = fixed_windows(47.5, config);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].start_s, b[i].start_s);
        EXPECT_EQ(a[i].end_s, b[i].end_s);
    }
    EXPECT_THROW(fixed_windows(0.0, config), InvalidInputError);
    EXPECT_THROW(fixed_windows(-1.0, config), InvalidInputError);
}

TEST(FixedWindows, NoClampedEndsAtOrAboveTheCutoff) {
    const SegmenterConfig config;
    for (double d = 12.0; d <= 600.0; d += 0.5) {
        for (const RoiWindow& w : fixed_windows(d, config)) {
            EXPECT_NEAR(w.end_s - w.start_s, 3.0, 1e-9) << "duration " << d;
            EXPECT_LE(w.end_s, d + 1e-9);
        }
    }
}

TEST(Propose, SilentClipFallsBackToFixedWindows) {
    const AudioClip clip = synthesize_clip("s", "sr=8000;silence:10");
    const SegmentProposal proposal = propose(clip, SegmenterConfig{});
    ASSERT_EQ(proposal.windows.size(), 4u);
    for (const RoiWindow& w : proposal.windows) {
        EXPECT_EQ(w.source, WindowSource::FixedWindow);
    }
    // Even spacing over [0, 7].
    EXPECT_NEAR(proposal.windows[0].start_s, 0.0, 1e-9);
    EXPECT_NEAR(proposal.windows[3].start_s, 7.0, 1e-9);
}

TEST(Propose, BurstInLongClipAddsAnEnergyWindow) {
    const AudioClip clip = synthesize_clip("b", "sr=8000;silence:50;burst:0.8:1;silence:9");
    const SegmentProposal proposal = propose(clip, SegmenterConfig{});
    EXPECT_GE(proposal.windows.size(), 5u);
    const auto it = std::find_if(proposal.windows.begin(), proposal.windows.end(),
                                 [](const RoiWindow& w) {
                                     return w.source == WindowSource::EnergyEvent;
                                 });
    ASSERT_NE(it, proposal.windows.end());
    EXPECT_LE(it->start_s, 50.05);
    EXPECT_GE(it->end_s, 50.95);
}

TEST(Propose, ShortClipStaysInBounds) {
    const AudioClip clip = synthesize_clip("t", "sr=8000;tone:440:0.5:2.0");
    const SegmentProposal proposal = propose(clip, SegmenterConfig{});
    for (const RoiWindow& w : proposal.windows) {
        EXPECT_GE(w.start_s, 0.0);
        EXPECT_LE(w.end_s, 2.0 + 1e-9);
    }
}

TEST(Propose, OverlappingFixedWindowIsDroppedForTheEvent) {
    // 9 s clip, burst [4.0, 4.5]. Fixed windows [2,5] and [4,7] overlap the
    // event at 100% of the shorter interval and are deduplicated away.
    const AudioClip clip = synthesize_clip("o", "sr=8000;silence:4;burst:0.8:0.5;silence:4.5");
    const SegmentProposal proposal = propose(clip, SegmenterConfig{});
    ASSERT_EQ(proposal.windows.size(), 3u);
    EXPECT_EQ(proposal.windows[0].source, WindowSource::FixedWindow);  // [0,3]
    EXPECT_EQ(proposal.windows[1].source, WindowSource::EnergyEvent);
    EXPECT_EQ(proposal.windows[2].source, WindowSource::FixedWindow);  // [6,9]
}

TEST(Propose, CapKeepsHighestEnergyThenEarliest) {
    SegmenterConfig config;
    config.max_windows = 2;
    const AudioClip clip = synthesize_clip(
        "cap", "sr=8000;silence:14;burst:0.4:1;silence:5;burst:0.9:1;silence:9");
    const SegmentProposal proposal = propose(clip, config);
    ASSERT_EQ(proposal.windows.size(), 2u);
    // Both survivors are the energy events; the stronger one is present.
    for (const RoiWindow& w : proposal.windows) {
        EXPECT_EQ(w.source, WindowSource::EnergyEvent);
    }
    EXPECT_TRUE(std::any_of(proposal.windows.begin(), proposal.windows.end(),
                            [](const RoiWindow& w) { return w.start_s > 19.0; }));
}

TEST(Propose, IndicesContiguousAndSorted) {
    const AudioClip clip = synthesize_clip(
        "i", "sr=8000;silence:3;burst:0.7:1;silence:10;burst:0.5:1;silence:15");
    const SegmentProposal proposal = propose(clip, SegmenterConfig{});
    for (std::size_t i = 0; i < proposal.windows.size(); ++i) {
        EXPECT_EQ(proposal.windows[i].index, static_cast<int>(i));
        if (i > 0) {
            EXPECT_GE(proposal.windows[i].start_s, proposal.windows[i - 1].start_s);
        }
    }
}

}  // namespace
}  // namespace cascade
