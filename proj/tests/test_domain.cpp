#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "cascade/domain.hpp"
#include "helpers.hpp"

namespace cascade {
namespace {

AudioClip ramp_clip(const std::string& id, std::size_t n, int rate) {
    std::vector<float> samples(n);
    for (std::size_t i = 0; i < n; ++i) samples[i] = static_cast<float>(i % 997) / 997.0f;
    return make_clip(id, std::move(samples), rate);
}

// Independent index oracle mirroring the documented mapping: start index
// floors, sample count rounds, end capped at the clip length.
std::vector<float> slice_oracle(const AudioClip& clip, double start_s, double end_s) {
    const auto len = static_cast<std::int64_t>(clip.samples.size());
    const auto first = static_cast<std::int64_t>(std::floor(start_s * clip.sample_rate));
    const auto count = static_cast<std::int64_t>(std::llround((end_s - start_s) * clip.sample_rate));
    const auto last = std::min(len, first + count);
    return {clip.samples.begin() + first, clip.samples.begin() + last};
}

TEST(SliceClip, IdentitySliceKeepsEverySample) {
    const AudioClip clip = ramp_clip("ten", 160000, 16000);
    const AudioClip sliced = slice_clip(clip, 0.0, 10.0);
    EXPECT_EQ(sliced.samples.size(), 160000u);
    EXPECT_EQ(sliced.samples, clip.samples);
    EXPECT_EQ(sliced.sample_rate, clip.sample_rate);
}

TEST(SliceClip, InteriorWindow) {
    const AudioClip clip = ramp_clip("ten", 160000, 16000);
    const AudioClip sliced = slice_clip(clip, 2.0, 5.0);
    EXPECT_EQ(sliced.samples.size(), 48000u);
    EXPECT_EQ(sliced.samples, slice_oracle(clip, 2.0, 5.0));
}

TEST(SliceClip, TailWindowAtOddRate) {
    const AudioClip clip = ramp_clip("odd", 60000, 8000);  // 7.5 s
    const AudioClip sliced = slice_clip(clip, 7.0, 7.5);
    EXPECT_EQ(sliced.samples.size(), 4000u);
    EXPECT_EQ(sliced.samples, slice_oracle(clip, 7.0, 7.5));
}

TEST(SliceClip, OutOfRangeBoundsNameTheOffender) {
    const AudioClip clip = ramp_clip("c", 8000, 8000);
    EXPECT_THROW(slice_clip(clip, -0.1, 0.5), RangeError);
    EXPECT_THROW(slice_clip(clip, 0.5, 0.5), RangeError);
    EXPECT_THROW(slice_clip(clip, 0.5, 1.5), RangeError);
    try {
        slice_clip(clip, 0.5, 1.5);
        FAIL() << "expected RangeError";
    } catch (const RangeError& e) {
        EXPECT_NE(std::string(e.what()).find("1.5"), std::string::npos);
    }
}

TEST(SliceClip, CompositionReproducesTheOuterSlice) {
    const AudioClip clip = ramp_clip("comp", 80000, 8000);
    test::TestRng rng(41);
    for (int i = 0; i < 200; ++i) {
        // Grid-aligned and arbitrary bounds alike must compose exactly.
        double a, b;
        if (i % 2 == 0) {
            const auto ai = rng.below(79000);
            const auto bi = ai + 1 + rng.below(80000 - ai - 1);
            a = static_cast<double>(ai) / 8000.0;
            b = static_cast<double>(bi) / 8000.0;
        } else {
            a = rng.unit() * 9.0;
            b = a + 0.001 + rng.unit() * (10.0 - a - 0.001);
        }
        const AudioClip once = slice_clip(clip, a, b);
        // Windows overrunning the clip end are capped, so the inner clip can
        // be marginally shorter than b - a; slice up to what it actually has.
        const double outer_end = std::min(b - a, once.duration_seconds());
        const AudioClip twice = slice_clip(once, 0.0, outer_end);
        EXPECT_EQ(once.samples, twice.samples) << "a=" << a << " b=" << b;
    }
}

TEST(Clip, DurationAndValidation) {
    const AudioClip clip = ramp_clip("d", 44100, 44100);
    EXPECT_NEAR(clip.duration_seconds(), 1.0, 1e-9);
    EXPECT_THROW(make_clip("bad", {0.0f}, 0), InvalidInputError);
    EXPECT_THROW(make_clip("nan", {std::nanf("")}, 8000), InvalidInputError);
    EXPECT_EQ(clip.raw_pcm16_bytes(), 88200u);
}

TEST(Query, DuplicateCandidatesRejected) {
    Query q;
    q.text = "what happened?";
    q.candidates = {"A", "B", "A"};
    EXPECT_THROW(validate_query(q), InvalidInputError);
    q.candidates = {"A", "B"};
    EXPECT_NO_THROW(validate_query(q));
    q.text = "";
    EXPECT_THROW(validate_query(q), InvalidInputError);
}

TEST(Ledger, TotalMatchesPublishedBreakdown) {
    CostLedger ledger;
    ledger.add(Stage::EdgePerception, latency_from_seconds(0.16));
    ledger.add(Stage::Network, latency_from_seconds(0.20));
    ledger.add(Stage::CloudGate, latency_from_seconds(0.60));
    ledger.add(Stage::ToolAsr, latency_from_seconds(1.85));
    ledger.add(Stage::CloudReason, latency_from_seconds(6.81));
    EXPECT_DOUBLE_EQ(ledger_total(ledger), 9.62);
}

TEST(Ledger, SingleEntryAndEmpty) {
    CostLedger empty;
    EXPECT_DOUBLE_EQ(ledger_total(empty), 0.0);
    CostLedger baseline;
    baseline.add(Stage::EdgePerception, latency_from_seconds(0.155));
    EXPECT_DOUBLE_EQ(ledger_total(baseline), 0.155);
}

TEST(Ledger, MicrosecondSumsAreExact) {
    // Sums that would drift in double arithmetic stay exact in integer
    // microseconds.
    test::TestRng rng(99);
    CostLedger ledger;
    std::int64_t expected = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto us = static_cast<LatencyUs>(rng.below(2'000'000));
        expected += us;
        ledger.add(Stage::CloudReason, us);
    }
    EXPECT_EQ(ledger.total_us(), expected);
}

TEST(Ledger, ExtendFoldsIntoMostRecentEntry) {
    CostLedger ledger;
    ledger.add(Stage::Network, 100, 50, 0);
    ledger.add(Stage::CloudGate, 600'000);
    ledger.extend(Stage::CloudGate, 50'000);
    ledger.extend(Stage::Network, 0, 30, 10);
    ASSERT_EQ(ledger.entries().size(), 2u);
    EXPECT_EQ(ledger.stage_total_us(Stage::CloudGate), 650'000);
    EXPECT_EQ(ledger.cloud_bound_bytes(), 80u);
    EXPECT_EQ(ledger.device_bound_bytes(), 10u);
    EXPECT_THROW(ledger.add(Stage::Network, -1), InvalidInputError);
}

TEST(Answers, MatchIsCaseAndWhitespaceInsensitive) {
    EXPECT_TRUE(answers_match("  Door Slam ", "door slam"));
    EXPECT_FALSE(answers_match("Door", "door slam"));
    EXPECT_TRUE(answers_match("", "  "));
}

TEST(Proposal, Validation) {
    SegmentProposal proposal;
    proposal.clip_id = "p";
    proposal.clip_duration = 10.0;
    proposal.windows.push_back(RoiWindow{0, 0.0, 3.0, WindowSource::FixedWindow, {}});
    proposal.windows.push_back(RoiWindow{1, 4.0, 7.0, WindowSource::EnergyEvent, 0.5});
    EXPECT_NO_THROW(validate_proposal(proposal));
    proposal.windows[1].index = 3;
    EXPECT_THROW(validate_proposal(proposal), InvalidInputError);
    proposal.windows[1].index = 1;
    proposal.windows[1].end_s = 10.5;
    EXPECT_THROW(validate_proposal(proposal), InvalidInputError);
}

}  // namespace
}  // namespace cascade
