// Copyright 2026 The vidstruct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "vidstruct/config.hpp"
#include "vidstruct/error.hpp"
#include "vidstruct/measure_cache.hpp"
#include "vidstruct/measures.hpp"
#include "vidstruct/pipeline.hpp"
#include "vidstruct/sampling_detector.hpp"
#include "vidstruct/synthgen.hpp"

namespace vidstruct {
namespace {

using synth::ClipScript;
using synth::Packing;

// Sample whose v0 flow magnitude is the half-line offset of a progressive
// frame, or a woven frame's combing when `combed`.
FieldTripletSample make_sample(std::int64_t t, bool combed, double v1, double v2) {
  FieldTripletSample s;
  s.t = t;
  s.v0 = combed ? combine_activity(3.0, 0.3) : combine_activity(0.5, 0.004);
  s.v1 = combine_activity(4.0, v1 * v1 * kAmmCeiling / 4.0);
  s.v2 = combine_activity(4.0, v2 * v2 * kAmmCeiling / 4.0);
  return s;
}

FieldTripletSample make_static(std::int64_t t) {
  FieldTripletSample s;
  s.t = t;
  s.v1 = combine_activity(0.5, 0.0001);
  s.v2 = combine_activity(0.5, 0.0001);
  s.is_static = true;
  return s;
}

ClipScript pan_clip(Packing packing, double pan_x, double pan_y, int frames = 24, int phase = 0) {
  ClipScript script;
  script.packing = packing;
  script.pulldown_phase = phase;
  synth::Segment seg;
  seg.scene.texture_seed = 90;
  seg.scene.pan_x = pan_x;
  seg.scene.pan_y = pan_y;
  seg.length = frames;
  script.segments = {seg};
  return script;
}

std::vector<FieldTripletSample> triplets(const ClipScript& script, int count) {
  synth::Renderer r(script);
  MeasureCache cache(FlowParams{});
  for (std::int64_t i = 0; i <= count; ++i) {
    auto [upper, lower] = split_fields(r.frame(i));
    FramePlanes fp;
    fp.frame = upper;
    fp.upper = std::move(upper);
    fp.lower = std::move(lower);
    cache.add_frame(i, std::move(fp));
  }
  std::vector<FieldTripletSample> out;
  for (std::int64_t t = 0; t < count; ++t) out.push_back(sample_triplet(cache, t, SamplingParams{}));
  return out;
}

SamplingVerdict verdict_of(const ClipScript& script) {
  auto source = synth::make_source(script);
  const AnalysisReport r = analyze(*source, Config{});
  EXPECT_EQ(r.shots.size(), 1U);
  return r.shots.empty() ? SamplingVerdict{} : r.shots[0].sampling;
}

TEST(SampleTriplet, StaticProgressiveScene) {
  for (const auto& s : triplets(pan_clip(Packing::kProgressive, 0, 0), 4)) {
    EXPECT_TRUE(s.is_static);
    EXPECT_LT(s.v1.act, 0.03);
    EXPECT_LT(s.v2.act, 0.03);
    EXPECT_EQ(s.v0.act, 0.0);  // never computed for static probes
  }
}

TEST(SampleTriplet, ProgressivePan) {
  for (const auto& s : triplets(pan_clip(Packing::kProgressive, 4, 0), 6)) {
    EXPECT_FALSE(s.is_static);
    EXPECT_LT(s.v0.act, 0.05);
    EXPECT_NEAR(s.v1.act / s.v2.act, 1.0, 0.2);
    EXPECT_EQ(vote(s, SamplingParams{}), SampleVote::kProgressive);
  }
}

TEST(SampleTriplet, WovenPanIsCombedWithConsistentRatio) {
  for (const auto& s : triplets(pan_clip(Packing::kWeaveTff, 4, 0), 6)) {
    EXPECT_FALSE(s.is_static);
    EXPECT_EQ(vote(s, SamplingParams{}), SampleVote::kCombed);
    EXPECT_GT(s.v1.act / s.v2.act, 1.1);
  }
}

TEST(SampleTriplet, FieldOrderFlipsBeta) {
  const auto tff = triplets(pan_clip(Packing::kWeaveTff, 5, 1), 8);
  const auto bff = triplets(pan_clip(Packing::kWeaveBff, 5, 1), 8);
  EXPECT_GT(std::log(median_beta(tff)), 0.0);
  EXPECT_LT(std::log(median_beta(bff)), 0.0);
}

TEST(ClassifyShot, AllCleanIsProgressive) {
  std::vector<FieldTripletSample> samples;
  for (int t = 1; t <= 20; ++t) samples.push_back(make_sample(t, false, 0.10, 0.11));
  const SamplingVerdict v = classify_shot(samples, SamplingParams{});
  EXPECT_EQ(v.structure, SamplingStructure::kProgressive);
  EXPECT_EQ(v.field_order, FieldOrder::kNotApplicable);
  EXPECT_DOUBLE_EQ(v.confidence, 1.0);
  EXPECT_EQ(v.samples_used, 20);
  EXPECT_FALSE(v.beta.has_value());
}

TEST(ClassifyShot, AllCombedIsInterlacedTff) {
  std::vector<FieldTripletSample> samples;
  for (int t = 1; t <= 20; ++t) samples.push_back(make_sample(t, true, 0.16, 0.10));
  const SamplingVerdict v = classify_shot(samples, SamplingParams{});
  EXPECT_EQ(v.structure, SamplingStructure::kInterlaced);
  EXPECT_EQ(v.field_order, FieldOrder::kTff);
  ASSERT_TRUE(v.beta.has_value());
  EXPECT_NEAR(*v.beta, 1.6, 1e-9);
  EXPECT_DOUBLE_EQ(v.confidence, 1.0);
}

TEST(ClassifyShot, CadencePatternIsPulldown) {
  constexpr bool kMask[5] = {false, false, true, true, false};
  std::vector<FieldTripletSample> samples;
  for (int t = 1; t <= 20; ++t) samples.push_back(make_sample(t, kMask[t % 5], 0.1, 0.1));
  const SamplingVerdict v = classify_shot(samples, SamplingParams{});
  EXPECT_EQ(v.structure, SamplingStructure::kPulldown32);
  EXPECT_EQ(v.field_order, FieldOrder::kNotApplicable);
  ASSERT_TRUE(v.cadence_phase.has_value());
  EXPECT_EQ(*v.cadence_phase, 0);
}

TEST(ClassifyShot, TooFewSamplesIsUndetermined) {
  std::vector<FieldTripletSample> samples;
  for (int t = 1; t <= 4; ++t) samples.push_back(make_sample(t, true, 0.16, 0.1));
  for (int t = 5; t <= 40; ++t) samples.push_back(make_static(t));
  const SamplingVerdict v = classify_shot(samples, SamplingParams{});
  EXPECT_EQ(v.structure, SamplingStructure::kUndetermined);
  EXPECT_EQ(v.samples_used, 4);
  EXPECT_EQ(v.samples_probed, 40);
}

TEST(ClassifyShot, AmbiguousMixIsUndetermined) {
  std::vector<FieldTripletSample> samples;
  for (int t = 1; t <= 20; ++t) samples.push_back(make_sample(t, t % 3 == 0, 0.1, 0.1));
  EXPECT_EQ(classify_shot(samples, SamplingParams{}).structure, SamplingStructure::kUndetermined);
}

TEST(ClassifyShot, UsesAtMostMaxSamples) {
  std::vector<FieldTripletSample> samples;
  for (int t = 1; t <= 30; ++t) samples.push_back(make_sample(t, false, 0.1, 0.1));
  EXPECT_EQ(classify_shot(samples, SamplingParams{}).samples_used, 20);
}

TEST(FieldOrder, FromBeta) {
  std::vector<FieldTripletSample> tff(7, make_sample(1, true, 0.16, 0.10));
  std::vector<FieldTripletSample> bff(7, make_sample(1, true, 0.06, 0.10));
  std::vector<FieldTripletSample> tie(7, make_sample(1, true, 0.10, 0.10));
  EXPECT_EQ(field_order_from_beta(tff, 0.1), FieldOrder::kTff);
  EXPECT_EQ(field_order_from_beta(bff, 0.1), FieldOrder::kBff);
  EXPECT_NEAR(median_beta(bff), 0.6, 1e-9);
  EXPECT_EQ(field_order_from_beta(tie, 0.1), FieldOrder::kTff);
}

TEST(FieldOrder, MajorityFallbackInsideMargin) {
  std::vector<FieldTripletSample> s;
  for (int i = 0; i < 3; ++i) s.push_back(make_sample(i, true, 0.100, 0.105));
  for (int i = 0; i < 2; ++i) s.push_back(make_sample(i, true, 0.105, 0.100));
  EXPECT_EQ(field_order_from_beta(s, 0.1), FieldOrder::kBff);
}

TEST(Cadence, CanonicalMaskPhaseZero) {
  const std::vector<std::int64_t> frames{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const std::vector<bool> flags{false, false, true, true, false, false, false, true, true, false};
  const CadenceResult r = detect_pulldown_cadence(frames, flags);
  EXPECT_TRUE(r.is_cadence);
  ASSERT_TRUE(r.phase.has_value());
  EXPECT_EQ(*r.phase, 0);
}

TEST(Cadence, EveryPhaseIsRecovered) {
  constexpr bool kMask[5] = {false, false, true, true, false};
  for (int p = 0; p < 5; ++p) {
    std::vector<std::int64_t> frames;
    std::vector<bool> flags;
    for (std::int64_t f = 3; f < 23; ++f) {
      frames.push_back(f);
      flags.push_back(kMask[(f + p) % 5]);
    }
    const CadenceResult r = detect_pulldown_cadence(frames, flags);
    ASSERT_TRUE(r.is_cadence);
    EXPECT_EQ(*r.phase, p);
  }
}

TEST(Cadence, AllCombedIsNotCadence) {
  const std::vector<std::int64_t> frames{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  EXPECT_FALSE(detect_pulldown_cadence(frames, std::vector<bool>(12, true)).is_cadence);
}

TEST(Cadence, GapsAndShortRunsFail) {
  const std::vector<bool> flags{false, false, true, true, false, false, false, true, true, false};
  const std::vector<std::int64_t> gappy{0, 1, 2, 3, 4, 5, 6, 7, 8, 12};
  EXPECT_FALSE(detect_pulldown_cadence(gappy, flags).is_cadence);
  const std::vector<std::int64_t> short_frames{0, 1, 2, 3, 4};
  EXPECT_FALSE(detect_pulldown_cadence(short_frames, std::vector<bool>(flags.begin(), flags.begin() + 5)).is_cadence);
  EXPECT_THROW(detect_pulldown_cadence(short_frames, flags), PreconditionError);
}

TEST(Cadence, RandomFlagsRarelyMatch) {
  std::mt19937 rng(12345);
  std::bernoulli_distribution coin(0.4);
  int hits = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::int64_t> frames;
    std::vector<bool> flags;
    for (std::int64_t f = 0; f < 20; ++f) {
      frames.push_back(f);
      flags.push_back(coin(rng));
    }
    if (detect_pulldown_cadence(frames, flags).is_cadence) ++hits;
  }
  EXPECT_LT(hits, 50 * 5 / 100);
}

TEST(ShotSampler, StaticShotStaysWithinBudget) {
  const ClipScript script = pan_clip(Packing::kProgressive, 0, 0, 80);
  synth::Renderer r(script);
  MeasureCache cache(FlowParams{});
  for (std::int64_t i = 0; i < 80; ++i) {
    auto [upper, lower] = split_fields(r.frame(i));
    FramePlanes fp;
    fp.frame = upper;
    fp.upper = std::move(upper);
    fp.lower = std::move(lower);
    cache.add_frame(i, std::move(fp));
  }
  ShotSampler sampler(0, SamplingParams{});
  sampler.advance(cache, 79);
  EXPECT_TRUE(sampler.done());
  EXPECT_LE(sampler.computations(), 3 * 20);
  EXPECT_EQ(cache.stats().activity.computed, sampler.computations());
  EXPECT_EQ(classify_shot(sampler.probes(), SamplingParams{}).structure, SamplingStructure::kUndetermined);
}

TEST(SamplingVerdicts, NoiseChangesNoVerdict) {
  struct Case {
    Packing packing;
    SamplingStructure structure;
    FieldOrder order;
  };
  const Case cases[] = {
      {Packing::kProgressive, SamplingStructure::kProgressive, FieldOrder::kNotApplicable},
      {Packing::kWeaveTff, SamplingStructure::kInterlaced, FieldOrder::kTff},
      {Packing::kWeaveBff, SamplingStructure::kInterlaced, FieldOrder::kBff},
      {Packing::kPulldown32, SamplingStructure::kPulldown32, FieldOrder::kNotApplicable},
  };
  for (const auto& c : cases) {
    for (double sigma : {0.0, 4.0}) {
      ClipScript script = pan_clip(c.packing, 5, 0.5, 40);
      script.degradations.noise_sigma = sigma;
      const SamplingVerdict v = verdict_of(script);
      EXPECT_EQ(v.structure, c.structure) << to_string(c.packing) << " sigma " << sigma;
      EXPECT_EQ(v.field_order, c.order) << to_string(c.packing) << " sigma " << sigma;
      EXPECT_LE(v.samples_used, 20);
    }
  }
}

}  // namespace
}  // namespace vidstruct
