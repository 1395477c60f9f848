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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "vidstruct/error.hpp"
#include "vidstruct/flow.hpp"
#include "vidstruct/histogram.hpp"
#include "vidstruct/measures.hpp"
#include "vidstruct/thread_pool.hpp"

namespace vidstruct {
namespace {

using testing::noise_plane;
using testing::textured;

double median(std::vector<float> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

double stddev(const std::vector<float>& v) {
  double mean = 0.0;
  for (float x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double sq = 0.0;
  for (float x : v) sq += (x - mean) * (x - mean);
  return std::sqrt(sq / static_cast<double>(v.size()));
}

LumaPlane affine(const LumaPlane& p, double a, double b) {
  LumaPlane out = p;
  for (auto& px : out.data()) px = static_cast<std::uint8_t>(std::clamp(std::lround(a * px + b), 0L, 255L));
  return out;
}

TEST(Histogram, ConstantPlane) {
  const Histogram h = histogram(LumaPlane(32, 16, PlaneOrigin::kFullFrame, 128));
  EXPECT_EQ(h.total, 512U);
  EXPECT_EQ(h.bins[128], 512U);
  EXPECT_DOUBLE_EQ(h.mean, 128.0);
  EXPECT_DOUBLE_EQ(h.stddev, 0.0);
  EXPECT_DOUBLE_EQ(h.mad, 0.0);
}

TEST(Histogram, TwoPointDistribution) {
  LumaPlane plane(32, 16);
  for (int y = 8; y < 16; ++y) {
    for (int x = 0; x < 32; ++x) plane.at(x, y) = 255;
  }
  const Histogram h = histogram(plane);
  EXPECT_DOUBLE_EQ(h.mean, 127.5);
  EXPECT_DOUBLE_EQ(h.stddev, 127.5);
  EXPECT_DOUBLE_EQ(h.mad, 127.5);
}

TEST(Histogram, HandArithmetic) {
  // Equal thirds of {10, 20, 60}: mean 30, mad (20 + 10 + 30) / 3 = 20,
  // stddev sqrt((400 + 100 + 900) / 3).
  LumaPlane plane(24, 16);
  const std::uint8_t values[3] = {10, 20, 60};
  for (std::size_t i = 0; i < plane.size(); ++i) plane.data()[i] = values[i % 3];
  const Histogram h = histogram(plane);
  std::uint64_t sum = 0;
  for (auto c : h.bins) sum += c;
  EXPECT_EQ(sum, plane.size());
  EXPECT_NEAR(h.mean, 30.0, 1e-12);
  EXPECT_NEAR(h.mad, 20.0, 1e-12);
  EXPECT_NEAR(h.stddev, 21.602, 5e-4);
}

TEST(Histogram, NormalizedL1) {
  const Histogram a = histogram(LumaPlane(16, 16, PlaneOrigin::kFullFrame, 10));
  const Histogram b = histogram(LumaPlane(32, 32, PlaneOrigin::kFullFrame, 10));
  const Histogram c = histogram(LumaPlane(16, 16, PlaneOrigin::kFullFrame, 11));
  EXPECT_DOUBLE_EQ(normalized_l1(a, b), 0.0);
  EXPECT_DOUBLE_EQ(normalized_l1(a, c), 2.0);
}

TEST(Flow, IdenticalPlanesHaveNoMotion) {
  const LumaPlane p = textured(256, 192, 21);
  const MotionField f = compute_flow(p, p, FlowParams{});
  EXPECT_EQ(f.width, 256);
  EXPECT_EQ(f.height, 192);
  EXPECT_EQ(f.dx.size(), 256U * 192U);
  EXPECT_LT(average_magnitude(f), 0.1);
}

TEST(Flow, RecoversThreePixelShift) {
  const LumaPlane ref = textured(256, 192, 22);
  const LumaPlane moving = textured(256, 192, 22, -3, 0);  // content moved right by 3
  const MotionField f = compute_flow(ref, moving, FlowParams{});
  EXPECT_NEAR(median(f.dx), 3.0, 0.5);
  EXPECT_NEAR(median(f.dy), 0.0, 0.5);
}

TEST(Flow, DisplacementsStayWithinSearchRadius) {
  const FlowParams params;
  const int levels = flow_levels(256, 192, params);
  EXPECT_GE(std::max(256, 192) >> (levels - 1), 32);
  const float bound = search_radius_total(256, 192, params);
  for (std::uint32_t seed = 1; seed <= 3; ++seed) {
    const MotionField f = compute_flow(noise_plane(256, 192, seed), noise_plane(256, 192, seed + 100), params);
    for (std::size_t i = 0; i < f.dx.size(); ++i) {
      ASSERT_LE(std::hypot(f.dx[i], f.dy[i]), bound + 1e-3F);
    }
  }
}

TEST(Flow, UnrelatedNoiseIsIrregular) {
  const FlowParams params;
  const LumaPlane ref = textured(128, 96, 23);
  const double translated_sd = stddev(compute_flow(ref, textured(128, 96, 23, -2, 1), params).dx);
  int irregular = 0;
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    const MotionField f = compute_flow(noise_plane(128, 96, 2 * seed + 1), noise_plane(128, 96, 2 * seed + 2), params);
    if (stddev(f.dx) > 2.0 * translated_sd && average_magnitude(f) > 1.0) ++irregular;
  }
  EXPECT_EQ(irregular, 20);
}

TEST(Flow, RejectsMismatchedPlanes) {
  EXPECT_THROW(compute_flow(LumaPlane(64, 64), LumaPlane(64, 48), FlowParams{}), PreconditionError);
  FlowParams bad;
  bad.patch_stride = 9;
  EXPECT_THROW(bad.validate(), PreconditionError);
}

TEST(Warp, ZeroFieldIsIdentity) {
  const LumaPlane p = textured(96, 64, 24);
  const LumaPlane w = warp(p, MotionField::uniform(96, 64, 0.0F, 0.0F));
  EXPECT_EQ(w, p);
  EXPECT_EQ(w.origin(), PlaneOrigin::kDerived);
}

TEST(Warp, UniformShiftOnRamp) {
  LumaPlane ramp(64, 32);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 64; ++x) ramp.at(x, y) = static_cast<std::uint8_t>(3 * x);
  }
  const LumaPlane w = warp(ramp, MotionField::uniform(64, 32, 1.0F, 0.0F));
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 63; ++x) ASSERT_EQ(w.at(x, y), 3 * (x + 1));
    ASSERT_EQ(w.at(63, y), 3 * 63);  // clamp to edge
  }
}

TEST(Warp, CompensatesTranslation) {
  const LumaPlane ref = textured(256, 192, 25);
  const LumaPlane moving = textured(256, 192, 25, 4, -2);
  const LumaPlane w = warp(moving, compute_flow(ref, moving, FlowParams{}));
  // Mean clamped NCC >= 0.98.
  EXPECT_LE(swr(ref, w), 0.02);
}

TEST(Swr, IdenticalPlanesAreZero) {
  const LumaPlane p = textured(128, 96, 26);
  EXPECT_DOUBLE_EQ(swr(p, p), 0.0);
}

TEST(Swr, FlatBlocks) {
  const LumaPlane flat(32, 32, PlaneOrigin::kFullFrame, 90);
  EXPECT_DOUBLE_EQ(swr(flat, LumaPlane(32, 32, PlaneOrigin::kFullFrame, 200)), 0.0);
  EXPECT_DOUBLE_EQ(swr(flat, textured(32, 32, 27)), 1.0);
}

TEST(Swr, BrightnessTransformOracle) {
  const LumaPlane p = textured(256, 192, 28, 0, 0, 0.5);
  EXPECT_LT(swr(p, affine(p, 1.2, 10.0)), 0.02);
}

TEST(Swr, BrightnessInvarianceGrid) {
  const LumaPlane p = textured(256, 192, 29, 0, 0, 0.5);
  for (double a : {0.8, 0.9, 1.1, 1.25}) {
    for (double b : {-20.0, 0.0, 20.0}) {
      EXPECT_LT(swr(p, affine(p, a, b)), 0.02) << "a=" << a << " b=" << b;
    }
  }
}

TEST(Swr, IndependentNoiseIsDissimilar) {
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    EXPECT_GT(swr(noise_plane(128, 96, 1000 + seed), noise_plane(128, 96, 2000 + seed)), 0.8);
  }
}

TEST(Swr, RejectsTinyOrMismatchedPlanes) {
  EXPECT_THROW(swr(LumaPlane(32, 32), LumaPlane(32, 16)), PreconditionError);
}

TEST(Activity, IdentityIsQuiet) {
  for (std::uint32_t seed : {30U, 31U, 32U}) {
    const LumaPlane p = textured(256, 192, seed);
    EXPECT_LT(activity(p, p, FlowParams{}).act, 0.02);
  }
}

TEST(Activity, SameShotPan) {
  const ActivityValue v = activity(textured(512, 384, 33), textured(512, 384, 33, -3, 0), FlowParams{});
  EXPECT_NEAR(v.amm_norm, 0.125, 0.02);
  EXPECT_LT(v.swr, 0.05);
  EXPECT_LT(v.act, 0.15);
}

TEST(Activity, CrossShotPair) {
  const ActivityValue v = activity(textured(512, 384, 34), textured(512, 384, 35), FlowParams{});
  EXPECT_GT(v.act, 0.4);
}

TEST(Activity, TranslationRecovery) {
  const FlowParams params;
  const LumaPlane ref = textured(512, 384, 36);
  for (int t : {1, 2, 3, 5, 8}) {
    for (int sign : {-1, 1}) {
      const ActivityValue h = activity(ref, textured(512, 384, 36, -sign * t, 0), params);
      EXPECT_NEAR(h.amm_raw, t, 0.5) << "horizontal " << sign * t;
      const ActivityValue v = activity(ref, textured(512, 384, 36, 0, -sign * t), params);
      EXPECT_NEAR(v.amm_raw, t, 0.5) << "vertical " << sign * t;
    }
  }
}

TEST(Activity, GeometricMeanStructure) {
  const ActivityValue v = activity(textured(256, 192, 37), textured(256, 192, 37, 5, 2), FlowParams{});
  EXPECT_NEAR(v.act * v.act, v.amm_norm * v.swr, 1e-9);
  EXPECT_DOUBLE_EQ(v.amm_norm, std::min(v.amm_raw / kAmmCeiling, 1.0));

  EXPECT_DOUBLE_EQ(combine_activity(0.0, 0.7).act, 0.0);
  EXPECT_DOUBLE_EQ(combine_activity(5.0, 0.0).act, 0.0);
  EXPECT_DOUBLE_EQ(combine_activity(100.0, 1.0).amm_norm, 1.0);
  double prev = -1.0;
  for (double amm = 0.0; amm <= 30.0; amm += 0.5) {
    const double act = combine_activity(amm, 0.3).act;
    EXPECT_GE(act, prev);
    EXPECT_NEAR(act * act, combine_activity(amm, 0.3).amm_norm * 0.3, 1e-9);
    prev = act;
  }
  prev = -1.0;
  for (double s = 0.0; s <= 1.0; s += 0.05) {
    const double act = combine_activity(6.0, s).act;
    EXPECT_GE(act, prev);
    prev = act;
  }
}

TEST(Activity, DeterministicAcrossThreadCounts) {
  const LumaPlane a = textured(512, 384, 38);
  const LumaPlane b = textured(512, 384, 38, 3, -1);
  ThreadPool pool(4);
  const ActivityValue serial = activity(a, b, FlowParams{});
  const ActivityValue pooled = activity(a, b, FlowParams{}, &pool);
  EXPECT_EQ(serial, pooled);
  EXPECT_EQ(serial, activity(a, b, FlowParams{}));
}

}  // namespace
}  // namespace vidstruct
