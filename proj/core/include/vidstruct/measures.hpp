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

#ifndef VIDSTRUCT_MEASURES_HPP_
#define VIDSTRUCT_MEASURES_HPP_

#include "vidstruct/flow.hpp"
#include "vidstruct/histogram.hpp"
#include "vidstruct/luma_plane.hpp"

namespace vidstruct {

class ThreadPool;

/// Motion magnitude (at analysis resolution) at which the normalized AMM saturates.
inline constexpr double kAmmCeiling = 24.0;

/// Side of the square blocks the SWR dissimilarity is computed on.
inline constexpr int kNccBlock = 16;

/// Blocks whose intensity stddev falls below this are treated as flat.
inline constexpr double kFlatBlockStddev = 1.0;

struct ActivityValue {
  double amm_raw = 0.0;   // pixels
  double amm_norm = 0.0;  // min(amm_raw / kAmmCeiling, 1)
  double swr = 0.0;       // 1 - mean block NCC of reference vs. warped moving
  double act = 0.0;       // sqrt(amm_norm * swr)

  friend bool operator==(const ActivityValue&, const ActivityValue&) = default;
};

/// output(x, y) = bilinear sample of moving at (x + dx, y + dy), clamped to
/// the plane edge.
LumaPlane warp(const LumaPlane& moving, const MotionField& field);

/// 1 - mean over 16x16 blocks of clamp(NCC, 0, 1). Partial edge blocks are
/// dropped. Flat blocks score 1 if both sides are flat, 0 otherwise.
double swr(const LumaPlane& reference, const LumaPlane& warped);

/// Geometric combination of normalized motion magnitude and motion-compensated
/// dissimilarity: near zero for well-compensated pairs from one shot.
ActivityValue activity(const LumaPlane& reference, const LumaPlane& moving,
                       const FlowParams& params, ThreadPool* pool = nullptr);

/// Builds an ActivityValue from its two factors.
ActivityValue combine_activity(double amm_raw, double swr_value);

}  // namespace vidstruct

#endif  // VIDSTRUCT_MEASURES_HPP_
