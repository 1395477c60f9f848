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

#ifndef VIDSTRUCT_FLOW_HPP_
#define VIDSTRUCT_FLOW_HPP_

#include <vector>

#include "vidstruct/luma_plane.hpp"

namespace vidstruct {

class ThreadPool;

/// Parameters of the patch-based inverse-search flow.
struct FlowParams {
  int pyramid_levels = 0;  // 0: as many as keep the coarsest long side >= 32
  int patch_size = 8;
  int patch_stride = 4;
  int iterations_per_patch = 12;
  float max_displacement_per_level = 4.0F;

  void validate() const;
};

/// Dense per-pixel displacement on the reference grid:
/// moving(x + dx, y + dy) ~ reference(x, y).
struct MotionField {
  int width = 0;
  int height = 0;
  std::vector<float> dx;
  std::vector<float> dy;

  float dx_at(int x, int y) const { return dx[static_cast<std::size_t>(y) * width + x]; }
  float dy_at(int x, int y) const { return dy[static_cast<std::size_t>(y) * width + x]; }

  static MotionField uniform(int width, int height, float dx, float dy);
};

/// Number of pyramid levels compute_flow uses for a plane of this size.
int flow_levels(int width, int height, const FlowParams& params);

/// Upper bound on any displacement magnitude compute_flow can produce.
float search_radius_total(int width, int height, const FlowParams& params);

/// Coarse-to-fine dense inverse search. Each level refines a grid of
/// overlapping patches with inverse-compositional Gauss-Newton steps on
/// mean-normalized intensities, then densifies by residual-weighted
/// averaging of the overlapping patch displacements.
MotionField compute_flow(const LumaPlane& reference, const LumaPlane& moving,
                         const FlowParams& params, ThreadPool* pool = nullptr);

/// Mean displacement magnitude over all pixels.
double average_magnitude(const MotionField& field);

}  // namespace vidstruct

#endif  // VIDSTRUCT_FLOW_HPP_
