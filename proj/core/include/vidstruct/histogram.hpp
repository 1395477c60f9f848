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

#ifndef VIDSTRUCT_HISTOGRAM_HPP_
#define VIDSTRUCT_HISTOGRAM_HPP_

#include <array>
#include <cstdint>

#include "vidstruct/luma_plane.hpp"

namespace vidstruct {

struct Histogram {
  std::array<std::uint64_t, 256> bins{};
  std::uint64_t total = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double mad = 0.0;  // mean absolute deviation from the mean
};

/// Intensity histogram; the moments are derived from the bins.
Histogram histogram(const LumaPlane& plane);

/// L1 distance between the two histograms normalized to unit mass, in [0, 2].
double normalized_l1(const Histogram& a, const Histogram& b);

}  // namespace vidstruct

#endif  // VIDSTRUCT_HISTOGRAM_HPP_
