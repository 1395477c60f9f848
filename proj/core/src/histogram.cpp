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

#include "vidstruct/histogram.hpp"

#include <cmath>

namespace vidstruct {

Histogram histogram(const LumaPlane& plane) {
  Histogram h;
  for (const std::uint8_t v : plane.data()) ++h.bins[v];
  h.total = plane.size();
  if (h.total == 0) return h;

  const double n = static_cast<double>(h.total);
  double sum = 0.0;
  for (int v = 0; v < 256; ++v) sum += static_cast<double>(h.bins[v]) * v;
  h.mean = sum / n;

  double sq = 0.0;
  double abs_dev = 0.0;
  for (int v = 0; v < 256; ++v) {
    if (h.bins[v] == 0) continue;
    const double d = v - h.mean;
    const double c = static_cast<double>(h.bins[v]);
    sq += c * d * d;
    abs_dev += c * std::abs(d);
  }
  h.stddev = std::sqrt(sq / n);
  h.mad = abs_dev / n;
  return h;
}

double normalized_l1(const Histogram& a, const Histogram& b) {
  if (a.total == 0 || b.total == 0) return a.total == b.total ? 0.0 : 2.0;
  const double na = static_cast<double>(a.total);
  const double nb = static_cast<double>(b.total);
  double d = 0.0;
  for (int v = 0; v < 256; ++v) d += std::abs(static_cast<double>(a.bins[v]) / na -
                                              static_cast<double>(b.bins[v]) / nb);
  return d;
}

}  // namespace vidstruct
