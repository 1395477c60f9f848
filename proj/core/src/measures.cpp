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

#include "vidstruct/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vidstruct/error.hpp"

namespace vidstruct {

LumaPlane warp(const LumaPlane& moving, const MotionField& field) {
  if (field.width != moving.width() || field.height != moving.height()) {
    throw PreconditionError("warp: motion field grid does not match the plane");
  }
  const int w = moving.width();
  const int h = moving.height();
  LumaPlane out(w, h, PlaneOrigin::kDerived);
  const auto src = moving.data();
  for (int y = 0; y < h; ++y) {
    auto dst = out.row(y);
    for (int x = 0; x < w; ++x) {
      const float sx = std::clamp(static_cast<float>(x) + field.dx_at(x, y), 0.0F,
                                  static_cast<float>(w - 1));
      const float sy = std::clamp(static_cast<float>(y) + field.dy_at(x, y), 0.0F,
                                  static_cast<float>(h - 1));
      const int x0 = static_cast<int>(sx);
      const int y0 = static_cast<int>(sy);
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const float fx = sx - static_cast<float>(x0);
      const float fy = sy - static_cast<float>(y0);
      const auto p = [&](int xx, int yy) {
        return static_cast<float>(src[static_cast<std::size_t>(yy) * w + xx]);
      };
      const float top = p(x0, y0) + fx * (p(x1, y0) - p(x0, y0));
      const float bottom = p(x0, y1) + fx * (p(x1, y1) - p(x0, y1));
      const float v = top + fy * (bottom - top);
      dst[x] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return out;
}

double swr(const LumaPlane& reference, const LumaPlane& warped) {
  if (reference.width() != warped.width() || reference.height() != warped.height()) {
    throw PreconditionError("swr: plane sizes differ");
  }
  const int bw = reference.width() / kNccBlock;
  const int bh = reference.height() / kNccBlock;
  if (bw == 0 || bh == 0) throw PreconditionError("swr: plane smaller than one 16x16 block");

  constexpr double n = kNccBlock * kNccBlock;
  double ncc_sum = 0.0;
  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) {
      std::int64_t sa = 0;
      std::int64_t sb = 0;
      std::int64_t saa = 0;
      std::int64_t sbb = 0;
      std::int64_t sab = 0;
      for (int y = by * kNccBlock; y < (by + 1) * kNccBlock; ++y) {
        const auto ra = reference.row(y);
        const auto rb = warped.row(y);
        for (int x = bx * kNccBlock; x < (bx + 1) * kNccBlock; ++x) {
          const std::int64_t a = ra[x];
          const std::int64_t b = rb[x];
          sa += a;
          sb += b;
          saa += a * a;
          sbb += b * b;
          sab += a * b;
        }
      }
      // Integer moments keep the block statistics exact.
      const double var_a = static_cast<double>(saa * 256 - sa * sa) / (n * n);
      const double var_b = static_cast<double>(sbb * 256 - sb * sb) / (n * n);
      const double cov = static_cast<double>(sab * 256 - sa * sb) / (n * n);
      const bool flat_a = std::sqrt(var_a) < kFlatBlockStddev;
      const bool flat_b = std::sqrt(var_b) < kFlatBlockStddev;
      double ncc = 0.0;
      if (flat_a || flat_b) {
        ncc = (flat_a && flat_b) ? 1.0 : 0.0;
      } else {
        ncc = cov / std::sqrt(var_a * var_b);
      }
      ncc_sum += std::clamp(ncc, 0.0, 1.0);
    }
  }
  return 1.0 - ncc_sum / static_cast<double>(bw * bh);
}

ActivityValue combine_activity(double amm_raw, double swr_value) {
  ActivityValue a;
  a.amm_raw = amm_raw;
  a.amm_norm = std::min(amm_raw / kAmmCeiling, 1.0);
  a.swr = std::clamp(swr_value, 0.0, 1.0);
  a.act = std::sqrt(a.amm_norm * a.swr);
  return a;
}

ActivityValue activity(const LumaPlane& reference, const LumaPlane& moving,
                       const FlowParams& params, ThreadPool* pool) {
  const auto field = compute_flow(reference, moving, params, pool);
  const auto warped = warp(moving, field);
  return combine_activity(average_magnitude(field), swr(reference, warped));
}

}  // namespace vidstruct
