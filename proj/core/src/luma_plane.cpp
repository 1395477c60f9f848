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

#include "vidstruct/luma_plane.hpp"

#include <algorithm>
#include <string>

#include "vidstruct/error.hpp"

namespace vidstruct {

std::string_view to_string(PlaneOrigin origin) {
  switch (origin) {
    case PlaneOrigin::kFullFrame:
      return "full_frame";
    case PlaneOrigin::kUpperField:
      return "upper_field";
    case PlaneOrigin::kLowerField:
      return "lower_field";
    case PlaneOrigin::kDerived:
      return "derived";
  }
  return "unknown";
}

namespace {

void check_dims(int width, int height) {
  if (width < kMinPlaneSide || height < kMinPlaneSide) {
    throw PreconditionError("plane " + std::to_string(width) + "x" + std::to_string(height) +
                            " is below the minimum analyzable size of " +
                            std::to_string(kMinPlaneSide) + "x" + std::to_string(kMinPlaneSide));
  }
}

}  // namespace

LumaPlane::LumaPlane(int width, int height, PlaneOrigin origin, std::uint8_t fill)
    : width_(width), height_(height), origin_(origin) {
  check_dims(width, height);
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

LumaPlane::LumaPlane(int width, int height, std::vector<std::uint8_t> data, PlaneOrigin origin)
    : width_(width), height_(height), origin_(origin), data_(std::move(data)) {
  check_dims(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw PreconditionError("plane data length " + std::to_string(data_.size()) +
                            " does not match " + std::to_string(width) + "x" +
                            std::to_string(height));
  }
}

std::pair<LumaPlane, LumaPlane> split_fields(const LumaPlane& frame) {
  if (frame.height() % 2 != 0) {
    throw PreconditionError("split_fields needs an even-height frame, got height " +
                            std::to_string(frame.height()));
  }
  if (frame.origin() != PlaneOrigin::kFullFrame) {
    throw PreconditionError("split_fields needs a full frame, got " +
                            std::string(to_string(frame.origin())));
  }
  const int half = frame.height() / 2;
  LumaPlane upper(frame.width(), half, PlaneOrigin::kUpperField);
  LumaPlane lower(frame.width(), half, PlaneOrigin::kLowerField);
  for (int y = 0; y < half; ++y) {
    std::ranges::copy(frame.row(2 * y), upper.row(y).begin());
    std::ranges::copy(frame.row(2 * y + 1), lower.row(y).begin());
  }
  return {std::move(upper), std::move(lower)};
}

LumaPlane interleave_fields(const LumaPlane& upper, const LumaPlane& lower) {
  if (upper.width() != lower.width() || upper.height() != lower.height()) {
    throw PreconditionError("interleave_fields needs fields of identical size");
  }
  LumaPlane frame(upper.width(), upper.height() * 2, PlaneOrigin::kFullFrame);
  for (int y = 0; y < upper.height(); ++y) {
    std::ranges::copy(upper.row(y), frame.row(2 * y).begin());
    std::ranges::copy(lower.row(y), frame.row(2 * y + 1).begin());
  }
  return frame;
}

int analysis_factor(int width, int height, int max_long_side) {
  if (max_long_side < 64) {
    throw PreconditionError("max_long_side must be >= 64, got " + std::to_string(max_long_side));
  }
  const int long_side = std::max(width, height);
  int factor = 1;
  while (long_side / factor > max_long_side) ++factor;
  return factor;
}

LumaPlane downscale_for_analysis(const LumaPlane& plane, int max_long_side) {
  const int factor = analysis_factor(plane.width(), plane.height(), max_long_side);
  if (factor == 1) return plane;

  const int out_w = plane.width() / factor;
  const int out_h = plane.height() / factor;
  const int area = factor * factor;
  std::vector<std::uint32_t> acc(static_cast<std::size_t>(out_w));
  LumaPlane out(out_w, out_h, PlaneOrigin::kDerived);
  for (int oy = 0; oy < out_h; ++oy) {
    std::ranges::fill(acc, 0u);
    for (int dy = 0; dy < factor; ++dy) {
      const auto src = plane.row(oy * factor + dy);
      for (int ox = 0; ox < out_w; ++ox) {
        const std::uint8_t* p = src.data() + static_cast<std::size_t>(ox) * factor;
        std::uint32_t s = 0;
        for (int dx = 0; dx < factor; ++dx) s += p[dx];
        acc[ox] += s;
      }
    }
    auto dst = out.row(oy);
    for (int ox = 0; ox < out_w; ++ox) {
      dst[ox] = static_cast<std::uint8_t>((acc[ox] + area / 2) / area);
    }
  }
  return out;
}

LumaPlane crop_to_even_height(const LumaPlane& plane) {
  if (plane.height() % 2 == 0) return plane;
  const auto src = plane.data();
  std::vector<std::uint8_t> data(src.begin(),
                                 src.begin() + static_cast<std::ptrdiff_t>(plane.width()) *
                                                   (plane.height() - 1));
  return LumaPlane(plane.width(), plane.height() - 1, std::move(data), plane.origin());
}

}  // namespace vidstruct
