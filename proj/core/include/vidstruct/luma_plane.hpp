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

#ifndef VIDSTRUCT_LUMA_PLANE_HPP_
#define VIDSTRUCT_LUMA_PLANE_HPP_

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace vidstruct {

enum class PlaneOrigin : std::uint8_t { kFullFrame, kUpperField, kLowerField, kDerived };

std::string_view to_string(PlaneOrigin origin);

inline constexpr int kMinPlaneSide = 16;

/// Single-channel 8-bit image, row-major. Every measure works on these,
/// whether they hold a full frame, a field or a downscaled copy.
class LumaPlane {
 public:
  LumaPlane() = default;

  /// Throws PreconditionError when either side is below kMinPlaneSide.
  LumaPlane(int width, int height, PlaneOrigin origin = PlaneOrigin::kFullFrame,
            std::uint8_t fill = 0);
  LumaPlane(int width, int height, std::vector<std::uint8_t> data,
            PlaneOrigin origin = PlaneOrigin::kFullFrame);

  int width() const { return width_; }
  int height() const { return height_; }
  PlaneOrigin origin() const { return origin_; }
  void set_origin(PlaneOrigin origin) { origin_ = origin; }
  bool empty() const { return data_.empty(); }
  std::size_t size() const { return data_.size(); }

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> data() { return data_; }

  std::span<const std::uint8_t> row(int y) const {
    return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }
  std::span<std::uint8_t> row(int y) {
    return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
  }

  std::uint8_t at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  std::uint8_t& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }

  friend bool operator==(const LumaPlane& a, const LumaPlane& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  PlaneOrigin origin_ = PlaneOrigin::kFullFrame;
  std::vector<std::uint8_t> data_;
};

/// Upper field = rows 0,2,4,...; lower field = rows 1,3,5,...
/// Requires an even-height full frame.
std::pair<LumaPlane, LumaPlane> split_fields(const LumaPlane& frame);

/// Inverse of split_fields.
LumaPlane interleave_fields(const LumaPlane& upper, const LumaPlane& lower);

/// Smallest integer box factor that brings the long side to at most
/// max_long_side. Returns 1 when no reduction is needed.
int analysis_factor(int width, int height, int max_long_side);

/// Integer-factor box downsample. Planes already small enough are returned
/// unchanged (origin preserved); otherwise the result is tagged kDerived.
LumaPlane downscale_for_analysis(const LumaPlane& plane, int max_long_side);

/// Drops the last row of an odd-height plane.
LumaPlane crop_to_even_height(const LumaPlane& plane);

}  // namespace vidstruct

#endif  // VIDSTRUCT_LUMA_PLANE_HPP_
