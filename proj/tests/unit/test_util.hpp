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

// Shared fixtures for the unit tests.

#ifndef VIDSTRUCT_TESTS_TEST_UTIL_HPP_
#define VIDSTRUCT_TESTS_TEST_UTIL_HPP_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "vidstruct/luma_plane.hpp"
#include "vidstruct/synthgen.hpp"

namespace vidstruct::testing {

/// Window of a seeded synthetic texture, wrapping at the texture edge.
/// (dx, dy) moves the window, so content appears shifted by (-dx, -dy).
inline LumaPlane textured(int width, int height, std::uint32_t seed, int dx = 0, int dy = 0,
                          double contrast = 1.0) {
  static thread_local std::uint32_t cached_seed = 0;
  static thread_local double cached_contrast = -1.0;
  static thread_local LumaPlane texture;
  if (texture.empty() || cached_seed != seed || cached_contrast != contrast) {
    texture = synth::make_texture(seed, contrast);
    cached_seed = seed;
    cached_contrast = contrast;
  }
  const int tw = texture.width();
  const int th = texture.height();
  LumaPlane out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      out.at(x, y) = texture.at(((x + dx) % tw + tw) % tw, ((y + dy) % th + th) % th);
    }
  }
  return out;
}

/// Independent uniform noise, no spatial correlation.
inline LumaPlane noise_plane(int width, int height, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dist(0, 255);
  LumaPlane out(width, height);
  for (auto& px : out.data()) px = static_cast<std::uint8_t>(dist(rng));
  return out;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("vidstruct_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace vidstruct::testing

#endif  // VIDSTRUCT_TESTS_TEST_UTIL_HPP_
