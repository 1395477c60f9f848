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

#ifndef VIDSTRUCT_SYNTHGEN_HPP_
#define VIDSTRUCT_SYNTHGEN_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vidstruct/frame_io.hpp"
#include "vidstruct/luma_plane.hpp"

namespace vidstruct::synth {

/// One camera take: a periodic band-limited noise texture translated at a
/// constant velocity.
struct SceneSpec {
  std::uint32_t texture_seed = 1;
  double pan_x = 0.0;  // content motion, px per frame (quantized to 1/16 px)
  double pan_y = 0.0;
  double contrast = 1.0;
};

struct Transition {
  enum class Kind : std::uint8_t { kHardcut, kDissolve };
  Kind kind = Kind::kHardcut;
  int blend_frames = 0;  // dissolve only, 1..3 for "short" dissolves
};

struct Segment {
  SceneSpec scene;
  int length = 0;  // pure frames of this scene, blends excluded
  Transition transition_out;
};

enum class Packing : std::uint8_t { kProgressive, kWeaveTff, kWeaveBff, kPulldown32 };

std::string_view to_string(Packing packing);

struct Degradations {
  double flicker_amplitude = 0.0;
  int flicker_period = 10;
  double noise_sigma = 0.0;
  std::uint32_t noise_seed = 1;
  std::vector<std::int64_t> flash_frames;
  double flash_gain = 1.4;
};

struct ClipScript {
  std::string name = "clip";
  int width = 512;
  int height = 384;
  Rational frame_rate{25, 1};
  Packing packing = Packing::kProgressive;
  int pulldown_phase = 0;
  std::vector<Segment> segments;
  Degradations degradations;
};

/// Ground-truth boundary: last outgoing frame and the transition length K
/// (1 for a hardcut, blend_frames + 1 for a dissolve).
struct Boundary {
  std::int64_t t = 0;
  int k = 1;
  friend bool operator==(const Boundary&, const Boundary&) = default;
};

struct ShotSpan {
  std::int64_t start = 0;
  std::int64_t end = 0;  // inclusive
  friend bool operator==(const ShotSpan&, const ShotSpan&) = default;
};

/// Labels derived from the script alone, never from rendered pixels.
struct GroundTruth {
  std::int64_t frame_count = 0;
  std::vector<Boundary> boundaries;
  std::vector<ShotSpan> shots;
  Packing packing = Packing::kProgressive;
  int pulldown_phase = 0;
  std::vector<bool> combed;  // per frame, pulldown clips only
};

/// 3:2 cadence: clean, clean, combed, combed, clean.
inline constexpr bool kPulldownMask[5] = {false, false, true, true, false};

/// Parses the key-value clip script format. Throws ConfigError with a
/// line-numbered message on malformed input.
ClipScript parse_script(std::string_view text, std::string_view source = "<script>");
ClipScript load_script(const std::string& path);

GroundTruth ground_truth(const ClipScript& script);

/// Frame-by-frame renderer. Output is a pure function of the script:
/// all pixel arithmetic is integer or fixed point.
class Renderer {
 public:
  explicit Renderer(ClipScript script);
  ~Renderer();
  Renderer(Renderer&&) noexcept;
  Renderer& operator=(Renderer&&) noexcept;

  const ClipScript& script() const;
  const GroundTruth& truth() const;
  std::int64_t frame_count() const;

  /// Renders frame `index` in [0, frame_count()).
  LumaPlane frame(std::int64_t index) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<LumaPlane> render_all(const ClipScript& script);

/// Per-frame gain 1 + A sin(2 pi t / P) and flash gain, then Gaussian noise,
/// both clipped to [0, 255]. Identity when A = 0, sigma = 0 and no flash.
LumaPlane degrade(const LumaPlane& frame, std::int64_t index, const Degradations& d);

/// Seeded periodic texture (1024x1024), mean 128, stddev 40 * contrast before clipping.
LumaPlane make_texture(std::uint32_t seed, double contrast);

/// FrameSource over a rendered script, so the analyzer can run without files.
std::unique_ptr<FrameSource> make_source(const ClipScript& script);

/// Writes the clip to Y4M and its ground truth to a JSON sidecar.
void write_clip(const ClipScript& script, const std::string& y4m_path,
                const std::string& truth_path);
std::string truth_to_json(const ClipScript& script, const GroundTruth& truth);

}  // namespace vidstruct::synth

#endif  // VIDSTRUCT_SYNTHGEN_HPP_
