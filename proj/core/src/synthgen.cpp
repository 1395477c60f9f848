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

#include "vidstruct/synthgen.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>

#include <nlohmann/json.hpp>

#include "vidstruct/error.hpp"
#include "vidstruct/keyvalue.hpp"

namespace vidstruct::synth {

std::string_view to_string(Packing packing) {
  switch (packing) {
    case Packing::kProgressive:
      return "progressive";
    case Packing::kWeaveTff:
      return "weave_tff";
    case Packing::kWeaveBff:
      return "weave_bff";
    case Packing::kPulldown32:
      return "pulldown_3_2";
  }
  return "progressive";
}

namespace {

constexpr int kTextureBits = 10;
constexpr int kTextureSize = 1 << kTextureBits;
constexpr int kTextureMask = kTextureSize - 1;

// Field slots of the 3:2 unit A1A2 | B1B2 | B3C1 | C2D1 | D2D3: film frame
// offset feeding the upper and lower field at each cadence position.
constexpr int kUpperFilm[5] = {0, 1, 1, 2, 3};
constexpr int kLowerFilm[5] = {0, 1, 2, 3, 3};

std::int64_t div_round(std::int64_t num, std::int64_t den) {
  // den > 0
  return num >= 0 ? (num + den / 2) / den : -((-num + den / 2) / den);
}

std::int64_t isqrt(std::int64_t v) {
  if (v <= 0) return 0;
  std::int64_t x = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (x * x > v) --x;
  while ((x + 1) * (x + 1) <= v) ++x;
  return x;
}

// Wrapping box blur along rows then columns; values stay integer.
void box_blur_wrap(std::vector<std::int32_t>& img, int radius) {
  const int n = kTextureSize;
  const int width = 2 * radius + 1;
  std::vector<std::int32_t> line(n);
  for (int y = 0; y < n; ++y) {
    std::int32_t* r = img.data() + static_cast<std::size_t>(y) * n;
    std::int64_t sum = 0;
    for (int k = -radius; k <= radius; ++k) sum += r[k & kTextureMask];
    for (int x = 0; x < n; ++x) {
      line[x] = static_cast<std::int32_t>(div_round(sum, width));
      sum += r[(x + radius + 1) & kTextureMask] - r[(x - radius) & kTextureMask];
    }
    std::copy(line.begin(), line.end(), r);
  }
  for (int x = 0; x < n; ++x) {
    auto at = [&](int y) -> std::int32_t& { return img[static_cast<std::size_t>(y & kTextureMask) * n + x]; };
    std::int64_t sum = 0;
    for (int k = -radius; k <= radius; ++k) sum += at(k);
    for (int y = 0; y < n; ++y) {
      line[y] = static_cast<std::int32_t>(div_round(sum, width));
      sum += at(y + radius + 1) - at(y - radius);
    }
    for (int y = 0; y < n; ++y) at(y) = line[y];
  }
}

struct Moments {
  std::int64_t mean = 0;
  std::int64_t stddev = 1;
};

template <typename T>
Moments moments(const std::vector<T>& v) {
  std::int64_t sum = 0;
  for (const auto x : v) sum += x;
  const auto n = static_cast<std::int64_t>(v.size());
  const std::int64_t mean = div_round(sum, n);
  std::int64_t sq = 0;
  for (const auto x : v) {
    const std::int64_t d = static_cast<std::int64_t>(x) - mean;
    sq += d * d;
  }
  return {mean, std::max<std::int64_t>(1, isqrt(sq / n))};
}

std::string packing_field_order(Packing p) {
  switch (p) {
    case Packing::kWeaveTff:
      return "tff";
    case Packing::kWeaveBff:
      return "bff";
    default:
      return "not_applicable";
  }
}

}  // namespace

LumaPlane make_texture(std::uint32_t seed, double contrast) {
  // Octave radii and relative weights (x10): a 1/f-like mix so every pyramid
  // level sees gradient structure.
  constexpr int kRadii[] = {1, 2, 4, 8, 16};
  constexpr int kWeights[] = {6, 10, 10, 10, 8};
  const std::size_t count = static_cast<std::size_t>(kTextureSize) * kTextureSize;

  std::mt19937 rng(seed);
  std::vector<std::int64_t> acc(count, 0);
  std::vector<std::int32_t> octave(count);
  for (std::size_t o = 0; o < std::size(kRadii); ++o) {
    for (auto& v : octave) v = static_cast<std::int32_t>(rng() & 0xFFF);
    box_blur_wrap(octave, kRadii[o]);
    box_blur_wrap(octave, kRadii[o]);
    const auto m = moments(octave);
    // Unit stddev in 1/4096 units, weighted.
    for (std::size_t i = 0; i < count; ++i) {
      acc[i] += div_round((octave[i] - m.mean) * 4096LL * kWeights[o], m.stddev * 10);
    }
  }
  const auto m = moments(acc);
  const std::int64_t c256 = std::llround(contrast * 256.0);
  std::vector<std::uint8_t> px(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::int64_t v = 128 + div_round((acc[i] - m.mean) * 40 * c256, m.stddev * 256);
    px[i] = static_cast<std::uint8_t>(std::clamp<std::int64_t>(v, 0, 255));
  }
  return LumaPlane(kTextureSize, kTextureSize, std::move(px), PlaneOrigin::kDerived);
}

LumaPlane degrade(const LumaPlane& frame, std::int64_t index, const Degradations& d) {
  double gain = 1.0;
  if (d.flicker_amplitude != 0.0 && d.flicker_period > 0) {
    gain += d.flicker_amplitude *
            std::sin(2.0 * std::numbers::pi * static_cast<double>(index) / d.flicker_period);
  }
  if (std::ranges::find(d.flash_frames, index) != d.flash_frames.end()) gain *= d.flash_gain;
  const std::int64_t g16 = std::llround(gain * 65536.0);
  const std::int64_t s256 = std::llround(d.noise_sigma * 256.0);
  if (g16 == 65536 && s256 == 0) return frame;

  LumaPlane out = frame;
  auto px = out.data();
  if (g16 != 65536) {
    for (auto& v : px) {
      v = static_cast<std::uint8_t>(std::clamp<std::int64_t>((v * g16 + 32768) >> 16, 0, 255));
    }
  }
  if (s256 > 0) {
    std::seed_seq seq{d.noise_seed, static_cast<std::uint32_t>(index & 0xFFFFFFFF),
                      static_cast<std::uint32_t>(index >> 32)};
    std::mt19937 rng(seq);
    for (auto& v : px) {
      // Irwin-Hall: sum of 12 uniform 16-bit draws approximates N(0, 1) * 65536.
      std::int64_t z = 0;
      for (int k = 0; k < 6; ++k) {
        const std::uint32_t r = rng();
        z += (r & 0xFFFF) + (r >> 16);
      }
      z -= 6 * 65536;
      const std::int64_t noise = (z * s256 + (1LL << 23)) >> 24;
      v = static_cast<std::uint8_t>(std::clamp<std::int64_t>(v + noise, 0, 255));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Script parsing

namespace {

Packing parse_packing(const KvDocument& doc, const KvEntry& e) {
  if (e.value == "progressive") return Packing::kProgressive;
  if (e.value == "weave_tff") return Packing::kWeaveTff;
  if (e.value == "weave_bff") return Packing::kWeaveBff;
  if (e.value == "pulldown_3_2") return Packing::kPulldown32;
  kv_fail(doc, e.line, "unknown packing '" + e.value + "'");
}

Transition parse_transition(const KvDocument& doc, const KvEntry& e) {
  const auto words = kv_words(e);
  if (words.size() == 1 && words[0] == "hardcut") return {};
  if (words.size() == 2 && words[0] == "dissolve") {
    const KvEntry n{e.key, words[1], e.line};
    const auto blend = kv_int(doc, n);
    if (blend < 1) kv_fail(doc, e.line, "dissolve needs at least one blended frame");
    return {Transition::Kind::kDissolve, static_cast<int>(blend)};
  }
  kv_fail(doc, e.line, "transition must be 'hardcut' or 'dissolve <frames>', got '" + e.value + "'");
}

}  // namespace

ClipScript parse_script(std::string_view text, std::string_view source) {
  const auto doc = parse_kv(text, source);
  ClipScript s;
  s.segments.clear();
  for (const auto& e : doc.sections.front().entries) {
    if (e.key == "name") {
      s.name = e.value;
    } else if (e.key == "width") {
      s.width = static_cast<int>(kv_int(doc, e));
    } else if (e.key == "height") {
      s.height = static_cast<int>(kv_int(doc, e));
    } else if (e.key == "frame_rate") {
      const auto slash = e.value.find('/');
      if (slash == std::string::npos) kv_fail(doc, e.line, "frame_rate must be 'num/den'");
      s.frame_rate.num = kv_int(doc, KvEntry{e.key, e.value.substr(0, slash), e.line});
      s.frame_rate.den = kv_int(doc, KvEntry{e.key, e.value.substr(slash + 1), e.line});
      if (s.frame_rate.num <= 0 || s.frame_rate.den <= 0) kv_fail(doc, e.line, "frame_rate must be positive");
    } else if (e.key == "packing") {
      s.packing = parse_packing(doc, e);
    } else if (e.key == "pulldown_phase") {
      s.pulldown_phase = static_cast<int>(kv_int(doc, e));
      if (s.pulldown_phase < 0 || s.pulldown_phase > 4) kv_fail(doc, e.line, "pulldown_phase must be 0..4");
    } else if (e.key == "flicker_amplitude") {
      s.degradations.flicker_amplitude = kv_double(doc, e);
    } else if (e.key == "flicker_period") {
      s.degradations.flicker_period = static_cast<int>(kv_int(doc, e));
      if (s.degradations.flicker_period < 1) kv_fail(doc, e.line, "flicker_period must be >= 1");
    } else if (e.key == "noise_sigma") {
      s.degradations.noise_sigma = kv_double(doc, e);
      if (s.degradations.noise_sigma < 0) kv_fail(doc, e.line, "noise_sigma must be >= 0");
    } else if (e.key == "noise_seed") {
      s.degradations.noise_seed = static_cast<std::uint32_t>(kv_int(doc, e));
    } else if (e.key == "flash_frames") {
      for (const double f : kv_double_list(doc, e)) {
        s.degradations.flash_frames.push_back(static_cast<std::int64_t>(f));
      }
    } else if (e.key == "flash_gain") {
      s.degradations.flash_gain = kv_double(doc, e);
    } else {
      kv_fail(doc, e.line, "unknown key '" + e.key + "'");
    }
  }
  if (s.width < kMinPlaneSide || s.height < kMinPlaneSide) {
    kv_fail(doc, 1, "width and height must be >= 16");
  }
  if (s.height % 2 != 0) kv_fail(doc, 1, "height must be even");

  for (std::size_t i = 1; i < doc.sections.size(); ++i) {
    const auto& sec = doc.sections[i];
    if (sec.name != "segment") kv_fail(doc, sec.line, "unknown section [" + sec.name + "]");
    Segment seg;
    bool have_length = false;
    for (const auto& e : sec.entries) {
      if (e.key == "seed") {
        seg.scene.texture_seed = static_cast<std::uint32_t>(kv_int(doc, e));
      } else if (e.key == "length") {
        seg.length = static_cast<int>(kv_int(doc, e));
        have_length = true;
      } else if (e.key == "pan") {
        const auto v = kv_double_list(doc, e);
        if (v.size() != 2) kv_fail(doc, e.line, "pan expects 'x, y'");
        seg.scene.pan_x = v[0];
        seg.scene.pan_y = v[1];
      } else if (e.key == "contrast") {
        seg.scene.contrast = kv_double(doc, e);
        if (seg.scene.contrast <= 0) kv_fail(doc, e.line, "contrast must be > 0");
      } else if (e.key == "transition") {
        seg.transition_out = parse_transition(doc, e);
      } else {
        kv_fail(doc, e.line, "unknown segment key '" + e.key + "'");
      }
    }
    if (!have_length || seg.length < 1) kv_fail(doc, sec.line, "segment needs length >= 1");
    s.segments.push_back(seg);
  }
  if (s.segments.empty()) kv_fail(doc, 1, "script has no [segment] sections");
  return s;
}

ClipScript load_script(const std::string& path) {
  const auto doc_text = [&] {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read script " + path);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }();
  return parse_script(doc_text, path);
}

// ---------------------------------------------------------------------------
// Frame plan and ground truth

namespace {

struct FramePlan {
  int seg_a = -1;
  int seg_b = -1;  // incoming scene of a blend, -1 otherwise
  int alpha_num = 0;
  int alpha_den = 1;
};

struct Layout {
  std::vector<FramePlan> frames;
  std::vector<std::int64_t> scene_first;  // per segment
  GroundTruth truth;
};

Layout layout(const ClipScript& s) {
  Layout l;
  l.truth.packing = s.packing;
  l.truth.pulldown_phase = s.packing == Packing::kPulldown32 ? s.pulldown_phase : 0;
  l.scene_first.assign(s.segments.size(), 0);
  std::int64_t cursor = 0;
  for (std::size_t i = 0; i < s.segments.size(); ++i) {
    const auto& seg = s.segments[i];
    if (i == 0) l.scene_first[i] = 0;
    const std::int64_t pure_start = cursor;
    for (int k = 0; k < seg.length; ++k) l.frames.push_back({static_cast<int>(i), -1, 0, 1});
    cursor += seg.length;
    l.truth.shots.push_back({pure_start, cursor - 1});
    if (i + 1 == s.segments.size()) break;
    const int blend = seg.transition_out.kind == Transition::Kind::kDissolve
                          ? seg.transition_out.blend_frames
                          : 0;
    l.truth.boundaries.push_back({cursor - 1, blend + 1});
    l.scene_first[i + 1] = cursor;
    for (int j = 1; j <= blend; ++j) {
      l.frames.push_back({static_cast<int>(i), static_cast<int>(i + 1), j, blend + 1});
    }
    cursor += blend;
  }
  l.truth.frame_count = cursor;
  if (s.packing == Packing::kPulldown32) {
    l.truth.combed.resize(static_cast<std::size_t>(cursor));
    for (std::int64_t f = 0; f < cursor; ++f) {
      const auto& fp = l.frames[static_cast<std::size_t>(f)];
      auto moving = [&](int seg) {
        return seg >= 0 && (s.segments[seg].scene.pan_x != 0.0 || s.segments[seg].scene.pan_y != 0.0);
      };
      l.truth.combed[static_cast<std::size_t>(f)] =
          kPulldownMask[(f + s.pulldown_phase) % 5] && (moving(fp.seg_a) || moving(fp.seg_b));
    }
  }
  return l;
}

}  // namespace

GroundTruth ground_truth(const ClipScript& script) { return layout(script).truth; }

// ---------------------------------------------------------------------------
// Renderer

struct Renderer::Impl {
  ClipScript script;
  Layout plan;
  std::map<std::pair<std::uint32_t, std::int64_t>, LumaPlane> textures;
  std::vector<const LumaPlane*> seg_texture;
  std::vector<std::int64_t> vx16;
  std::vector<std::int64_t> vy16;

  explicit Impl(ClipScript s) : script(std::move(s)), plan(layout(script)) {
    for (const auto& seg : script.segments) {
      const auto key = std::make_pair(seg.scene.texture_seed, std::llround(seg.scene.contrast * 256.0));
      auto it = textures.find(key);
      if (it == textures.end()) {
        it = textures.emplace(key, make_texture(seg.scene.texture_seed, seg.scene.contrast)).first;
      }
      seg_texture.push_back(&it->second);
      vx16.push_back(std::llround(seg.scene.pan_x * 16.0));
      vy16.push_back(std::llround(seg.scene.pan_y * 16.0));
    }
  }

  // Time of a row, in half-frame units of scene-local time.
  std::int64_t row_time(int seg, std::int64_t frame, int row) const {
    const std::int64_t local = frame - plan.scene_first[static_cast<std::size_t>(seg)];
    const bool even = row % 2 == 0;
    switch (script.packing) {
      case Packing::kProgressive:
        return 2 * local;
      case Packing::kWeaveTff:
        return 2 * local + (even ? 0 : 1);
      case Packing::kWeaveBff:
        return 2 * local + (even ? 1 : 0);
      case Packing::kPulldown32: {
        auto film = [&](std::int64_t f, bool upper) {
          const std::int64_t c = f + script.pulldown_phase;
          return 4 * (c / 5) + (upper ? kUpperFilm[c % 5] : kLowerFilm[c % 5]);
        };
        const std::int64_t first = plan.scene_first[static_cast<std::size_t>(seg)];
        return 2 * (film(frame, even) - film(first, true));
      }
    }
    return 2 * local;
  }

  void render_scene(int seg, std::int64_t frame, std::vector<std::uint8_t>& out) const {
    const LumaPlane& tex = *seg_texture[static_cast<std::size_t>(seg)];
    const auto t = tex.data();
    const int w = script.width;
    for (int y = 0; y < script.height; ++y) {
      const std::int64_t h = row_time(seg, frame, y);
      // Positions in 1/32 px: velocity is in 1/16 px per frame, time in half frames.
      const std::int64_t px = -vx16[static_cast<std::size_t>(seg)] * h;
      const std::int64_t py = static_cast<std::int64_t>(y) * 32 - vy16[static_cast<std::size_t>(seg)] * h;
      const std::int64_t iy = py >> 5;
      const std::int64_t fy = py & 31;
      const std::size_t r0 = static_cast<std::size_t>(iy & kTextureMask) * kTextureSize;
      const std::size_t r1 = static_cast<std::size_t>((iy + 1) & kTextureMask) * kTextureSize;
      std::uint8_t* dst = out.data() + static_cast<std::size_t>(y) * w;
      for (int x = 0; x < w; ++x) {
        const std::int64_t qx = static_cast<std::int64_t>(x) * 32 + px;
        const std::int64_t ix = qx >> 5;
        const std::int64_t fx = qx & 31;
        const std::size_t c0 = static_cast<std::size_t>(ix & kTextureMask);
        const std::size_t c1 = static_cast<std::size_t>((ix + 1) & kTextureMask);
        const std::int64_t v = t[r0 + c0] * (32 - fx) * (32 - fy) + t[r0 + c1] * fx * (32 - fy) +
                               t[r1 + c0] * (32 - fx) * fy + t[r1 + c1] * fx * fy;
        dst[x] = static_cast<std::uint8_t>((v + 512) >> 10);
      }
    }
  }
};

Renderer::Renderer(ClipScript script) : impl_(std::make_unique<Impl>(std::move(script))) {}
Renderer::~Renderer() = default;
Renderer::Renderer(Renderer&&) noexcept = default;
Renderer& Renderer::operator=(Renderer&&) noexcept = default;

const ClipScript& Renderer::script() const { return impl_->script; }
const GroundTruth& Renderer::truth() const { return impl_->plan.truth; }
std::int64_t Renderer::frame_count() const { return impl_->plan.truth.frame_count; }

LumaPlane Renderer::frame(std::int64_t index) const {
  if (index < 0 || index >= frame_count()) throw PreconditionError("frame index out of range");
  const auto& s = impl_->script;
  const auto& fp = impl_->plan.frames[static_cast<std::size_t>(index)];
  std::vector<std::uint8_t> a(static_cast<std::size_t>(s.width) * s.height);
  impl_->render_scene(fp.seg_a, index, a);
  if (fp.seg_b >= 0) {
    std::vector<std::uint8_t> b(a.size());
    impl_->render_scene(fp.seg_b, index, b);
    const int num = fp.alpha_num;
    const int den = fp.alpha_den;
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = static_cast<std::uint8_t>((a[i] * (den - num) + b[i] * num + den / 2) / den);
    }
  }
  return degrade(LumaPlane(s.width, s.height, std::move(a)), index, s.degradations);
}

std::vector<LumaPlane> render_all(const ClipScript& script) {
  Renderer r(script);
  std::vector<LumaPlane> frames;
  frames.reserve(static_cast<std::size_t>(r.frame_count()));
  for (std::int64_t i = 0; i < r.frame_count(); ++i) frames.push_back(r.frame(i));
  return frames;
}

namespace {

DeclaredInterlacing declared(Packing p) {
  switch (p) {
    case Packing::kProgressive:
      return DeclaredInterlacing::kProgressive;
    case Packing::kWeaveTff:
      return DeclaredInterlacing::kTff;
    case Packing::kWeaveBff:
      return DeclaredInterlacing::kBff;
    case Packing::kPulldown32:
      return DeclaredInterlacing::kUnknown;
  }
  return DeclaredInterlacing::kUnknown;
}

class SyntheticSource final : public FrameSource {
 public:
  explicit SyntheticSource(const ClipScript& script)
      : FrameSource(make_info(script)), renderer_(script) {}

 protected:
  std::optional<LumaPlane> read_frame(std::int64_t index) override {
    if (index >= renderer_.frame_count()) return std::nullopt;
    return renderer_.frame(index);
  }

 private:
  static SourceInfo make_info(const ClipScript& s) {
    SourceInfo info;
    info.path = "synth:" + s.name;
    info.frame_width = s.width;
    info.frame_height = s.height;
    info.frame_rate = s.frame_rate;
    info.declared_interlacing = declared(s.packing);
    info.frame_count = ground_truth(s).frame_count;
    info.colorspace = "mono";
    return info;
  }

  Renderer renderer_;
};

}  // namespace

std::unique_ptr<FrameSource> make_source(const ClipScript& script) {
  return std::make_unique<SyntheticSource>(script);
}

std::string truth_to_json(const ClipScript& script, const GroundTruth& truth) {
  nlohmann::ordered_json j;
  j["name"] = script.name;
  j["width"] = script.width;
  j["height"] = script.height;
  j["frame_rate"] = to_string(script.frame_rate);
  j["frame_count"] = truth.frame_count;
  j["packing"] = std::string(to_string(truth.packing));
  j["field_order"] = packing_field_order(truth.packing);
  if (truth.packing == Packing::kPulldown32) {
    j["pulldown_phase"] = truth.pulldown_phase;
  } else {
    j["pulldown_phase"] = nullptr;
  }
  auto& b = j["boundaries"] = nlohmann::ordered_json::array();
  for (const auto& x : truth.boundaries) b.push_back({{"t", x.t}, {"K", x.k}});
  auto& sh = j["shots"] = nlohmann::ordered_json::array();
  for (const auto& x : truth.shots) sh.push_back({{"start_frame", x.start}, {"end_frame", x.end}});
  if (truth.packing == Packing::kPulldown32) {
    auto& m = j["combed_mask"] = nlohmann::ordered_json::array();
    for (const bool c : truth.combed) m.push_back(c ? 1 : 0);
  }
  return j.dump(2) + "\n";
}

void write_clip(const ClipScript& script, const std::string& y4m_path,
                const std::string& truth_path) {
  Renderer r(script);
  Y4mWriter writer(y4m_path, script.width, script.height, script.frame_rate,
                   declared(script.packing));
  for (std::int64_t i = 0; i < r.frame_count(); ++i) writer.write(r.frame(i));
  std::ofstream out(truth_path);
  if (!out) throw InputError("cannot create " + truth_path);
  out << truth_to_json(script, r.truth());
}

}  // namespace vidstruct::synth
