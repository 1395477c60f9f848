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

#ifndef VIDSTRUCT_MEASURE_CACHE_HPP_
#define VIDSTRUCT_MEASURE_CACHE_HPP_

#include <compare>
#include <cstdint>
#include <deque>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <set>

#include "vidstruct/flow.hpp"
#include "vidstruct/histogram.hpp"
#include "vidstruct/luma_plane.hpp"
#include "vidstruct/measures.hpp"

namespace vidstruct {

class ThreadPool;

enum class PlaneKind : std::uint8_t { kFrame, kUpperField, kLowerField };

struct PlaneId {
  std::int64_t frame = 0;
  PlaneKind kind = PlaneKind::kFrame;
  int scale = 1;  // integer downscale factor of the analysis resolution

  friend auto operator<=>(const PlaneId&, const PlaneId&) = default;
};

enum class MeasureKind : std::uint8_t { kHistogram, kActivity };

struct MeasureKey {
  MeasureKind kind = MeasureKind::kHistogram;
  PlaneId a;
  std::optional<PlaneId> b;  // activity only; reference is a

  friend auto operator<=>(const MeasureKey&, const MeasureKey&) = default;
};

struct KindCounters {
  std::int64_t computed = 0;
  std::int64_t served_from_cache = 0;
};

struct CacheStats {
  KindCounters histogram;
  KindCounters activity;
  std::int64_t evicted = 0;
  std::int64_t recomputed = 0;  // computations of a key that had been computed before
  std::int64_t peak_resident_frames = 0;
};

/// Planes of one frame at analysis resolution. Fields are absent when the
/// frame is too small to split.
struct FramePlanes {
  LumaPlane frame;
  std::optional<LumaPlane> upper;
  std::optional<LumaPlane> lower;
};

/// Memoizes histograms and activity values over a sliding window of frames.
/// get_* may be called concurrently; add_frame and advance_window belong to a
/// single driver thread.
class MeasureCache {
 public:
  MeasureCache(FlowParams flow, ThreadPool* pool = nullptr, bool enabled = true);

  /// Frames must arrive in order starting at 0.
  void add_frame(std::int64_t index, FramePlanes planes, int scale = 1);

  bool resident(const PlaneId& id) const;
  /// Throws WindowError when the plane is not resident.
  const LumaPlane& plane(const PlaneId& id) const;

  Histogram get_histogram(const PlaneId& id);
  ActivityValue get_activity(const PlaneId& reference, const PlaneId& moving);

  /// Drops frames below `oldest_needed` and every entry whose operands all lie
  /// below it. Returns the number of entries dropped.
  std::int64_t advance_window(std::int64_t oldest_needed);

  std::int64_t watermark() const { return watermark_; }
  std::int64_t next_frame() const { return watermark_ + static_cast<std::int64_t>(frames_.size()); }
  std::int64_t resident_frames() const { return static_cast<std::int64_t>(frames_.size()); }
  CacheStats stats() const;
  bool enabled() const { return enabled_; }

 private:
  template <typename T>
  using Table = std::map<MeasureKey, std::shared_future<T>>;

  template <typename T, typename Fn>
  T lookup(Table<T>& table, const MeasureKey& key, KindCounters& counters, Fn&& compute);

  FlowParams flow_;
  ThreadPool* pool_;
  bool enabled_;
  int scale_ = 1;
  std::int64_t watermark_ = 0;
  std::int64_t requested_ = 0;
  std::deque<FramePlanes> frames_;

  mutable std::mutex mutex_;
  Table<Histogram> histograms_;
  Table<ActivityValue> activities_;
  std::set<MeasureKey> ever_computed_;
  CacheStats stats_;
};

}  // namespace vidstruct

#endif  // VIDSTRUCT_MEASURE_CACHE_HPP_
