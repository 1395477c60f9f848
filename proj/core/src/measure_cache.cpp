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

#include "vidstruct/measure_cache.hpp"

#include <algorithm>
#include <exception>
#include <string>

#include "vidstruct/error.hpp"

namespace vidstruct {
namespace {

std::string describe(const PlaneId& id) {
  static constexpr const char* kNames[] = {"frame", "upper", "lower"};
  return std::string(kNames[static_cast<int>(id.kind)]) + " plane of frame " +
         std::to_string(id.frame) + " at scale " + std::to_string(id.scale);
}

std::int64_t newest_frame(const MeasureKey& key) {
  return key.b ? std::max(key.a.frame, key.b->frame) : key.a.frame;
}

}  // namespace

MeasureCache::MeasureCache(FlowParams flow, ThreadPool* pool, bool enabled)
    : flow_(flow), pool_(pool), enabled_(enabled) {
  flow_.validate();
}

void MeasureCache::add_frame(std::int64_t index, FramePlanes planes, int scale) {
  if (index != next_frame()) {
    throw PreconditionError("add_frame: expected frame " + std::to_string(next_frame()) + ", got " +
                            std::to_string(index));
  }
  if (frames_.empty()) scale_ = scale;
  if (scale != scale_) throw PreconditionError("add_frame: analysis scale changed mid-stream");
  frames_.push_back(std::move(planes));
  std::lock_guard lock(mutex_);
  stats_.peak_resident_frames =
      std::max(stats_.peak_resident_frames, static_cast<std::int64_t>(frames_.size()));
}

bool MeasureCache::resident(const PlaneId& id) const {
  if (id.scale != scale_ || id.frame < watermark_ || id.frame >= next_frame()) return false;
  const auto& fp = frames_[static_cast<std::size_t>(id.frame - watermark_)];
  switch (id.kind) {
    case PlaneKind::kFrame: return true;
    case PlaneKind::kUpperField: return fp.upper.has_value();
    case PlaneKind::kLowerField: return fp.lower.has_value();
  }
  return false;
}

const LumaPlane& MeasureCache::plane(const PlaneId& id) const {
  if (!resident(id)) throw WindowError("not resident: " + describe(id));
  const auto& fp = frames_[static_cast<std::size_t>(id.frame - watermark_)];
  switch (id.kind) {
    case PlaneKind::kUpperField: return *fp.upper;
    case PlaneKind::kLowerField: return *fp.lower;
    case PlaneKind::kFrame: break;
  }
  return fp.frame;
}

template <typename T, typename Fn>
T MeasureCache::lookup(Table<T>& table, const MeasureKey& key, KindCounters& counters, Fn&& compute) {
  if (!enabled_) {
    {
      std::lock_guard lock(mutex_);
      ++counters.computed;
    }
    return compute();
  }
  std::promise<T> promise;
  std::shared_future<T> result;
  bool owner = false;
  {
    std::lock_guard lock(mutex_);
    if (auto it = table.find(key); it != table.end()) {
      ++counters.served_from_cache;
      result = it->second;
    } else {
      result = promise.get_future().share();
      table.emplace(key, result);
      ++counters.computed;
      if (!ever_computed_.insert(key).second) ++stats_.recomputed;
      owner = true;
    }
  }
  if (owner) {
    try {
      promise.set_value(compute());
    } catch (...) {
      promise.set_exception(std::current_exception());
      std::lock_guard lock(mutex_);
      table.erase(key);
    }
  }
  return result.get();
}

Histogram MeasureCache::get_histogram(const PlaneId& id) {
  const LumaPlane& p = plane(id);
  return lookup(histograms_, MeasureKey{MeasureKind::kHistogram, id, std::nullopt}, stats_.histogram,
                [&] { return histogram(p); });
}

ActivityValue MeasureCache::get_activity(const PlaneId& reference, const PlaneId& moving) {
  const LumaPlane& ref = plane(reference);
  const LumaPlane& mov = plane(moving);
  return lookup(activities_, MeasureKey{MeasureKind::kActivity, reference, moving}, stats_.activity,
                [&] { return activity(ref, mov, flow_, pool_); });
}

std::int64_t MeasureCache::advance_window(std::int64_t oldest_needed) {
  if (oldest_needed < requested_) {
    throw PreconditionError("advance_window: watermark may not move backwards (" +
                            std::to_string(oldest_needed) + " < " + std::to_string(requested_) + ")");
  }
  requested_ = oldest_needed;
  while (!frames_.empty() && watermark_ < oldest_needed) {
    frames_.pop_front();
    ++watermark_;
  }

  std::lock_guard lock(mutex_);
  std::int64_t dropped = 0;
  auto sweep = [&](auto& table) {
    for (auto it = table.begin(); it != table.end();) {
      if (newest_frame(it->first) < oldest_needed) {
        it = table.erase(it);
        ++dropped;
      } else {
        ++it;
      }
    }
  };
  sweep(histograms_);
  sweep(activities_);
  stats_.evicted += dropped;
  return dropped;
}

CacheStats MeasureCache::stats() const {
  std::lock_guard lock(mutex_);
  return stats_;
}

}  // namespace vidstruct
