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

#include "vidstruct/shot_detector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "vidstruct/error.hpp"

namespace vidstruct {
namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

// Pair activity below this counts as fully calm when locating a drop.
constexpr double kCalmFloor = 0.005;

double mean_abs_difference(const LumaPlane& a, const LumaPlane& b) {
  const auto pa = a.data();
  const auto pb = b.data();
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) sum += static_cast<std::uint64_t>(std::abs(pa[i] - pb[i]));
  return static_cast<double>(sum) / static_cast<double>(pa.size());
}

}  // namespace

std::string_view to_string(TransitionType type) {
  switch (type) {
    case TransitionType::kStreamStart: return "stream_start";
    case TransitionType::kHardcut: return "hardcut";
    case TransitionType::kDissolve: return "dissolve";
  }
  return "unknown";
}

ShotDetector::ShotDetector(const ShotParams& params, MeasureCache& cache, int scale)
    : params_(params), cache_(cache), scale_(scale) {}

bool ShotDetector::pair_frozen(std::int64_t t) {
  if (t < 0) throw PreconditionError("pair_frozen: negative frame index");
  const auto i = static_cast<std::size_t>(t);
  if (frozen_.size() <= i) frozen_.resize(i + 1, -1);
  if (frozen_[i] >= 0) return frozen_[i] == 1;

  const Histogram ha = cache_.get_histogram(frame_id(t));
  const Histogram hb = cache_.get_histogram(frame_id(t + 1));
  bool frozen = normalized_l1(ha, hb) < params_.h_gate && std::abs(hb.mean - ha.mean) < params_.mean_gate;
  if (frozen) {
    frozen = mean_abs_difference(cache_.plane(frame_id(t)), cache_.plane(frame_id(t + 1))) <
             params_.frozen_pixel_gate;
  }
  frozen_[i] = frozen ? 1 : 0;
  if (frozen) ++frozen_pairs_;
  return frozen;
}

double ShotDetector::pair_activity(std::int64_t t) {
  if (t < 0) throw PreconditionError("pair_activity: negative frame index");
  const auto i = static_cast<std::size_t>(t);
  if (activity_.size() <= i) activity_.resize(i + 1, kUnset);
  if (!std::isnan(activity_[i])) return activity_[i];
  const double a = pair_frozen(t) ? 0.0 : cache_.get_activity(frame_id(t), frame_id(t + 1)).act;
  activity_[i] = a;
  return a;
}

double ShotDetector::trailing_median(std::int64_t end) const {
  const std::int64_t begin = std::max(shot_start_, end - params_.median_window);
  std::vector<double> history;
  for (std::int64_t i = std::max<std::int64_t>(begin, 0); i < end; ++i) {
    const auto u = static_cast<std::size_t>(i);
    if (u < activity_.size() && !std::isnan(activity_[u])) history.push_back(activity_[u]);
  }
  if (history.empty()) return 0.0;
  const auto mid = history.begin() + static_cast<std::ptrdiff_t>(history.size() / 2);
  std::nth_element(history.begin(), mid, history.end());
  if (history.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(history.begin(), mid);
  return 0.5 * (lower + upper);
}

bool ShotDetector::fast_check(std::int64_t t) {
  const double a = pair_activity(t);
  return a > std::max(params_.theta_fast_abs, params_.lambda_fast * trailing_median(t));
}

TransitionHypothesis ShotDetector::evaluate(std::int64_t t, int k, std::int64_t last_frame) {
  TransitionHypothesis h;
  h.t = t;
  h.k = k;
  if (k < 1 || k > kMaxTransitionLength || t + k > last_frame) return h;
  h.forward = cache_.get_activity(frame_id(t), frame_id(t + k)).act;
  double worst = 0.0;
  for (int j = 1; j <= 2; ++j) {
    if (t - j < std::max<std::int64_t>(shot_start_, 0)) break;
    h.backward.push_back(cache_.get_activity(frame_id(t), frame_id(t - j)).act);
    worst = std::max(worst, h.backward.back());
  }
  h.verified = !h.backward.empty() && h.forward >= params_.theta_deep_abs &&
               h.forward > params_.mu_deep * worst;
  return h;
}

std::optional<TransitionHypothesis> ShotDetector::deep_check(std::int64_t t, std::int64_t last_frame) {
  ++deep_checks_;
  for (int k = 1; k <= kMaxTransitionLength; ++k) {
    auto h = evaluate(t, k, last_frame);
    if (h.verified) return h;
  }
  return std::nullopt;
}

std::optional<TransitionHypothesis> ShotDetector::step(std::int64_t t, std::int64_t last_frame) {
  if (t + 1 > last_frame) return std::nullopt;
  pair_activity(t);
  if (t < min_anchor_ || !fast_check(t)) return std::nullopt;
  ++candidates_;

  // The transition starts after the last calm pair before t and ends at the
  // sharpest drop of pair activity within kMaxTransitionLength pairs.
  const std::int64_t lowest = std::max(min_anchor_, t - kMaxTransitionLength);
  const double floor = std::max(params_.theta_run_abs, params_.lambda_run * trailing_median(lowest));
  std::int64_t anchor = t;
  while (anchor > lowest && pair_activity(anchor - 1) > floor) --anchor;
  int run = 1;
  double sharpest = -1.0;
  for (int k = 1; k <= kMaxTransitionLength && anchor + k + 1 <= last_frame; ++k) {
    const double drop = pair_activity(anchor + k - 1) / std::max(pair_activity(anchor + k), kCalmFloor);
    if (drop > sharpest) {
      sharpest = drop;
      run = k;
    }
  }

  ++deep_checks_;
  std::optional<TransitionHypothesis> found;
  if (auto h = evaluate(anchor, run, last_frame); h.verified) {
    found = std::move(h);
  } else {
    for (int k = 1; k <= kMaxTransitionLength && !found; ++k) {
      if (auto g = evaluate(anchor, k, last_frame); g.verified) found = std::move(g);
    }
  }
  if (!found) return std::nullopt;
  shot_start_ = found->t + found->k;
  min_anchor_ = shot_start_ + params_.min_shot_len - 1;
  return found;
}

}  // namespace vidstruct
