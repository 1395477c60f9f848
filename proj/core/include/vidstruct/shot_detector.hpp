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

#ifndef VIDSTRUCT_SHOT_DETECTOR_HPP_
#define VIDSTRUCT_SHOT_DETECTOR_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "vidstruct/config.hpp"
#include "vidstruct/measure_cache.hpp"

namespace vidstruct {

inline constexpr int kMaxTransitionLength = 4;

struct TransitionHypothesis {
  std::int64_t t = 0;  // last frame of the outgoing shot
  int k = 1;           // first incoming frame is t + k; k == 1 is a hardcut
  double forward = 0.0;
  std::vector<double> backward;  // ACT(I_t, I_{t-j}), j = 1, 2 where available
  bool verified = false;
};

enum class TransitionType : std::uint8_t { kStreamStart, kHardcut, kDissolve };

std::string_view to_string(TransitionType type);

/// Sequential hardcut and short-dissolve detector over full analysis frames.
/// One instance per stream.
class ShotDetector {
 public:
  /// Frames the detector reads beyond the cursor, and behind it.
  static constexpr int kLookahead = kMaxTransitionLength + 1;
  static constexpr int kLookback = kMaxTransitionLength + 2;

  ShotDetector(const ShotParams& params, MeasureCache& cache, int scale = 1);

  /// ACT(I_t, I_{t+1}), or 0 when the pre-gate finds the pair frozen.
  double pair_activity(std::int64_t t);
  bool pair_frozen(std::int64_t t);
  /// Pair activities computed so far, indexed by t; NaN where not computed.
  const std::vector<double>& pair_activities() const { return activity_; }

  bool fast_check(std::int64_t t);

  /// Hypothesis (t, k) with its verification verdict.
  TransitionHypothesis evaluate(std::int64_t t, int k, std::int64_t last_frame);

  /// Smallest verified k in 1..4 (truncated at last_frame), if any.
  std::optional<TransitionHypothesis> deep_check(std::int64_t t, std::int64_t last_frame);

  /// Advances the scan to cursor t. Frames up to min(t + kLookahead,
  /// last_frame) must be resident. Returns a verified transition whose
  /// outgoing shot ends at or before t.
  std::optional<TransitionHypothesis> step(std::int64_t t, std::int64_t last_frame);

  std::int64_t shot_start() const { return shot_start_; }
  std::int64_t deep_checks() const { return deep_checks_; }
  std::int64_t candidates() const { return candidates_; }
  std::int64_t frozen_pairs() const { return frozen_pairs_; }

 private:
  double trailing_median(std::int64_t end) const;
  PlaneId frame_id(std::int64_t t) const { return {t, PlaneKind::kFrame, scale_}; }

  ShotParams params_;
  MeasureCache& cache_;
  int scale_;
  std::vector<double> activity_;
  std::vector<signed char> frozen_;
  std::int64_t shot_start_ = 0;
  std::int64_t min_anchor_ = 0;
  std::int64_t deep_checks_ = 0;
  std::int64_t candidates_ = 0;
  std::int64_t frozen_pairs_ = 0;
};

}  // namespace vidstruct

#endif  // VIDSTRUCT_SHOT_DETECTOR_HPP_
