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

#ifndef VIDSTRUCT_SAMPLING_DETECTOR_HPP_
#define VIDSTRUCT_SAMPLING_DETECTOR_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "vidstruct/config.hpp"
#include "vidstruct/measure_cache.hpp"

namespace vidstruct {

struct FieldTripletSample {
  std::int64_t t = 0;
  ActivityValue v0;  // upper(t) vs lower(t); left zero for static samples
  ActivityValue v1;  // upper(t) vs lower(t+1)
  ActivityValue v2;  // lower(t) vs upper(t+1)
  bool is_static = false;
};

enum class SamplingStructure : std::uint8_t { kProgressive, kInterlaced, kPulldown32, kUndetermined };
enum class FieldOrder : std::uint8_t { kTff, kBff, kNotApplicable };

std::string_view to_string(SamplingStructure structure);
std::string_view to_string(FieldOrder order);

struct SamplingVerdict {
  SamplingStructure structure = SamplingStructure::kUndetermined;
  FieldOrder field_order = FieldOrder::kNotApplicable;
  double confidence = 0.0;
  int samples_used = 0;    // non-static samples
  int samples_probed = 0;  // all probed frames, static included
  std::optional<double> beta;
  std::optional<int> cadence_phase;
};

enum class SampleVote : std::uint8_t { kProgressive, kCombed, kOther };

bool is_static_pair(const ActivityValue& v1, const ActivityValue& v2, const SamplingParams& params);
SampleVote vote(const FieldTripletSample& sample, const SamplingParams& params);

/// Probes frame t (fields of t and t + 1 must be resident). v0 is only
/// computed for non-static frames.
FieldTripletSample sample_triplet(MeasureCache& cache, std::int64_t t, const SamplingParams& params,
                                  int scale = 1);

struct CadenceResult {
  bool is_cadence = false;
  std::optional<int> phase;  // frame f sits at unit position (f + phase) % 5
  double agreement = 0.0;
};

/// Flags per sampled frame, with frame indices strictly increasing.
CadenceResult detect_pulldown_cadence(std::span<const std::int64_t> frames,
                                      const std::vector<bool>& combed);

/// Median of v1 / v2 with v2 floored at 1e-4.
double median_beta(std::span<const FieldTripletSample> samples);

FieldOrder field_order_from_beta(std::span<const FieldTripletSample> samples, double beta_margin);

/// Verdict from the probes of one shot, in frame order. Static probes are
/// skipped; at most max_samples non-static probes are considered.
SamplingVerdict classify_shot(std::span<const FieldTripletSample> probes, const SamplingParams& params);

/// Incremental front-of-shot sampler: probes consecutive frames from
/// shot_start + 1 until it holds max_samples non-static probes or has spent
/// 3 * max_samples activity computations.
class ShotSampler {
 public:
  ShotSampler(std::int64_t shot_start, const SamplingParams& params, int scale = 1);

  /// Probes every pending frame t with t + 1 <= last_frame.
  void advance(MeasureCache& cache, std::int64_t last_frame);

  bool done() const { return done_; }
  /// Lowest frame index the sampler may still read.
  std::int64_t next_frame() const { return next_; }
  const std::vector<FieldTripletSample>& probes() const { return probes_; }
  int computations() const { return computations_; }

 private:
  SamplingParams params_;
  int scale_;
  std::int64_t next_;
  int non_static_ = 0;
  int computations_ = 0;
  bool done_ = false;
  std::vector<FieldTripletSample> probes_;
};

}  // namespace vidstruct

#endif  // VIDSTRUCT_SAMPLING_DETECTOR_HPP_
