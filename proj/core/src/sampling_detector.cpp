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

#include "vidstruct/sampling_detector.hpp"

#include <algorithm>
#include <array>

#include "vidstruct/error.hpp"

namespace vidstruct {
namespace {

constexpr std::array<bool, 5> kCadenceMask = {false, false, true, true, false};
constexpr double kRatioFloor = 1e-4;
constexpr int kMinCadenceSamples = 10;
constexpr std::int64_t kMaxCadenceGap = 2;

double ratio(const FieldTripletSample& s) { return s.v1.act / std::max(s.v2.act, kRatioFloor); }

}  // namespace

std::string_view to_string(SamplingStructure structure) {
  switch (structure) {
    case SamplingStructure::kProgressive: return "progressive";
    case SamplingStructure::kInterlaced: return "interlaced";
    case SamplingStructure::kPulldown32: return "pulldown_3_2";
    case SamplingStructure::kUndetermined: return "undetermined";
  }
  return "undetermined";
}

std::string_view to_string(FieldOrder order) {
  switch (order) {
    case FieldOrder::kTff: return "tff";
    case FieldOrder::kBff: return "bff";
    case FieldOrder::kNotApplicable: return "not_applicable";
  }
  return "not_applicable";
}

bool is_static_pair(const ActivityValue& v1, const ActivityValue& v2, const SamplingParams& params) {
  return std::max(v1.act, v2.act) < params.theta_static ||
         std::max(v1.amm_raw, v2.amm_raw) < params.static_motion_px;
}

SampleVote vote(const FieldTripletSample& sample, const SamplingParams& params) {
  if (sample.v0.act >= params.theta_comb || sample.v0.amm_raw >= params.comb_motion_px) {
    return SampleVote::kCombed;
  }
  const double r = ratio(sample);
  if (r >= 1.0 / params.r_tol && r <= params.r_tol) return SampleVote::kProgressive;
  return SampleVote::kOther;
}

FieldTripletSample sample_triplet(MeasureCache& cache, std::int64_t t, const SamplingParams& params,
                                  int scale) {
  const PlaneId upper{t, PlaneKind::kUpperField, scale};
  const PlaneId lower{t, PlaneKind::kLowerField, scale};
  const PlaneId next_upper{t + 1, PlaneKind::kUpperField, scale};
  const PlaneId next_lower{t + 1, PlaneKind::kLowerField, scale};
  FieldTripletSample s;
  s.t = t;
  s.v1 = cache.get_activity(upper, next_lower);
  s.v2 = cache.get_activity(lower, next_upper);
  s.is_static = is_static_pair(s.v1, s.v2, params);
  if (!s.is_static) s.v0 = cache.get_activity(upper, lower);
  return s;
}

CadenceResult detect_pulldown_cadence(std::span<const std::int64_t> frames,
                                      const std::vector<bool>& combed) {
  if (frames.size() != combed.size()) {
    throw PreconditionError("detect_pulldown_cadence: frames and flags differ in length");
  }
  CadenceResult result;
  if (frames.size() < static_cast<std::size_t>(kMinCadenceSamples)) return result;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const std::int64_t step = frames[i] - frames[i - 1];
    if (step < 1) throw PreconditionError("detect_pulldown_cadence: frames must increase");
    if (step - 1 > kMaxCadenceGap) return result;
  }

  const auto n = static_cast<double>(frames.size());
  const double fraction = static_cast<double>(std::count(combed.begin(), combed.end(), true)) / n;
  int best_phase = 0;
  double best = -1.0;
  for (int p = 0; p < 5; ++p) {
    int agree = 0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const auto pos = static_cast<std::size_t>(((frames[i] + p) % 5 + 5) % 5);
      if (combed[i] == kCadenceMask[pos]) ++agree;
    }
    const double score = agree / n;
    if (score > best) {
      best = score;
      best_phase = p;
    }
  }
  result.agreement = best;
  result.is_cadence = best >= 0.9 && fraction >= 0.25 && fraction <= 0.55;
  if (result.is_cadence) result.phase = best_phase;
  return result;
}

double median_beta(std::span<const FieldTripletSample> samples) {
  if (samples.empty()) return 1.0;
  std::vector<double> r;
  r.reserve(samples.size());
  for (const auto& s : samples) r.push_back(ratio(s));
  std::sort(r.begin(), r.end());
  const std::size_t mid = r.size() / 2;
  return r.size() % 2 == 1 ? r[mid] : 0.5 * (r[mid - 1] + r[mid]);
}

FieldOrder field_order_from_beta(std::span<const FieldTripletSample> samples, double beta_margin) {
  const double beta = median_beta(samples);
  if (beta > 1.0 + beta_margin) return FieldOrder::kTff;
  if (beta < 1.0 / (1.0 + beta_margin)) return FieldOrder::kBff;
  int above = 0;
  int below = 0;
  for (const auto& s : samples) {
    const double r = ratio(s);
    if (r > 1.0) ++above;
    if (r < 1.0) ++below;
  }
  return below > above ? FieldOrder::kBff : FieldOrder::kTff;
}

SamplingVerdict classify_shot(std::span<const FieldTripletSample> probes, const SamplingParams& params) {
  SamplingVerdict v;
  v.samples_probed = static_cast<int>(probes.size());
  std::vector<FieldTripletSample> used;
  for (const auto& p : probes) {
    if (p.is_static) continue;
    if (static_cast<int>(used.size()) == params.max_samples) break;
    used.push_back(p);
  }
  v.samples_used = static_cast<int>(used.size());
  if (v.samples_used < params.min_samples) return v;

  std::vector<FieldTripletSample> combed_samples;
  std::vector<std::int64_t> frames;
  std::vector<bool> flags;
  int progressive = 0;
  for (const auto& s : used) {
    const SampleVote sv = vote(s, params);
    frames.push_back(s.t);
    flags.push_back(sv == SampleVote::kCombed);
    if (sv == SampleVote::kCombed) combed_samples.push_back(s);
    if (sv == SampleVote::kProgressive) ++progressive;
  }
  const double n = static_cast<double>(used.size());
  const double combed = static_cast<double>(combed_samples.size()) / n;

  if (combed >= 0.8) {
    v.structure = SamplingStructure::kInterlaced;
    v.field_order = field_order_from_beta(combed_samples, params.beta_margin);
    v.beta = median_beta(combed_samples);
    v.confidence = combed;
    return v;
  }
  if (combed >= 0.25 && combed <= 0.55) {
    const CadenceResult cadence = detect_pulldown_cadence(frames, flags);
    if (cadence.is_cadence) {
      v.structure = SamplingStructure::kPulldown32;
      v.cadence_phase = cadence.phase;
      v.confidence = cadence.agreement;
      return v;
    }
  }
  if (combed <= 0.1) {
    v.structure = SamplingStructure::kProgressive;
    v.confidence = progressive / n;
  }
  return v;
}

ShotSampler::ShotSampler(std::int64_t shot_start, const SamplingParams& params, int scale)
    : params_(params), scale_(scale), next_(shot_start + 1) {}

void ShotSampler::advance(MeasureCache& cache, std::int64_t last_frame) {
  const int budget = 3 * params_.max_samples;
  while (!done_ && next_ + 1 <= last_frame) {
    if (non_static_ >= params_.max_samples || computations_ + 3 > budget ||
        !cache.resident({next_, PlaneKind::kUpperField, scale_})) {
      done_ = true;
      break;
    }
    probes_.push_back(sample_triplet(cache, next_, params_, scale_));
    computations_ += probes_.back().is_static ? 2 : 3;
    if (!probes_.back().is_static) ++non_static_;
    ++next_;
  }
  if (non_static_ >= params_.max_samples || computations_ + 3 > budget) done_ = true;
}

}  // namespace vidstruct
