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

#include "vidstruct/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "vidstruct/error.hpp"
#include "vidstruct/keyframes.hpp"
#include "vidstruct/thread_pool.hpp"

namespace vidstruct {
namespace {

using Json = nlohmann::ordered_json;

// Shot detection runs on the upper field: woven or telecined frames mix two
// instants, a single field never does. Frames too short to split are used whole.
FramePlanes make_planes(const LumaPlane& frame, int max_long_side) {
  FramePlanes fp;
  const int fw = frame.width();
  const int fh = frame.height() / 2;
  const int ff = analysis_factor(fw, fh, max_long_side);
  if (fw / ff >= kMinPlaneSide && fh / ff >= kMinPlaneSide) {
    auto [upper, lower] = split_fields(frame);
    fp.upper = downscale_for_analysis(upper, max_long_side);
    fp.lower = downscale_for_analysis(lower, max_long_side);
    fp.frame = *fp.upper;
    return fp;
  }
  const int factor = analysis_factor(frame.width(), frame.height(), max_long_side);
  if (frame.width() / factor < kMinPlaneSide || frame.height() / factor < kMinPlaneSide) {
    throw FormatError("frame " + std::to_string(frame.width()) + "x" + std::to_string(frame.height()) +
                      " is too small to analyze at max_long_side " + std::to_string(max_long_side));
  }
  fp.frame = downscale_for_analysis(frame, max_long_side);
  return fp;
}

class Driver {
 public:
  Driver(FrameSource& source, const Config& config)
      : source_(source),
        config_(config),
        pool_(config.threads),
        cache_(config.flow, &pool_, config.cache_enabled) {}

  AnalysisReport run();

 private:
  void load_through(std::int64_t index);
  void close_shot(std::int64_t end);
  double keyframe_activity(std::int64_t t, std::int64_t q);

  FrameSource& source_;
  const Config& config_;
  ThreadPool pool_;
  MeasureCache cache_;
  std::optional<ShotDetector> detector_;
  int scale_ = 1;

  std::int64_t loaded_ = 0;
  bool eof_ = false;
  AnalysisReport report_;

  std::int64_t shot_start_ = 0;
  TransitionIn shot_transition_;
  std::optional<ShotSampler> sampler_;
  std::unordered_map<std::int64_t, double> strided_;
};

void Driver::load_through(std::int64_t index) {
  while (!eof_ && loaded_ <= index) {
    std::optional<LumaPlane> frame;
    try {
      frame = source_.next_frame();
    } catch (const Error& e) {
      report_.incomplete = true;
      report_.error = e.what();
      eof_ = true;
      return;
    }
    if (!frame) {
      eof_ = true;
      return;
    }
    cache_.add_frame(loaded_, make_planes(*frame, config_.max_long_side), scale_);
    ++loaded_;
  }
}

double Driver::keyframe_activity(std::int64_t t, std::int64_t q) {
  if (q == 1) return detector_->pair_activities().at(static_cast<std::size_t>(t));
  return strided_.at(t);
}

void Driver::close_shot(std::int64_t end) {
  ShotRecord shot;
  shot.start_frame = shot_start_;
  shot.end_frame = end;
  shot.transition_in = shot_transition_;
  sampler_->advance(cache_, end);
  shot.sampling = classify_shot(sampler_->probes(), config_.sampling);
  shot.keyframes = extract_keyframes(shot_start_, end, config_.keyframes,
                                     [this](std::int64_t t, std::int64_t q) { return keyframe_activity(t, q); });
  report_.counters.sampling_probes += shot.sampling.samples_probed;
  report_.counters.sampling_samples += shot.sampling.samples_used;
  report_.shots.push_back(std::move(shot));
}

AnalysisReport Driver::run() {
  const auto& info = source_.info();
  const int even_height = info.frame_height - info.frame_height % 2;
  int detect_height = even_height / 2;
  scale_ = analysis_factor(info.frame_width, std::max(detect_height, 1), config_.max_long_side);
  if (info.frame_width / scale_ < kMinPlaneSide || detect_height / scale_ < kMinPlaneSide) {
    detect_height = even_height;
    scale_ = analysis_factor(info.frame_width, std::max(detect_height, 1), config_.max_long_side);
  }
  report_.config = config_;
  report_.input.path = info.path;
  report_.input.width = info.frame_width;
  report_.input.height = info.frame_height;
  report_.input.frame_rate = info.frame_rate;
  report_.input.declared_interlacing = info.declared_interlacing;
  report_.input.analysis_width = info.frame_width / scale_;
  report_.input.analysis_height = detect_height / scale_;

  detector_.emplace(config_.shot, cache_, scale_);
  sampler_.emplace(0, config_.sampling, scale_);
  const int q = config_.keyframes.accumulation_stride;

  std::int64_t watermark = 0;
  for (std::int64_t t = 0;; ++t) {
    load_through(t + ShotDetector::kLookahead);
    const std::int64_t last = loaded_ - 1;
    if (t + 1 > last) break;

    if (q > 1 && t + q <= last) {
      strided_[t] = cache_.get_activity({t, PlaneKind::kFrame, scale_}, {t + q, PlaneKind::kFrame, scale_}).act;
    }
    if (auto hit = detector_->step(t, last)) {
      close_shot(hit->t);
      shot_start_ = hit->t + hit->k;
      shot_transition_ = {hit->k == 1 ? TransitionType::kHardcut : TransitionType::kDissolve, hit->k};
      sampler_.emplace(shot_start_, config_.sampling, scale_);
    }
    // Any boundary found later lies at or after t + 1 - kMaxTransitionLength.
    sampler_->advance(cache_, std::min(t + 1 - kMaxTransitionLength, last));

    std::int64_t needed = t + 1 - ShotDetector::kLookback;
    if (!sampler_->done()) needed = std::min(needed, sampler_->next_frame());
    if (needed > watermark) {
      watermark = needed;
      cache_.advance_window(watermark);
    }
  }
  if (loaded_ > 0) close_shot(loaded_ - 1);

  report_.input.frame_count = loaded_;
  report_.input.cropped_frames = source_.cropped_frames();
  report_.counters.candidates = detector_->candidates();
  report_.counters.deep_checks = detector_->deep_checks();
  report_.counters.frozen_pairs = detector_->frozen_pairs();
  report_.measure_stats = cache_.stats();
  report_.pair_activity = detector_->pair_activities();
  return std::move(report_);
}

Json verdict_json(const SamplingVerdict& v) {
  Json j;
  j["structure"] = std::string(to_string(v.structure));
  j["field_order"] = std::string(to_string(v.field_order));
  j["confidence"] = v.confidence;
  j["beta"] = v.beta ? Json(*v.beta) : Json(nullptr);
  j["samples_used"] = v.samples_used;
  j["samples_probed"] = v.samples_probed;
  j["cadence_phase"] = v.cadence_phase ? Json(*v.cadence_phase) : Json(nullptr);
  return j;
}

Json counters_json(const KindCounters& c) {
  return Json{{"computed", c.computed}, {"served_from_cache", c.served_from_cache}};
}

}  // namespace

std::string_view version() { return "0.1.0"; }

AnalysisReport analyze(FrameSource& source, const Config& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  Driver driver(source, config);
  AnalysisReport report = driver.run();
  const auto t1 = std::chrono::steady_clock::now();
  report.timing.total_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  report.timing.ms_per_frame =
      report.input.frame_count > 0 ? report.timing.total_ms / static_cast<double>(report.input.frame_count) : 0.0;
  report.timing.threads = config.threads;
  return report;
}

AnalysisReport analyze_file(const std::string& path, const std::map<std::string, std::string>& overrides) {
  Config config;
  apply_overrides(config, overrides);
  config.validate();
  auto source = open_source(path);
  return analyze(*source, config);
}

std::string report_to_json(const AnalysisReport& r, bool include_timing, int indent) {
  Json j;
  j["report_version"] = kReportVersion;
  j["input"] = {
      {"path", r.input.path},
      {"width", r.input.width},
      {"height", r.input.height},
      {"frame_rate", {{"num", r.input.frame_rate.num}, {"den", r.input.frame_rate.den}}},
      {"frame_count", r.input.frame_count},
      {"analysis_width", r.input.analysis_width},
      {"analysis_height", r.input.analysis_height},
      {"cropped_frames", r.input.cropped_frames},
      {"declared_interlacing", std::string(to_string(r.input.declared_interlacing))},
  };
  Json shots = Json::array();
  for (const auto& s : r.shots) {
    Json js;
    js["start_frame"] = s.start_frame;
    js["end_frame"] = s.end_frame;
    js["transition_in"] = {{"type", std::string(to_string(s.transition_in.type))},
                           {"length", s.transition_in.length}};
    js["sampling"] = verdict_json(s.sampling);
    js["keyframes"] = s.keyframes;
    shots.push_back(std::move(js));
  }
  j["shots"] = std::move(shots);
  j["measure_stats"] = {
      {"histogram", counters_json(r.measure_stats.histogram)},
      {"activity", counters_json(r.measure_stats.activity)},
      {"evicted", r.measure_stats.evicted},
      {"recomputed", r.measure_stats.recomputed},
      {"peak_resident_frames", r.measure_stats.peak_resident_frames},
      {"fast_candidates", r.counters.candidates},
      {"deep_checks", r.counters.deep_checks},
      {"frozen_pairs", r.counters.frozen_pairs},
      {"sampling_probes", r.counters.sampling_probes},
      {"sampling_samples", r.counters.sampling_samples},
  };
  if (include_timing) {
    j["timing"] = {{"total_ms", r.timing.total_ms},
                   {"ms_per_frame", r.timing.ms_per_frame},
                   {"threads", r.timing.threads}};
  }
  Json echo;
  for (const auto& opt : config_options(r.config)) {
    if (opt.integral) {
      echo[opt.name] = static_cast<long long>(std::llround(opt.value));
    } else {
      echo[opt.name] = opt.value;
    }
  }
  j["config_echo"] = std::move(echo);
  j["incomplete"] = r.incomplete;
  if (r.incomplete) j["error"] = r.error;
  return j.dump(indent) + "\n";
}

std::vector<std::filesystem::path> export_keyframes(const std::string& input, const AnalysisReport& report,
                                                    const std::filesystem::path& dir) {
  std::set<std::int64_t> wanted;
  for (const auto& s : report.shots) wanted.insert(s.keyframes.begin(), s.keyframes.end());
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  if (wanted.empty()) return written;
  auto source = open_source(input);
  for (std::int64_t index = 0; index <= *wanted.rbegin(); ++index) {
    auto frame = source->next_frame();
    if (!frame) break;
    if (!wanted.contains(index)) continue;
    char name[32];
    std::snprintf(name, sizeof name, "frame_%08lld.pgm", static_cast<long long>(index));
    written.push_back(dir / name);
    write_pgm(written.back(), *frame);
  }
  return written;
}

}  // namespace vidstruct
