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

#ifndef VIDSTRUCT_PIPELINE_HPP_
#define VIDSTRUCT_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vidstruct/config.hpp"
#include "vidstruct/frame_io.hpp"
#include "vidstruct/measure_cache.hpp"
#include "vidstruct/sampling_detector.hpp"
#include "vidstruct/shot_detector.hpp"

namespace vidstruct {

inline constexpr int kReportVersion = 1;

std::string_view version();

struct InputSummary {
  std::string path;
  int width = 0;
  int height = 0;
  Rational frame_rate;
  std::int64_t frame_count = 0;
  int analysis_width = 0;
  int analysis_height = 0;
  std::int64_t cropped_frames = 0;
  DeclaredInterlacing declared_interlacing = DeclaredInterlacing::kUnknown;
};

struct TransitionIn {
  TransitionType type = TransitionType::kStreamStart;
  int length = 0;
};

struct ShotRecord {
  std::int64_t start_frame = 0;
  std::int64_t end_frame = 0;  // inclusive
  TransitionIn transition_in;
  SamplingVerdict sampling;
  std::vector<std::int64_t> keyframes;
};

struct PipelineCounters {
  std::int64_t candidates = 0;
  std::int64_t deep_checks = 0;
  std::int64_t frozen_pairs = 0;
  std::int64_t sampling_probes = 0;
  std::int64_t sampling_samples = 0;  // non-static probes
};

struct Timing {
  double total_ms = 0.0;
  double ms_per_frame = 0.0;
  int threads = 1;
};

struct AnalysisReport {
  InputSummary input;
  std::vector<ShotRecord> shots;
  CacheStats measure_stats;
  PipelineCounters counters;
  Timing timing;
  Config config;
  /// ACT(I_t, I_{t+1}) per pair as seen by the detector, 0 for frozen pairs,
  /// NaN where never computed. Not serialized.
  std::vector<double> pair_activity;
  bool incomplete = false;
  std::string error;  // set when incomplete
};

/// Single forward pass over the source. Decode failures after the header end
/// the pass early and mark the report incomplete.
AnalysisReport analyze(FrameSource& source, const Config& config);

/// Opens `path` and analyzes it with the defaults adjusted by `overrides`
/// (option names as in config files). Throws InputError, FormatError or
/// ConfigError before any analysis starts.
AnalysisReport analyze_file(const std::string& path,
                            const std::map<std::string, std::string>& overrides = {});

std::string report_to_json(const AnalysisReport& report, bool include_timing = true, int indent = 2);

/// Re-reads `input` and writes every keyframe as dir/frame_XXXXXXXX.pgm at
/// source resolution. Returns the written paths in frame order.
std::vector<std::filesystem::path> export_keyframes(const std::string& input,
                                                    const AnalysisReport& report,
                                                    const std::filesystem::path& dir);

}  // namespace vidstruct

#endif  // VIDSTRUCT_PIPELINE_HPP_
