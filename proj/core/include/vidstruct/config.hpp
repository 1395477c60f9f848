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

#ifndef VIDSTRUCT_CONFIG_HPP_
#define VIDSTRUCT_CONFIG_HPP_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vidstruct/flow.hpp"

namespace vidstruct {

struct ShotParams {
  double h_gate = 0.02;           // normalized histogram L1 below which a pair may be frozen
  double mean_gate = 2.0;         // |mean(t+1) - mean(t)| below which a pair may be frozen
  double frozen_pixel_gate = 1.0; // mean absolute pixel difference of a frozen pair
  double theta_fast_abs = 0.05;
  double lambda_fast = 3.0;
  int median_window = 12;
  double theta_run_abs = 0.02;    // floor for pairs counted into a transition run
  double lambda_run = 2.0;
  double mu_deep = 2.5;
  double theta_deep_abs = 0.25;
  int min_shot_len = 8;
};

struct SamplingParams {
  double theta_comb = 0.08;
  double comb_motion_px = 0.8;    // v0 flow magnitude that also counts as combing
  double theta_static = 0.02;
  double static_motion_px = 1.0;  // max(v1, v2) flow magnitude below which a frame is static
  double r_tol = 1.5;
  double beta_margin = 0.1;
  int min_samples = 5;
  int max_samples = 20;
};

struct KeyframeParams {
  double theta_kf = 0.5;
  int accumulation_stride = 1;
};

struct Config {
  ShotParams shot;
  SamplingParams sampling;
  KeyframeParams keyframes;
  FlowParams flow;
  int max_long_side = 512;
  int threads = 1;  // not part of the echo: results do not depend on it
  bool cache_enabled = true;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

struct ConfigOption {
  std::string name;
  bool integral = false;
  double value = 0.0;
};

/// Every tunable option with its current value, in a stable order.
std::vector<ConfigOption> config_options(const Config& config);

/// Sets one option by name. Dashes and underscores are interchangeable.
void set_option(Config& config, std::string_view name, std::string_view value);

/// Applies a key-value config file (same syntax as synth scripts, no sections).
void apply_config_file(Config& config, const std::string& path);
void apply_config_text(Config& config, std::string_view text, std::string_view source);

void apply_overrides(Config& config, const std::map<std::string, std::string>& overrides);

}  // namespace vidstruct

#endif  // VIDSTRUCT_CONFIG_HPP_
