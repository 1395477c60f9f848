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

#include "vidstruct/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>

#include "vidstruct/error.hpp"
#include "vidstruct/keyvalue.hpp"

namespace vidstruct {
namespace {

struct OptionDef {
  const char* name;
  bool integral;
  std::function<double&(Config&)> real;
  std::function<int&(Config&)> integer;
};

OptionDef real(const char* name, std::function<double&(Config&)> f) {
  return {name, false, std::move(f), nullptr};
}
OptionDef integer(const char* name, std::function<int&(Config&)> f) {
  return {name, true, nullptr, std::move(f)};
}

const std::vector<OptionDef>& option_table() {
  static const std::vector<OptionDef> table = {
      real("h_gate", [](Config& c) -> double& { return c.shot.h_gate; }),
      real("mean_gate", [](Config& c) -> double& { return c.shot.mean_gate; }),
      real("frozen_pixel_gate", [](Config& c) -> double& { return c.shot.frozen_pixel_gate; }),
      real("theta_fast_abs", [](Config& c) -> double& { return c.shot.theta_fast_abs; }),
      real("lambda_fast", [](Config& c) -> double& { return c.shot.lambda_fast; }),
      integer("median_window", [](Config& c) -> int& { return c.shot.median_window; }),
      real("theta_run_abs", [](Config& c) -> double& { return c.shot.theta_run_abs; }),
      real("lambda_run", [](Config& c) -> double& { return c.shot.lambda_run; }),
      real("mu_deep", [](Config& c) -> double& { return c.shot.mu_deep; }),
      real("theta_deep_abs", [](Config& c) -> double& { return c.shot.theta_deep_abs; }),
      integer("min_shot_len", [](Config& c) -> int& { return c.shot.min_shot_len; }),
      real("theta_comb", [](Config& c) -> double& { return c.sampling.theta_comb; }),
      real("comb_motion_px", [](Config& c) -> double& { return c.sampling.comb_motion_px; }),
      real("theta_static", [](Config& c) -> double& { return c.sampling.theta_static; }),
      real("static_motion_px", [](Config& c) -> double& { return c.sampling.static_motion_px; }),
      real("r_tol", [](Config& c) -> double& { return c.sampling.r_tol; }),
      real("beta_margin", [](Config& c) -> double& { return c.sampling.beta_margin; }),
      integer("min_samples", [](Config& c) -> int& { return c.sampling.min_samples; }),
      integer("max_samples", [](Config& c) -> int& { return c.sampling.max_samples; }),
      real("theta_kf", [](Config& c) -> double& { return c.keyframes.theta_kf; }),
      integer("accumulation_stride", [](Config& c) -> int& { return c.keyframes.accumulation_stride; }),
      integer("flow_pyramid_levels", [](Config& c) -> int& { return c.flow.pyramid_levels; }),
      integer("flow_patch_size", [](Config& c) -> int& { return c.flow.patch_size; }),
      integer("flow_patch_stride", [](Config& c) -> int& { return c.flow.patch_stride; }),
      integer("flow_iterations", [](Config& c) -> int& { return c.flow.iterations_per_patch; }),
      integer("max_long_side", [](Config& c) -> int& { return c.max_long_side; }),
  };
  return table;
}

std::string canonical(std::string_view name) {
  std::string out(name);
  for (auto& ch : out) {
    if (ch == '-') ch = '_';
  }
  return out;
}

double parse_real(std::string_view name, std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(name) + ": expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

int parse_int(std::string_view name, std::string_view text) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(std::string(name) + ": expected an integer, got '" + std::string(text) + "'");
  }
  return static_cast<int>(v);
}

void require(bool ok, const char* message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

void Config::validate() const {
  require(shot.h_gate >= 0 && shot.h_gate <= 2, "h_gate must be in [0, 2]");
  require(shot.mean_gate >= 0, "mean_gate must be >= 0");
  require(shot.frozen_pixel_gate >= 0, "frozen_pixel_gate must be >= 0");
  require(shot.theta_fast_abs >= 0 && shot.theta_fast_abs <= 1, "theta_fast_abs must be in [0, 1]");
  require(shot.lambda_fast >= 0, "lambda_fast must be >= 0");
  require(shot.median_window >= 1, "median_window must be >= 1");
  require(shot.theta_run_abs >= 0 && shot.theta_run_abs <= 1, "theta_run_abs must be in [0, 1]");
  require(shot.lambda_run >= 0, "lambda_run must be >= 0");
  require(shot.mu_deep >= 1, "mu_deep must be >= 1");
  require(shot.theta_deep_abs >= 0 && shot.theta_deep_abs <= 1, "theta_deep_abs must be in [0, 1]");
  require(shot.min_shot_len >= 1, "min_shot_len must be >= 1");
  require(sampling.theta_comb >= 0 && sampling.theta_comb <= 1, "theta_comb must be in [0, 1]");
  require(sampling.comb_motion_px > 0, "comb_motion_px must be > 0");
  require(sampling.theta_static >= 0 && sampling.theta_static <= 1, "theta_static must be in [0, 1]");
  require(sampling.static_motion_px >= 0, "static_motion_px must be >= 0");
  require(sampling.r_tol >= 1, "r_tol must be >= 1");
  require(sampling.beta_margin >= 0, "beta_margin must be >= 0");
  require(sampling.min_samples >= 1, "min_samples must be >= 1");
  require(sampling.max_samples >= sampling.min_samples, "max_samples must be >= min_samples");
  require(keyframes.theta_kf > 0, "theta_kf must be > 0");
  require(keyframes.accumulation_stride >= 1 && keyframes.accumulation_stride <= 4,
          "accumulation_stride must be in [1, 4]");
  require(max_long_side >= 64, "max_long_side must be >= 64");
  require(threads >= 1 && threads <= 256, "threads must be in [1, 256]");
  try {
    flow.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
}

std::vector<ConfigOption> config_options(const Config& config) {
  Config copy = config;
  std::vector<ConfigOption> out;
  for (const auto& def : option_table()) {
    const double v = def.integral ? def.integer(copy) : def.real(copy);
    out.push_back({def.name, def.integral, v});
  }
  out.push_back({"flow_max_displacement_per_level", false,
                 static_cast<double>(config.flow.max_displacement_per_level)});
  out.push_back({"cache_enabled", true, config.cache_enabled ? 1.0 : 0.0});
  return out;
}

void set_option(Config& config, std::string_view name, std::string_view value) {
  const std::string key = canonical(name);
  if (key == "threads") {
    config.threads = parse_int(key, value);
    return;
  }
  if (key == "flow_max_displacement_per_level") {
    config.flow.max_displacement_per_level = static_cast<float>(parse_real(key, value));
    return;
  }
  if (key == "cache_enabled") {
    const int v = parse_int(key, value);
    if (v != 0 && v != 1) throw ConfigError("cache_enabled must be 0 or 1");
    config.cache_enabled = v == 1;
    return;
  }
  for (const auto& def : option_table()) {
    if (key != def.name) continue;
    if (def.integral) {
      def.integer(config) = parse_int(key, value);
    } else {
      def.real(config) = parse_real(key, value);
    }
    return;
  }
  throw ConfigError("unknown option '" + std::string(name) + "'");
}

namespace {

void apply_document(Config& config, const KvDocument& doc) {
  if (doc.sections.size() > 1) kv_fail(doc, doc.sections[1].line, "config files take no sections");
  for (const auto& e : doc.sections.front().entries) {
    try {
      set_option(config, e.key, e.value);
    } catch (const ConfigError& err) {
      kv_fail(doc, e.line, err.what());
    }
  }
}

}  // namespace

void apply_config_text(Config& config, std::string_view text, std::string_view source) {
  apply_document(config, parse_kv(text, source));
}

void apply_config_file(Config& config, const std::string& path) {
  apply_document(config, parse_kv_file(path));
}

void apply_overrides(Config& config, const std::map<std::string, std::string>& overrides) {
  for (const auto& [k, v] : overrides) set_option(config, k, v);
}

}  // namespace vidstruct
