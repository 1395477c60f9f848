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

// vidstruct command-line tool.
//
//   vidstruct analyze INPUT [--json PATH|-] [--keyframes DIR] [--config PATH]
//                           [--threads N] [--max-long-side N] [--<option> VALUE]...
//   vidstruct synth SCRIPT --out PATH [--truth PATH]
//   vidstruct synth --list-corpus
//
// Exit codes: 0 ok, 2 input or format error, 3 configuration error,
// 4 analysis incomplete (the partial report is still written).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vidstruct/config.hpp"
#include "vidstruct/corpus.hpp"
#include "vidstruct/error.hpp"
#include "vidstruct/pipeline.hpp"
#include "vidstruct/synthgen.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;
constexpr int kExitIncomplete = 4;

std::string flag_name(std::string name) {
  for (auto& ch : name) {
    if (ch == '_') ch = '-';
  }
  return "--" + name;
}

struct AnalyzeArgs {
  std::string input;
  std::string json = "-";
  std::string keyframes;
  std::string config;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> flags;
};

int run_analyze(AnalyzeArgs& args) {
  vidstruct::Config config;
  try {
    if (!args.config.empty()) vidstruct::apply_config_file(config, args.config);
    for (const auto& [name, opt] : args.flags) {
      if (opt->count() > 0) vidstruct::set_option(config, name, args.values[name]);
    }
    config.validate();
  } catch (const vidstruct::ConfigError& e) {
    std::cerr << "vidstruct: config error: " << e.what() << "\n";
    return kExitConfig;
  }

  vidstruct::AnalysisReport report;
  try {
    auto source = vidstruct::open_source(args.input);
    report = vidstruct::analyze(*source, config);
  } catch (const vidstruct::ConfigError& e) {
    std::cerr << "vidstruct: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const vidstruct::Error& e) {
    std::cerr << "vidstruct: " << e.what() << "\n";
    return kExitInput;
  }

  const std::string json = vidstruct::report_to_json(report);
  if (args.json == "-") {
    std::cout << json;
    std::cout.flush();
  } else {
    std::ofstream out(args.json, std::ios::binary);
    out << json;
    if (!out) {
      std::cerr << "vidstruct: cannot write " << args.json << "\n";
      return kExitInput;
    }
  }

  if (!args.keyframes.empty()) {
    try {
      vidstruct::export_keyframes(args.input, report, args.keyframes);
    } catch (const std::exception& e) {
      std::cerr << "vidstruct: keyframe export failed: " << e.what() << "\n";
      return kExitInput;
    }
  }
  if (report.incomplete) {
    std::cerr << "vidstruct: analysis incomplete: " << report.error << "\n";
    return kExitIncomplete;
  }
  return kExitOk;
}

struct SynthArgs {
  std::string script;
  std::string out;
  std::string truth;
  bool list = false;
};

int run_synth(const SynthArgs& args) {
  if (args.list) {
    for (const auto& entry : vidstruct::bundled_corpus()) std::cout << entry.name << "\n";
    return kExitOk;
  }
  if (args.script.empty() || args.out.empty()) {
    std::cerr << "vidstruct: synth needs SCRIPT and --out\n";
    return kExitConfig;
  }
  vidstruct::synth::ClipScript script;
  try {
    if (std::filesystem::is_regular_file(args.script)) {
      script = vidstruct::synth::load_script(args.script);
    } else if (auto text = vidstruct::find_corpus_script(args.script)) {
      script = vidstruct::synth::parse_script(*text, args.script);
    } else {
      std::cerr << "vidstruct: no script file or corpus entry named '" << args.script << "'\n";
      return kExitInput;
    }
  } catch (const vidstruct::ConfigError& e) {
    std::cerr << "vidstruct: " << e.what() << "\n";
    return kExitConfig;
  }
  const std::string truth = args.truth.empty() ? args.out + ".truth.json" : args.truth;
  try {
    vidstruct::synth::write_clip(script, args.out, truth);
  } catch (const vidstruct::Error& e) {
    std::cerr << "vidstruct: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shot boundaries, sampling structure and keyframes of uncompressed video"};
  app.set_version_flag("--version", std::string(vidstruct::version()));
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Analyze a Y4M file or a directory of PGM frames");
  analyze->add_option("input", analyze_args.input, "Y4M file or PGM directory")->required();
  analyze->add_option("--json", analyze_args.json, "Report destination, '-' for stdout");
  analyze->add_option("--keyframes", analyze_args.keyframes, "Directory for keyframe PGM export");
  analyze->add_option("--config", analyze_args.config, "Key-value config file");
  std::vector<std::string> names{"threads"};
  for (const auto& opt : vidstruct::config_options(vidstruct::Config{})) names.push_back(opt.name);
  for (const auto& name : names) {
    analyze_args.flags[name] =
        analyze->add_option(flag_name(name), analyze_args.values[name], "Override " + name);
  }

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Render a clip script to Y4M plus a ground-truth sidecar");
  synth->add_option("script", synth_args.script, "Script file or bundled corpus name");
  synth->add_option("--out", synth_args.out, "Output Y4M path");
  synth->add_option("--truth", synth_args.truth, "Ground-truth JSON path (default: OUT.truth.json)");
  synth->add_flag("--list-corpus", synth_args.list, "Print the bundled corpus script names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (analyze->parsed()) return run_analyze(analyze_args);
  return run_synth(synth_args);
}
