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

// Micro benchmarks for the measure kernels and the end-to-end pipeline.

#include <benchmark/benchmark.h>

#include <memory>

#include "vidstruct/config.hpp"
#include "vidstruct/flow.hpp"
#include "vidstruct/histogram.hpp"
#include "vidstruct/measures.hpp"
#include "vidstruct/pipeline.hpp"
#include "vidstruct/synthgen.hpp"
#include "vidstruct/thread_pool.hpp"

namespace vidstruct {
namespace {

synth::ClipScript pan_clip(int width, int height, int frames) {
  synth::ClipScript script;
  script.width = width;
  script.height = height;
  synth::Segment seg;
  seg.scene.texture_seed = 7;
  seg.scene.pan_x = 3.0;
  seg.scene.pan_y = 1.0;
  seg.length = frames;
  script.segments = {seg};
  return script;
}

// Two consecutive upper fields of a panning 512x384 clip.
struct FieldPair {
  LumaPlane a;
  LumaPlane b;
};

const FieldPair& field_pair() {
  static const FieldPair pair = [] {
    const auto frames = synth::render_all(pan_clip(512, 384, 2));
    return FieldPair{split_fields(frames[0]).first, split_fields(frames[1]).first};
  }();
  return pair;
}

void BM_Histogram(benchmark::State& state) {
  const LumaPlane& plane = field_pair().a;
  for (auto _ : state) benchmark::DoNotOptimize(histogram(plane));
}
BENCHMARK(BM_Histogram);

void BM_Flow(benchmark::State& state) {
  const FieldPair& p = field_pair();
  const FlowParams params;
  for (auto _ : state) benchmark::DoNotOptimize(compute_flow(p.a, p.b, params));
}
BENCHMARK(BM_Flow)->Unit(benchmark::kMillisecond);

void BM_Swr(benchmark::State& state) {
  const FieldPair& p = field_pair();
  const LumaPlane warped = warp(p.b, compute_flow(p.a, p.b, FlowParams{}));
  for (auto _ : state) benchmark::DoNotOptimize(swr(p.a, warped));
}
BENCHMARK(BM_Swr)->Unit(benchmark::kMicrosecond);

void BM_Activity(benchmark::State& state) {
  const FieldPair& p = field_pair();
  const FlowParams params;
  std::unique_ptr<ThreadPool> pool;
  if (state.range(0) > 1) pool = std::make_unique<ThreadPool>(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(activity(p.a, p.b, params, pool.get()));
}
BENCHMARK(BM_Activity)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PipelinePerFrame(benchmark::State& state) {
  constexpr int kFrames = 50;
  const synth::ClipScript script = pan_clip(512, 384, kFrames);
  Config config;
  config.threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto source = synth::make_source(script);
    benchmark::DoNotOptimize(analyze(*source, config));
  }
  state.SetItemsProcessed(state.iterations() * kFrames);
}
BENCHMARK(BM_PipelinePerFrame)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace
}  // namespace vidstruct

BENCHMARK_MAIN();
