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

#include "vidstruct/keyframes.hpp"

#include <cmath>

#include "vidstruct/error.hpp"

namespace vidstruct {

std::vector<std::int64_t> extract_keyframes(std::int64_t start, std::int64_t end,
                                            const KeyframeParams& params,
                                            const PairActivity& activity) {
  if (end < start) throw PreconditionError("extract_keyframes: empty shot");
  if (params.accumulation_stride < 1) throw PreconditionError("extract_keyframes: stride must be >= 1");
  const int q = params.accumulation_stride;
  std::vector<std::int64_t> keyframes{start};
  // Neumaier summation: ten pairs of 0.05 must reach 0.5.
  double accumulated = 0.0;
  double compensation = 0.0;
  for (std::int64_t t = start; t + q <= end; t += q) {
    const double a = activity(t, q);
    const double sum = accumulated + a;
    compensation += std::abs(accumulated) >= std::abs(a) ? (accumulated - sum) + a : (a - sum) + accumulated;
    accumulated = sum;
    if (accumulated + compensation >= params.theta_kf) {
      keyframes.push_back(t + q);
      accumulated = 0.0;
      compensation = 0.0;
    }
  }
  return keyframes;
}

}  // namespace vidstruct
