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

#ifndef VIDSTRUCT_KEYFRAMES_HPP_
#define VIDSTRUCT_KEYFRAMES_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "vidstruct/config.hpp"

namespace vidstruct {

/// Activity between frames t and t + q, as seen by the extractor.
using PairActivity = std::function<double(std::int64_t t, std::int64_t q)>;

/// Keyframes of the shot [start, end]: start itself, then every frame at which
/// the accumulated activity since the previous keyframe reaches theta_kf.
std::vector<std::int64_t> extract_keyframes(std::int64_t start, std::int64_t end,
                                            const KeyframeParams& params,
                                            const PairActivity& activity);

}  // namespace vidstruct

#endif  // VIDSTRUCT_KEYFRAMES_HPP_
