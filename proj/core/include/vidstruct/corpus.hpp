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

#ifndef VIDSTRUCT_CORPUS_HPP_
#define VIDSTRUCT_CORPUS_HPP_

#include <optional>
#include <span>
#include <string_view>

namespace vidstruct {

struct CorpusEntry {
  std::string_view name;  // file stem, e.g. "hardcut_01"
  std::string_view text;  // clip script
};

/// Clip scripts compiled into the library, sorted by name.
std::span<const CorpusEntry> bundled_corpus();

std::optional<std::string_view> find_corpus_script(std::string_view name);

}  // namespace vidstruct

#endif  // VIDSTRUCT_CORPUS_HPP_
