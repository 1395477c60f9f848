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

#ifndef VIDSTRUCT_KEYVALUE_HPP_
#define VIDSTRUCT_KEYVALUE_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace vidstruct {

// Line-oriented "key = value" text with optional "[section]" headers and
// '#' comments. Used for both clip scripts and analysis config files.
struct KvEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct KvSection {
  std::string name;  // empty for entries before the first header
  int line = 0;
  std::vector<KvEntry> entries;
};

struct KvDocument {
  std::string source;  // used as the prefix of error messages
  std::vector<KvSection> sections;
};

/// Throws ConfigError("<source>:<line>: ...") on malformed lines.
KvDocument parse_kv(std::string_view text, std::string_view source);
KvDocument parse_kv_file(const std::string& path);

/// Typed value parsers. On failure they throw ConfigError naming the
/// source, line and key.
double kv_double(const KvDocument& doc, const KvEntry& entry);
long long kv_int(const KvDocument& doc, const KvEntry& entry);
std::vector<double> kv_double_list(const KvDocument& doc, const KvEntry& entry);
std::vector<std::string> kv_words(const KvEntry& entry);

[[noreturn]] void kv_fail(const KvDocument& doc, int line, const std::string& message);

}  // namespace vidstruct

#endif  // VIDSTRUCT_KEYVALUE_HPP_
