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

#include "vidstruct/keyvalue.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "vidstruct/error.hpp"

namespace vidstruct {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

void kv_fail(const KvDocument& doc, int line, const std::string& message) {
  throw ConfigError(doc.source + ":" + std::to_string(line) + ": " + message);
}

KvDocument parse_kv(std::string_view text, std::string_view source) {
  KvDocument doc;
  doc.source = std::string(source);
  doc.sections.push_back(KvSection{"", 0, {}});
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') kv_fail(doc, line_no, "unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) kv_fail(doc, line_no, "empty section name");
      doc.sections.push_back(KvSection{std::string(name), line_no, {}});
    } else {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) kv_fail(doc, line_no, "expected 'key = value'");
      const auto key = trim(line.substr(0, eq));
      const auto value = trim(line.substr(eq + 1));
      if (key.empty()) kv_fail(doc, line_no, "missing key");
      doc.sections.back().entries.push_back(KvEntry{std::string(key), std::string(value), line_no});
    }
    if (end == text.size()) break;
  }
  return doc;
}

KvDocument parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_kv(ss.str(), path);
}

double kv_double(const KvDocument& doc, const KvEntry& entry) {
  double value = 0.0;
  const auto& s = entry.value;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    kv_fail(doc, entry.line, "'" + entry.key + "' expects a number, got '" + s + "'");
  }
  return value;
}

long long kv_int(const KvDocument& doc, const KvEntry& entry) {
  long long value = 0;
  const auto& s = entry.value;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    kv_fail(doc, entry.line, "'" + entry.key + "' expects an integer, got '" + s + "'");
  }
  return value;
}

std::vector<double> kv_double_list(const KvDocument& doc, const KvEntry& entry) {
  std::vector<double> out;
  std::string_view rest = entry.value;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    KvEntry tmp{entry.key, std::string(item), entry.line};
    out.push_back(kv_double(doc, tmp));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

std::vector<std::string> kv_words(const KvEntry& entry) {
  std::vector<std::string> words;
  std::istringstream ss(entry.value);
  for (std::string w; ss >> w;) words.push_back(w);
  return words;
}

}  // namespace vidstruct
