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

#ifndef VIDSTRUCT_FRAME_IO_HPP_
#define VIDSTRUCT_FRAME_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vidstruct/luma_plane.hpp"

namespace vidstruct {

struct Rational {
  std::int64_t num = 25;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

std::string to_string(const Rational& r);

/// Interlacing as declared by the container. Advisory only: the detectors
/// never read it.
enum class DeclaredInterlacing : std::uint8_t { kUnknown, kProgressive, kTff, kBff };

std::string_view to_string(DeclaredInterlacing value);

struct SourceInfo {
  std::string path;
  int frame_width = 0;
  int frame_height = 0;
  Rational frame_rate;
  DeclaredInterlacing declared_interlacing = DeclaredInterlacing::kUnknown;
  std::optional<std::int64_t> frame_count;
  std::string colorspace;  // Y4M C token without the leading 'C'; "gray" for PGM
};

/// Sequential reader of luma planes in presentation order.
class FrameSource {
 public:
  virtual ~FrameSource() = default;

  const SourceInfo& info() const { return info_; }

  /// Next luma plane (origin kFullFrame), or nullopt at end of stream.
  /// Odd-height frames lose their bottom row; see cropped_frames().
  std::optional<LumaPlane> next_frame();

  std::int64_t frames_read() const { return frames_read_; }
  std::int64_t cropped_frames() const { return cropped_frames_; }

 protected:
  explicit FrameSource(SourceInfo info) : info_(std::move(info)) {}
  virtual std::optional<LumaPlane> read_frame(std::int64_t index) = 0;

  SourceInfo info_;

 private:
  std::int64_t frames_read_ = 0;
  std::int64_t cropped_frames_ = 0;
};

/// Opens a Y4M file or a directory of binary PGM files.
/// Throws InputError when the path cannot be read and FormatError when the
/// header or file set is malformed.
std::unique_ptr<FrameSource> open_source(const std::filesystem::path& path);

/// Parses a Y4M stream header line (without the trailing newline).
SourceInfo parse_y4m_header(std::string_view line);

/// Streaming Y4M writer. Luma is written as given, chroma as neutral 4:2:0.
class Y4mWriter {
 public:
  Y4mWriter(const std::filesystem::path& path, int width, int height, Rational rate,
            DeclaredInterlacing interlacing);
  void write(const LumaPlane& frame);
  std::int64_t frames_written() const { return frames_written_; }

 private:
  std::ofstream out_;
  int width_;
  int height_;
  std::vector<char> chroma_;
  std::int64_t frames_written_ = 0;
};

void write_pgm(const std::filesystem::path& path, const LumaPlane& plane);
LumaPlane read_pgm(const std::filesystem::path& path);

}  // namespace vidstruct

#endif  // VIDSTRUCT_FRAME_IO_HPP_
