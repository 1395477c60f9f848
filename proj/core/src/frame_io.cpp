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

#include "vidstruct/frame_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <system_error>

#include "vidstruct/error.hpp"

namespace vidstruct {

namespace fs = std::filesystem;

std::string to_string(const Rational& r) {
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

std::string_view to_string(DeclaredInterlacing value) {
  switch (value) {
    case DeclaredInterlacing::kUnknown:
      return "unknown";
    case DeclaredInterlacing::kProgressive:
      return "progressive";
    case DeclaredInterlacing::kTff:
      return "tff";
    case DeclaredInterlacing::kBff:
      return "bff";
  }
  return "unknown";
}

std::optional<LumaPlane> FrameSource::next_frame() {
  auto frame = read_frame(frames_read_);
  if (!frame) return std::nullopt;
  ++frames_read_;
  if (frame->height() % 2 != 0) {
    ++cropped_frames_;
    return crop_to_even_height(*frame);
  }
  return frame;
}

namespace {

std::int64_t parse_int(std::string_view text, std::string_view what) {
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw FormatError("invalid " + std::string(what) + " value '" + std::string(text) + "'");
  }
  return value;
}

Rational parse_ratio(std::string_view text, std::string_view what) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw FormatError("invalid " + std::string(what) + " ratio '" + std::string(text) + "'");
  }
  Rational r{parse_int(text.substr(0, colon), what), parse_int(text.substr(colon + 1), what)};
  return r;
}

std::size_t chroma_bytes(std::string_view colorspace, int w, int h) {
  const std::size_t cw = (static_cast<std::size_t>(w) + 1) / 2;
  const std::size_t ch = (static_cast<std::size_t>(h) + 1) / 2;
  if (colorspace.starts_with("420")) return 2 * cw * ch;
  if (colorspace == "422") return 2 * cw * static_cast<std::size_t>(h);
  if (colorspace == "444") return 2 * static_cast<std::size_t>(w) * h;
  return 0;  // mono
}

bool supported_colorspace(std::string_view c) {
  return c == "420" || c == "420jpeg" || c == "420paldv" || c == "420mpeg2" || c == "422" ||
         c == "444" || c == "mono";
}

class Y4mSource final : public FrameSource {
 public:
  Y4mSource(SourceInfo info, std::ifstream in)
      : FrameSource(std::move(info)), in_(std::move(in)) {
    luma_bytes_ = static_cast<std::size_t>(info_.frame_width) * info_.frame_height;
    chroma_skip_ = chroma_bytes(info_.colorspace, info_.frame_width, info_.frame_height);
  }

 protected:
  std::optional<LumaPlane> read_frame(std::int64_t index) override {
    std::string line;
    if (!std::getline(in_, line)) {
      if (!line.empty()) {
        throw FormatError("frame " + std::to_string(index) + ": truncated FRAME header");
      }
      return std::nullopt;
    }
    if (!line.starts_with("FRAME")) {
      throw FormatError("frame " + std::to_string(index) + ": expected FRAME marker, got '" +
                        line.substr(0, 16) + "'");
    }
    if (in_.eof()) {
      throw FormatError("frame " + std::to_string(index) + ": truncated FRAME header");
    }
    std::vector<std::uint8_t> luma(luma_bytes_);
    in_.read(reinterpret_cast<char*>(luma.data()), static_cast<std::streamsize>(luma_bytes_));
    if (static_cast<std::size_t>(in_.gcount()) != luma_bytes_) {
      throw FormatError("frame " + std::to_string(index) + ": truncated luma payload");
    }
    if (chroma_skip_ > 0) {
      in_.ignore(static_cast<std::streamsize>(chroma_skip_));
      if (static_cast<std::size_t>(in_.gcount()) != chroma_skip_) {
        throw FormatError("frame " + std::to_string(index) + ": truncated chroma payload");
      }
    }
    return LumaPlane(info_.frame_width, info_.frame_height, std::move(luma));
  }

 private:
  std::ifstream in_;
  std::size_t luma_bytes_ = 0;
  std::size_t chroma_skip_ = 0;
};

struct PgmHeader {
  int width = 0;
  int height = 0;
  std::streamoff data_offset = 0;
};

PgmHeader read_pgm_header(std::istream& in, const fs::path& path) {
  auto fail = [&](const std::string& why) {
    return FormatError(path.string() + ": " + why);
  };
  char magic[2] = {};
  in.read(magic, 2);
  if (in.gcount() != 2 || magic[0] != 'P' || magic[1] != '5') throw fail("not a binary P5 PGM");

  auto next_token = [&]() {
    std::string tok;
    int c = in.get();
    while (c != EOF) {
      if (c == '#') {
        while (c != EOF && c != '\n') c = in.get();
      } else if (std::isspace(c)) {
        c = in.get();
      } else {
        break;
      }
    }
    while (c != EOF && !std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      c = in.get();
    }
    if (tok.empty()) throw fail("truncated header");
    return tok;  // the single whitespace after the token has been consumed
  };
  PgmHeader h;
  h.width = static_cast<int>(parse_int(next_token(), "PGM width"));
  h.height = static_cast<int>(parse_int(next_token(), "PGM height"));
  const auto maxval = parse_int(next_token(), "PGM maxval");
  if (maxval != 255) throw fail("maxval must be 255, got " + std::to_string(maxval));
  h.data_offset = in.tellg();
  return h;
}

class PgmDirSource final : public FrameSource {
 public:
  PgmDirSource(SourceInfo info, std::vector<fs::path> files)
      : FrameSource(std::move(info)), files_(std::move(files)) {}

 protected:
  std::optional<LumaPlane> read_frame(std::int64_t index) override {
    if (index >= static_cast<std::int64_t>(files_.size())) return std::nullopt;
    try {
      return read_pgm(files_[static_cast<std::size_t>(index)]);
    } catch (const FormatError& e) {
      throw FormatError("frame " + std::to_string(index) + ": " + e.what());
    }
  }

 private:
  std::vector<fs::path> files_;
};

std::unique_ptr<FrameSource> open_pgm_dir(const fs::path& dir) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm") files.push_back(entry.path());
  }
  if (ec) throw InputError("cannot list directory " + dir.string() + ": " + ec.message());
  if (files.empty()) throw InputError("no .pgm files in " + dir.string());
  std::ranges::sort(files, [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });

  SourceInfo info;
  info.path = dir.string();
  info.frame_rate = {25, 1};
  info.colorspace = "gray";
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::ifstream in(files[i], std::ios::binary);
    if (!in) throw InputError("cannot open " + files[i].string());
    const auto h = read_pgm_header(in, files[i]);
    if (i == 0) {
      info.frame_width = h.width;
      info.frame_height = h.height;
    } else if (h.width != info.frame_width || h.height != info.frame_height) {
      throw FormatError("inconsistent PGM dimensions: " + files[i].filename().string() + " is " +
                        std::to_string(h.width) + "x" + std::to_string(h.height) + ", expected " +
                        std::to_string(info.frame_width) + "x" +
                        std::to_string(info.frame_height));
    }
  }
  info.frame_count = static_cast<std::int64_t>(files.size());
  return std::make_unique<PgmDirSource>(std::move(info), std::move(files));
}

}  // namespace

SourceInfo parse_y4m_header(std::string_view line) {
  constexpr std::string_view kMagic = "YUV4MPEG2";
  if (!line.starts_with(kMagic) || (line.size() > kMagic.size() && line[kMagic.size()] != ' ')) {
    throw FormatError("missing YUV4MPEG2 magic");
  }
  SourceInfo info;
  info.colorspace = "420jpeg";
  bool have_w = false;
  bool have_h = false;
  std::size_t pos = kMagic.size();
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    if (pos >= line.size()) break;
    auto end = line.find(' ', pos);
    if (end == std::string_view::npos) end = line.size();
    const auto tok = line.substr(pos, end - pos);
    pos = end;
    const auto value = tok.substr(1);
    switch (tok[0]) {
      case 'W':
        info.frame_width = static_cast<int>(parse_int(value, "W"));
        have_w = true;
        break;
      case 'H':
        info.frame_height = static_cast<int>(parse_int(value, "H"));
        have_h = true;
        break;
      case 'F':
        info.frame_rate = parse_ratio(value, "F");
        if (info.frame_rate.num <= 0 || info.frame_rate.den <= 0) {
          throw FormatError("invalid frame rate '" + std::string(tok) + "'");
        }
        break;
      case 'I':
        if (value == "p") {
          info.declared_interlacing = DeclaredInterlacing::kProgressive;
        } else if (value == "t") {
          info.declared_interlacing = DeclaredInterlacing::kTff;
        } else if (value == "b") {
          info.declared_interlacing = DeclaredInterlacing::kBff;
        } else if (value == "?" || value == "m") {
          info.declared_interlacing = DeclaredInterlacing::kUnknown;
        } else {
          throw FormatError("unsupported interlacing token '" + std::string(tok) + "'");
        }
        break;
      case 'A':
        parse_ratio(value, "A");
        break;
      case 'C':
        if (!supported_colorspace(value)) {
          throw FormatError("unsupported colorspace token '" + std::string(tok) + "'");
        }
        info.colorspace = std::string(value);
        break;
      case 'X':
        break;
      default:
        throw FormatError("unknown Y4M header token '" + std::string(tok) + "'");
    }
  }
  if (!have_w || !have_h) throw FormatError("Y4M header lacks W or H");
  if (info.frame_width < kMinPlaneSide || info.frame_height < kMinPlaneSide) {
    throw FormatError("frame size " + std::to_string(info.frame_width) + "x" +
                      std::to_string(info.frame_height) + " is below the minimum of 16x16");
  }
  return info;
}

std::unique_ptr<FrameSource> open_source(const fs::path& path) {
  std::error_code ec;
  const auto status = fs::status(path, ec);
  if (ec || !fs::exists(status)) throw InputError("cannot read " + path.string());
  if (fs::is_directory(status)) return open_pgm_dir(path);

  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || in.eof()) throw FormatError(path.string() + ": missing Y4M header");
  auto info = parse_y4m_header(line);
  info.path = path.string();
  return std::make_unique<Y4mSource>(std::move(info), std::move(in));
}

Y4mWriter::Y4mWriter(const fs::path& path, int width, int height, Rational rate,
                     DeclaredInterlacing interlacing)
    : out_(path, std::ios::binary), width_(width), height_(height) {
  if (!out_) throw InputError("cannot create " + path.string());
  char tag = '?';
  switch (interlacing) {
    case DeclaredInterlacing::kProgressive:
      tag = 'p';
      break;
    case DeclaredInterlacing::kTff:
      tag = 't';
      break;
    case DeclaredInterlacing::kBff:
      tag = 'b';
      break;
    case DeclaredInterlacing::kUnknown:
      break;
  }
  out_ << "YUV4MPEG2 W" << width << " H" << height << " F" << rate.num << ':' << rate.den << " I"
       << tag << " A1:1 C420jpeg\n";
  chroma_.assign(chroma_bytes("420jpeg", width, height), static_cast<char>(128));
}

void Y4mWriter::write(const LumaPlane& frame) {
  if (frame.width() != width_ || frame.height() != height_) {
    throw PreconditionError("Y4mWriter: frame size does not match the stream header");
  }
  out_ << "FRAME\n";
  out_.write(reinterpret_cast<const char*>(frame.data().data()),
             static_cast<std::streamsize>(frame.size()));
  out_.write(chroma_.data(), static_cast<std::streamsize>(chroma_.size()));
  if (!out_) throw InputError("Y4M write failed");
  ++frames_written_;
}

void write_pgm(const fs::path& path, const LumaPlane& plane) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot create " + path.string());
  out << "P5\n" << plane.width() << ' ' << plane.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(plane.data().data()),
            static_cast<std::streamsize>(plane.size()));
  if (!out) throw InputError("PGM write failed: " + path.string());
}

LumaPlane read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  const auto h = read_pgm_header(in, path);
  std::vector<std::uint8_t> data(static_cast<std::size_t>(h.width) * h.height);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (static_cast<std::size_t>(in.gcount()) != data.size()) {
    throw FormatError(path.string() + ": truncated pixel data");
  }
  return LumaPlane(h.width, h.height, std::move(data));
}

}  // namespace vidstruct
