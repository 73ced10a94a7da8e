// Copyright 2026 The dlk Authors
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

#include "dlk/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

namespace dlk {
namespace {

[[noreturn]] void bad(const std::string& what) {
  fail(ErrorCode::kUnsupportedFormat, what);
}

std::size_t frame_bytes(const Image& f) {
  std::size_t n = 0;
  for (const PlaneU8& p : f.planes) n += p.data.size();
  return n;
}

uint8_t clamp_u8(double v) {
  return static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

std::vector<Image> parse_y4m(std::span<const uint8_t> bytes) {
  const std::string magic = "YUV4MPEG2";
  if (bytes.size() < magic.size() ||
      !std::equal(magic.begin(), magic.end(), bytes.begin())) {
    bad("not a YUV4MPEG2 stream");
  }
  auto eol = std::find(bytes.begin(), bytes.end(), uint8_t{'\n'});
  if (eol == bytes.end()) bad("unterminated Y4M header");
  std::istringstream head(std::string(bytes.begin() + magic.size(), eol));
  int w = 0, h = 0;
  ChromaMode mode = ChromaMode::k420;
  std::string tok;
  while (head >> tok) {
    const char tag = tok[0];
    const std::string val = tok.substr(1);
    if (tag == 'W') {
      w = std::atoi(val.c_str());
    } else if (tag == 'H') {
      h = std::atoi(val.c_str());
    } else if (tag == 'C') {
      if (val == "mono") {
        mode = ChromaMode::kMono;
      } else if (val == "420" || val == "420jpeg" || val == "420mpeg2" ||
                 val == "420paldv") {
        mode = ChromaMode::k420;
      } else {
        bad("unsupported Y4M colour space C" + val);
      }
    } else if (tag == 'I') {
      if (val != "p" && val != "?") bad("interlaced Y4M is not supported");
    }
  }
  if (w <= 0 || h <= 0 || w > 0xFFFF || h > 0xFFFF) bad("bad Y4M dimensions");

  std::vector<Image> frames;
  auto pos = eol + 1;
  while (pos != bytes.end()) {
    const std::string fm = "FRAME";
    if (bytes.end() - pos < static_cast<std::ptrdiff_t>(fm.size()) ||
        !std::equal(fm.begin(), fm.end(), pos)) {
      bad("missing FRAME marker");
    }
    auto fe = std::find(pos, bytes.end(), uint8_t{'\n'});
    if (fe == bytes.end()) bad("unterminated FRAME header");
    pos = fe + 1;
    Image f = Image::make(w, h, mode);
    if (static_cast<std::size_t>(bytes.end() - pos) < frame_bytes(f)) {
      bad("truncated Y4M frame");
    }
    for (PlaneU8& p : f.planes) {
      std::copy_n(pos, p.data.size(), p.data.begin());
      pos += static_cast<std::ptrdiff_t>(p.data.size());
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

std::vector<uint8_t> format_y4m(const std::vector<Image>& frames) {
  if (frames.empty()) fail(ErrorCode::kInvalidArgument, "no frames");
  const Image& f0 = frames[0];
  std::string head = "YUV4MPEG2 W" + std::to_string(f0.width) + " H" +
                     std::to_string(f0.height) + " F25:1 Ip A1:1 C" +
                     (f0.chroma == ChromaMode::kMono ? "mono" : "420jpeg") +
                     "\n";
  std::vector<uint8_t> out(head.begin(), head.end());
  for (const Image& f : frames) {
    if (f.width != f0.width || f.height != f0.height || f.chroma != f0.chroma) {
      fail(ErrorCode::kInvalidArgument, "frames differ in size or format");
    }
    const std::string fm = "FRAME\n";
    out.insert(out.end(), fm.begin(), fm.end());
    for (const PlaneU8& p : f.planes) {
      out.insert(out.end(), p.data.begin(), p.data.end());
    }
  }
  return out;
}

Image parse_pnm(std::span<const uint8_t> bytes) {
  std::size_t pos = 0;
  auto token = [&]() {
    std::string t;
    while (pos < bytes.size()) {
      const char c = static_cast<char>(bytes[pos]);
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (!t.empty()) break;
        ++pos;
      } else {
        t.push_back(c);
        ++pos;
      }
    }
    return t;
  };
  const std::string magic = token();
  if (magic != "P5" && magic != "P6") bad("not a binary PGM or PPM file");
  const int w = std::atoi(token().c_str());
  const int h = std::atoi(token().c_str());
  const int maxval = std::atoi(token().c_str());
  if (w <= 0 || h <= 0 || w > 0xFFFF || h > 0xFFFF) bad("bad PNM dimensions");
  if (maxval != 255) bad("only 8-bit PNM is supported");
  ++pos;  // single whitespace before the raster
  const int channels = magic == "P5" ? 1 : 3;
  const std::size_t need = static_cast<std::size_t>(w) * h * channels;
  if (pos > bytes.size() || bytes.size() - pos < need) bad("truncated PNM raster");
  const uint8_t* px = bytes.data() + pos;
  if (channels == 1) {
    Image img = Image::make(w, h, ChromaMode::kMono);
    std::copy_n(px, need, img.planes[0].data.begin());
    return img;
  }
  Image img = Image::make(w, h, ChromaMode::k420);
  PlaneU8 cbf(w, h), crf(w, h);
  for (int i = 0; i < w * h; ++i) {
    const double r = px[3 * i], g = px[3 * i + 1], b = px[3 * i + 2];
    img.planes[0].data[i] = clamp_u8(0.299 * r + 0.587 * g + 0.114 * b);
    cbf.data[i] = clamp_u8(128 - 0.168736 * r - 0.331264 * g + 0.5 * b);
    crf.data[i] = clamp_u8(128 + 0.5 * r - 0.418688 * g - 0.081312 * b);
  }
  for (int c = 1; c <= 2; ++c) {
    const PlaneU8& full = c == 1 ? cbf : crf;
    PlaneU8& out = img.planes[c];
    for (int y = 0; y < out.height; ++y) {
      for (int x = 0; x < out.width; ++x) {
        int sum = 0, n = 0;
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            if (2 * x + dx < w && 2 * y + dy < h) {
              sum += full.at(2 * x + dx, 2 * y + dy);
              ++n;
            }
          }
        }
        out.at(x, y) = static_cast<uint8_t>((sum + n / 2) / n);
      }
    }
  }
  return img;
}

std::vector<uint8_t> format_pnm(const Image& img) {
  const bool mono = img.chroma == ChromaMode::kMono;
  const std::string head = std::string(mono ? "P5" : "P6") + "\n" +
                           std::to_string(img.width) + " " +
                           std::to_string(img.height) + "\n255\n";
  std::vector<uint8_t> out(head.begin(), head.end());
  if (mono) {
    out.insert(out.end(), img.planes[0].data.begin(), img.planes[0].data.end());
    return out;
  }
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double yy = img.planes[0].at(x, y);
      const double cb = img.planes[1].at(x / 2, y / 2) - 128.0;
      const double cr = img.planes[2].at(x / 2, y / 2) - 128.0;
      out.push_back(clamp_u8(yy + 1.402 * cr));
      out.push_back(clamp_u8(yy - 0.344136 * cb - 0.714136 * cr));
      out.push_back(clamp_u8(yy + 1.772 * cb));
    }
  }
  return out;
}

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::kIo, "read failed: " + path);
  return data;
}

void write_file(const std::string& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot create " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIo, "write failed: " + path);
}

std::vector<Image> load_frames(const std::string& path) {
  const std::vector<uint8_t> data = read_file(path);
  if (data.size() >= 9 && std::equal(data.begin(), data.begin() + 9,
                                     std::string("YUV4MPEG2").begin())) {
    return parse_y4m(data);
  }
  return {parse_pnm(data)};
}

void save_frames(const std::string& path, const std::vector<Image>& frames) {
  auto ends_with = [&](const std::string& s) {
    return path.size() >= s.size() &&
           path.compare(path.size() - s.size(), s.size(), s) == 0;
  };
  if (ends_with(".y4m")) {
    write_file(path, format_y4m(frames));
    return;
  }
  const bool pgm = ends_with(".pgm"), ppm = ends_with(".ppm");
  if (!pgm && !ppm) bad("output must be .y4m, .pgm or .ppm");
  if (frames.size() != 1) bad("PNM output holds a single frame");
  if (pgm && frames[0].chroma != ChromaMode::kMono) {
    bad("PGM output needs a mono frame");
  }
  write_file(path, format_pnm(frames[0]));
}

}  // namespace dlk
