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

#ifndef DLK_COMMON_HPP_
#define DLK_COMMON_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlk {

enum class ErrorCode {
  kCorruptStream,
  kBadHeader,
  kUnsupportedFormat,
  kIo,
  kInvalidArgument,
};

// Single exception type for every recoverable failure in the library. The
// CLI maps the code onto process exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

// Round half away from zero. Used everywhere a real value becomes an index.
inline int64_t round_half_away(double v) {
  return static_cast<int64_t>(v < 0 ? -std::floor(-v + 0.5)
                                    : std::floor(v + 0.5));
}

// Integer division rounded half away from zero; den > 0.
inline int64_t div_round(int64_t num, int64_t den) {
  return num < 0 ? -((-num + den / 2) / den) : (num + den / 2) / den;
}

inline int ilog2(uint64_t v) { return 63 - __builtin_clzll(v); }

template <typename T>
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Plane() = default;
  Plane(int w, int h, T fill = T{})
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

  T& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  const T& at(int x, int y) const {
    return data[static_cast<size_t>(y) * width + x];
  }
  std::span<T> row(int y) {
    return {data.data() + static_cast<size_t>(y) * width,
            static_cast<size_t>(width)};
  }
  std::span<const T> row(int y) const {
    return {data.data() + static_cast<size_t>(y) * width,
            static_cast<size_t>(width)};
  }
  bool operator==(const Plane&) const = default;
};

using PlaneU8 = Plane<uint8_t>;
using PlaneI32 = Plane<int32_t>;

enum class ChromaMode : uint8_t { kMono = 0, k420 = 1 };

// An 8-bit frame. planes[0] is luma; 4:2:0 frames carry two chroma planes of
// ceil(width/2) x ceil(height/2).
struct Image {
  int width = 0;
  int height = 0;
  ChromaMode chroma = ChromaMode::kMono;
  std::vector<PlaneU8> planes;

  static Image make(int w, int h, ChromaMode mode, uint8_t fill = 128);
  int plane_count() const { return static_cast<int>(planes.size()); }
  bool operator==(const Image&) const = default;
};

inline Image Image::make(int w, int h, ChromaMode mode, uint8_t fill) {
  Image img;
  img.width = w;
  img.height = h;
  img.chroma = mode;
  img.planes.emplace_back(w, h, fill);
  if (mode == ChromaMode::k420) {
    img.planes.emplace_back((w + 1) / 2, (h + 1) / 2, fill);
    img.planes.emplace_back((w + 1) / 2, (h + 1) / 2, fill);
  }
  return img;
}

}  // namespace dlk

#endif  // DLK_COMMON_HPP_
