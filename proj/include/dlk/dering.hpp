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

#ifndef DLK_DERING_HPP_
#define DLK_DERING_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dlk/common.hpp"
#include "dlk/simd.hpp"

namespace dlk {

// Directions step by 22.5 degrees: 0 horizontal, 2 rising at 45 degrees,
// 4 vertical, 6 falling at 45 degrees. Rotating a block by 90 degrees
// clockwise maps direction d to (d + 4) & 7.
inline constexpr int kDirections = 8;
// Adjustment factors in quarters of T0; index 0 disables the filter.
inline constexpr std::array<int, 6> kDeringFactors{0, 2, 3, 4, 6, 8};

// Line index of pixel (row, col) of an 8x8 block under direction d.
int direction_line(int d, int row, int col);

struct DirectionResult {
  int direction = 0;
  int64_t score = 0;  // best cost minus the orthogonal direction's cost
};

// Costs are sum over lines of S^2 * 840 / n (S the line sum, n its length);
// the largest cost has the smallest spread around the line means.
std::array<int64_t, kDirections> direction_costs(const int16_t* px,
                                                 std::ptrdiff_t stride);
DirectionResult detect_direction(const int16_t* px, std::ptrdiff_t stride);

// Single-sample form of the conditional replacement filter.
int conditional_replace(std::span<const int> taps, int center,
                        std::span<const int> weights, int shift,
                        int threshold);

simd::CrfTaps direction_taps(int d, std::ptrdiff_t stride);
simd::CrfTaps orthogonal_taps(int d, std::ptrdiff_t stride);

// A plane widened to int16 with a border of kCrfOutside samples.
class DeringPlane {
 public:
  static constexpr int kBorder = 8;

  DeringPlane() = default;
  explicit DeringPlane(const PlaneU8& p);

  int width() const { return width_; }
  int height() const { return height_; }
  std::ptrdiff_t stride() const { return stride_; }
  const int16_t* at(int x, int y) const {
    return data_.data() + (y + kBorder) * stride_ + x + kBorder;
  }

 private:
  int width_ = 0, height_ = 0;
  std::ptrdiff_t stride_ = 0;
  std::vector<int16_t> data_;
};

// Filters the 8x8 block at (bx, by): the along-direction stage over the
// block plus a 2-sample margin, then the cross stage on that result. Reads
// only src, so blocks are independent.
void dering_block(const DeringPlane& src, int bx, int by, int d,
                  int threshold, uint8_t* dst, std::ptrdiff_t dst_stride);

int default_dering_t0(int q);                  // min(255, round(q^0.7))
int dering_threshold(int t0, int adjustment);  // round(t0 * factor / 4)

// Frame filter. planes[i] is split into superblocks of sb_size[i]; each
// superblock uses indices[sb] in raster order. Only 8x8 blocks inside the
// plane are filtered (plane sizes are multiples of 8).
void dering_frame(std::vector<PlaneU8>& planes,
                  const std::vector<int>& sb_size, int t0,
                  const std::vector<uint8_t>& indices);

// Per-superblock index with the least squared error against source over the
// visible area (visible[i] = {w, h} for plane i). Ties pick the lower index.
std::vector<uint8_t> choose_dering(const std::vector<PlaneU8>& decoded,
                                   const std::vector<PlaneU8>& source,
                                   const std::vector<int>& sb_size,
                                   const std::vector<std::array<int, 2>>& visible,
                                   int t0);

}  // namespace dlk

#endif  // DLK_DERING_HPP_
