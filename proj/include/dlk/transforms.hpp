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

#ifndef DLK_TRANSFORMS_HPP_
#define DLK_TRANSFORMS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dlk/common.hpp"

namespace dlk {

inline constexpr int kMinBlockSize = 4;
inline constexpr int kMaxBlockSize = 64;

inline bool is_block_size(int n) {
  return n >= kMinBlockSize && n <= kMaxBlockSize && (n & (n - 1)) == 0;
}

// N x N transform coefficients in raster order, DC first.
struct CoeffBlock {
  int size = 0;
  std::vector<int32_t> coeffs;

  CoeffBlock() = default;
  explicit CoeffBlock(int n)
      : size(n), coeffs(static_cast<std::size_t>(n) * n, 0) {}
  int32_t& at(int row, int col) { return coeffs[row * size + col]; }
  int32_t at(int row, int col) const { return coeffs[row * size + col]; }
};

// Orthonormal 2-D DCT-II on integers. The basis is held in Q14 and each
// output is rounded once (half away from zero), so results are identical on
// every platform. The codec feeds samples with 4 fractional bits.
CoeffBlock dct_forward(const int32_t* src, std::ptrdiff_t stride, int n);
void dct_inverse(const CoeffBlock& block, int32_t* dst, std::ptrdiff_t stride);

CoeffBlock dct_forward(std::span<const int32_t> samples, int n);
std::vector<int32_t> dct_inverse(const CoeffBlock& block);

// Q14 basis row u of the N-point DCT; exposed for tests.
std::span<const int32_t> dct_basis(int n);

// Lifting constants of the 4-point lapping filter; see lap4_forward.
struct LappingFilter {
  static constexpr int kScaleNum = 21;  // odd lanes scaled by 1 + 21/64
  static constexpr int kShearNum = 35;  // t2 += 35/64 * t3
  static constexpr int kShift = 6;
};

// Pre-filter on the span (x[0], x[1] | x[2], x[3]) across a block edge:
// butterfly, monotone integer scaling of the odd pair, shear, inverse
// butterfly. lap4_inverse undoes it exactly for every integer input.
void lap4_forward(std::array<int32_t, 4>& x);
void lap4_inverse(std::array<int32_t, 4>& x);

// Transform-block layout of one plane at 4x4 granularity.
class BlockGrid {
 public:
  BlockGrid() = default;
  BlockGrid(int width, int height);  // multiples of 4, initially all 4x4

  int width() const { return width_; }
  int height() const { return height_; }
  void set_block(int x, int y, int size);
  // Size of the block covering pixel (x, y) and its top-left corner.
  int size_at(int x, int y) const;
  int origin_x(int x, int y) const;
  int origin_y(int x, int y) const;
  bool same_block(int x0, int y0, int x1, int y1) const;

 private:
  std::size_t cell(int x, int y) const {
    return static_cast<std::size_t>(y / 4) * (width_ / 4) + x / 4;
  }
  int width_ = 0;
  int height_ = 0;
  std::vector<uint8_t> size_log2_;
  std::vector<uint32_t> origin_;  // packed (x << 16) | y
};

// Lapping over a whole plane. Every vertical block edge inside the plane is
// filtered first (row spans), then every horizontal edge (column spans).
// Frame edges are never filtered. The postfilter runs the inverse spans in
// the opposite order and restores the input exactly.
void prefilter_plane(PlaneI32& plane, const BlockGrid& grid);
void postfilter_plane(PlaneI32& plane, const BlockGrid& grid);

}  // namespace dlk

#endif  // DLK_TRANSFORMS_HPP_
