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

#include "dlk/dering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace dlk {

namespace {

// (row, col) steps for taps 1..3 along each direction.
constexpr int kTapRow[kDirections][3] = {
    {0, 0, 0},    {0, -1, -1},  {-1, -2, -3}, {-1, -2, -3},
    {1, 2, 3},    {-1, -2, -3}, {-1, -2, -3}, {0, -1, -1}};
constexpr int kTapCol[kDirections][3] = {
    {1, 2, 3},    {1, 2, 3},    {1, 2, 3},    {0, 1, 1},
    {0, 0, 0},    {0, -1, -1},  {-1, -2, -3}, {-1, -2, -3}};
constexpr int kStage1Weight[3] = {3, 2, 1};
constexpr int kStage1Shift = 4;
constexpr int kStage2Weight[2] = {2, 1};
constexpr int kStage2Shift = 3;

// Second stage runs vertically for the near-horizontal directions and
// horizontally for everything else, the diagonals included.
bool cross_is_vertical(int d) { return d == 0 || d == 1 || d == 7; }

}  // namespace

int direction_line(int d, int row, int col) {
  switch (d) {
    case 0: return row;
    case 1: return row + (col >> 1);
    case 2: return row + col;
    case 3: return (row >> 1) + col;
    case 4: return col;
    case 5: return col + ((7 - row) >> 1);
    case 6: return col - row + 7;
    case 7: return row + ((7 - col) >> 1);
    default: fail(ErrorCode::kInvalidArgument, "bad direction");
  }
}

std::array<int64_t, kDirections> direction_costs(const int16_t* px,
                                                 std::ptrdiff_t stride) {
  std::array<int64_t, kDirections> cost{};
  for (int d = 0; d < kDirections; ++d) {
    int64_t sum[16] = {};
    int count[16] = {};
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        const int k = direction_line(d, i, j);
        sum[k] += px[i * stride + j];
        ++count[k];
      }
    }
    for (int k = 0; k < 16; ++k) {
      if (count[k]) cost[d] += sum[k] * sum[k] * (840 / count[k]);
    }
  }
  return cost;
}

DirectionResult detect_direction(const int16_t* px, std::ptrdiff_t stride) {
  const auto cost = direction_costs(px, stride);
  DirectionResult r;
  for (int d = 1; d < kDirections; ++d) {
    if (cost[d] > cost[r.direction]) r.direction = d;
  }
  r.score = cost[r.direction] - cost[(r.direction + 4) & 7];
  return r;
}

int conditional_replace(std::span<const int> taps, int center,
                        std::span<const int> weights, int shift,
                        int threshold) {
  int sum = 0;
  for (std::size_t k = 0; k < taps.size(); ++k) {
    const int diff = taps[k] - center;
    if (std::abs(diff) < threshold) sum += weights[k] * diff;
  }
  const int round = 1 << (shift - 1);
  return std::clamp(center + ((sum + round - (sum < 0)) >> shift), 0, 255);
}

simd::CrfTaps direction_taps(int d, std::ptrdiff_t stride) {
  simd::CrfTaps t;
  t.count = 3;
  t.shift = kStage1Shift;
  for (int k = 0; k < 3; ++k) {
    t.offset[k] = kTapRow[d][k] * stride + kTapCol[d][k];
    t.weight[k] = static_cast<int16_t>(kStage1Weight[k]);
  }
  return t;
}

simd::CrfTaps orthogonal_taps(int d, std::ptrdiff_t stride) {
  simd::CrfTaps t;
  t.count = 2;
  t.shift = kStage2Shift;
  const std::ptrdiff_t step = cross_is_vertical(d) ? stride : 1;
  for (int k = 0; k < 2; ++k) {
    t.offset[k] = (k + 1) * step;
    t.weight[k] = static_cast<int16_t>(kStage2Weight[k]);
  }
  return t;
}

DeringPlane::DeringPlane(const PlaneU8& p)
    : width_(p.width),
      height_(p.height),
      stride_(p.width + 2 * kBorder),
      data_(static_cast<std::size_t>(stride_) * (p.height + 2 * kBorder),
            simd::kCrfOutside) {
  for (int y = 0; y < height_; ++y) {
    int16_t* row = data_.data() + (y + kBorder) * stride_ + kBorder;
    for (int x = 0; x < width_; ++x) row[x] = p.at(x, y);
  }
}

void dering_block(const DeringPlane& src, int bx, int by, int d,
                  int threshold, uint8_t* dst, std::ptrdiff_t dst_stride) {
  constexpr int kMargin = 2;
  constexpr int kSpan = 8 + 2 * kMargin;
  const simd::Kernels& k = simd::active_kernels();
  int16_t tmp[kSpan * kSpan];
  const int16_t* origin = src.at(bx - kMargin, by - kMargin);
  k.crf(tmp, kSpan, origin, src.stride(), kSpan, kSpan,
        direction_taps(d, src.stride()), threshold);
  // Margin samples outside the plane stay outside for the second stage.
  for (int y = 0; y < kSpan; ++y) {
    for (int x = 0; x < kSpan; ++x) {
      if (origin[y * src.stride() + x] == simd::kCrfOutside) {
        tmp[y * kSpan + x] = simd::kCrfOutside;
      }
    }
  }
  int16_t out[64];
  k.crf(out, 8, tmp + kMargin * kSpan + kMargin, kSpan, 8, 8,
        orthogonal_taps(d, kSpan), threshold);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      dst[y * dst_stride + x] = static_cast<uint8_t>(out[y * 8 + x]);
    }
  }
}

int default_dering_t0(int q) {
  return static_cast<int>(
      std::min<int64_t>(255, round_half_away(std::pow(double(q), 0.7))));
}

int dering_threshold(int t0, int adjustment) {
  return (t0 * kDeringFactors.at(adjustment) + 2) >> 2;
}

namespace {

void dering_superblock(const DeringPlane& src, PlaneU8& dst, int x0, int y0,
                       int size, int threshold) {
  const int x1 = std::min(x0 + size, dst.width);
  const int y1 = std::min(y0 + size, dst.height);
  for (int by = y0; by + 8 <= y1; by += 8) {
    for (int bx = x0; bx + 8 <= x1; bx += 8) {
      const int d = detect_direction(src.at(bx, by), src.stride()).direction;
      dering_block(src, bx, by, d, threshold, &dst.at(bx, by), dst.width);
    }
  }
}

int superblock_cols(const PlaneU8& p, int sb) {
  return (p.width + sb - 1) / sb;
}

}  // namespace

void dering_frame(std::vector<PlaneU8>& planes,
                  const std::vector<int>& sb_size, int t0,
                  const std::vector<uint8_t>& indices) {
  if (t0 == 0) return;
  for (std::size_t pi = 0; pi < planes.size(); ++pi) {
    PlaneU8& p = planes[pi];
    const int sb = sb_size[pi];
    const DeringPlane src(p);
    const int cols = superblock_cols(p, sb);
    const int rows = (p.height + sb - 1) / sb;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const int idx = indices.at(static_cast<std::size_t>(r) * cols + c);
        const int t = dering_threshold(t0, idx);
        if (t == 0) continue;
        dering_superblock(src, p, c * sb, r * sb, sb, t);
      }
    }
  }
}

std::vector<uint8_t> choose_dering(
    const std::vector<PlaneU8>& decoded, const std::vector<PlaneU8>& source,
    const std::vector<int>& sb_size,
    const std::vector<std::array<int, 2>>& visible, int t0) {
  const int cols = superblock_cols(decoded[0], sb_size[0]);
  const int rows = (decoded[0].height + sb_size[0] - 1) / sb_size[0];
  std::vector<uint8_t> best(static_cast<std::size_t>(rows) * cols, 0);
  if (t0 == 0) return best;
  const int count = static_cast<int>(kDeringFactors.size());
  std::vector<std::vector<uint64_t>> sse(
      count, std::vector<uint64_t>(best.size(), 0));
  const simd::Kernels& k = simd::active_kernels();
  for (std::size_t pi = 0; pi < decoded.size(); ++pi) {
    const int sb = sb_size[pi];
    const DeringPlane src(decoded[pi]);
    for (int idx = 0; idx < count; ++idx) {
      PlaneU8 out = decoded[pi];
      const int t = dering_threshold(t0, idx);
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          if (t > 0) dering_superblock(src, out, c * sb, r * sb, sb, t);
          const int x1 = std::min((c + 1) * sb, visible[pi][0]);
          const int y1 = std::min((r + 1) * sb, visible[pi][1]);
          uint64_t e = 0;
          for (int y = r * sb; y < y1; ++y) {
            if (x1 > c * sb) {
              e += k.sse_u8(&out.at(c * sb, y), &source[pi].at(c * sb, y),
                            static_cast<std::size_t>(x1 - c * sb));
            }
          }
          sse[idx][static_cast<std::size_t>(r) * cols + c] += e;
        }
      }
    }
  }
  for (std::size_t s = 0; s < best.size(); ++s) {
    for (int idx = 1; idx < count; ++idx) {
      if (sse[idx][s] < sse[best[s]][s]) best[s] = static_cast<uint8_t>(idx);
    }
  }
  return best;
}

}  // namespace dlk
