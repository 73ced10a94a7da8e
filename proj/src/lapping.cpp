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

#include "dlk/transforms.hpp"

namespace dlk {
namespace {

using F = LappingFilter;

// Strictly increasing, so it has an exact left inverse on the integers.
int32_t lap_scale(int32_t t) {
  return t + static_cast<int32_t>((int64_t{t} * F::kScaleNum) >> F::kShift);
}

int32_t lap_unscale(int32_t y) {
  int64_t t = (int64_t{y} << F::kShift) / ((1 << F::kShift) + F::kScaleNum);
  while (lap_scale(static_cast<int32_t>(t + 1)) <= y) ++t;
  while (lap_scale(static_cast<int32_t>(t)) > y) --t;
  return static_cast<int32_t>(t);
}

int32_t lap_shear(int32_t t3) {
  return static_cast<int32_t>(
      (int64_t{t3} * F::kShearNum + (1 << (F::kShift - 1))) >> F::kShift);
}

}  // namespace

void lap4_forward(std::array<int32_t, 4>& x) {
  int32_t t3 = x[0] - x[3];
  int32_t t2 = x[1] - x[2];
  const int32_t t0 = x[0] - (t3 >> 1);
  const int32_t t1 = x[1] - (t2 >> 1);
  t2 = lap_scale(t2);
  t3 = lap_scale(t3);
  t2 += lap_shear(t3);
  x[0] = t0 + (t3 >> 1);
  x[3] = x[0] - t3;
  x[1] = t1 + (t2 >> 1);
  x[2] = x[1] - t2;
}

void lap4_inverse(std::array<int32_t, 4>& x) {
  int32_t t3 = x[0] - x[3];
  const int32_t t0 = x[0] - (t3 >> 1);
  int32_t t2 = x[1] - x[2];
  const int32_t t1 = x[1] - (t2 >> 1);
  t2 -= lap_shear(t3);
  t2 = lap_unscale(t2);
  t3 = lap_unscale(t3);
  x[0] = t0 + (t3 >> 1);
  x[3] = x[0] - t3;
  x[1] = t1 + (t2 >> 1);
  x[2] = x[1] - t2;
}

BlockGrid::BlockGrid(int width, int height)
    : width_(width),
      height_(height),
      size_log2_(static_cast<std::size_t>(width / 4) * (height / 4), 2),
      origin_(size_log2_.size()) {
  if (width % 4 || height % 4 || width <= 0 || height <= 0) {
    fail(ErrorCode::kInvalidArgument, "grid dimensions must be multiples of 4");
  }
  for (int y = 0; y < height; y += 4) {
    for (int x = 0; x < width; x += 4) {
      origin_[cell(x, y)] = (static_cast<uint32_t>(x) << 16) | y;
    }
  }
}

void BlockGrid::set_block(int x, int y, int size) {
  if (!is_block_size(size) || x % size || y % size || x + size > width_ ||
      y + size > height_) {
    fail(ErrorCode::kInvalidArgument, "block does not fit the grid");
  }
  const uint32_t org = (static_cast<uint32_t>(x) << 16) | y;
  for (int yy = y; yy < y + size; yy += 4) {
    for (int xx = x; xx < x + size; xx += 4) {
      size_log2_[cell(xx, yy)] = static_cast<uint8_t>(ilog2(size));
      origin_[cell(xx, yy)] = org;
    }
  }
}

int BlockGrid::size_at(int x, int y) const {
  return 1 << size_log2_[cell(x, y)];
}
int BlockGrid::origin_x(int x, int y) const {
  return static_cast<int>(origin_[cell(x, y)] >> 16);
}
int BlockGrid::origin_y(int x, int y) const {
  return static_cast<int>(origin_[cell(x, y)] & 0xFFFF);
}
bool BlockGrid::same_block(int x0, int y0, int x1, int y1) const {
  return origin_[cell(x0, y0)] == origin_[cell(x1, y1)];
}

namespace {

template <bool kForward>
void vertical_edges(PlaneI32& p, const BlockGrid& g) {
  std::array<int32_t, 4> s;
  for (int y = 0; y < p.height; ++y) {
    int32_t* row = p.row(y).data();
    for (int x = 4; x < p.width; x += 4) {
      if (g.same_block(x - 1, y, x, y)) continue;
      for (int i = 0; i < 4; ++i) s[i] = row[x - 2 + i];
      if constexpr (kForward) {
        lap4_forward(s);
      } else {
        lap4_inverse(s);
      }
      for (int i = 0; i < 4; ++i) row[x - 2 + i] = s[i];
    }
  }
}

template <bool kForward>
void horizontal_edges(PlaneI32& p, const BlockGrid& g) {
  std::array<int32_t, 4> s;
  for (int y = 4; y < p.height; y += 4) {
    for (int x = 0; x < p.width; ++x) {
      if (g.same_block(x, y - 1, x, y)) continue;
      for (int i = 0; i < 4; ++i) s[i] = p.at(x, y - 2 + i);
      if constexpr (kForward) {
        lap4_forward(s);
      } else {
        lap4_inverse(s);
      }
      for (int i = 0; i < 4; ++i) p.at(x, y - 2 + i) = s[i];
    }
  }
}

void check_grid(const PlaneI32& p, const BlockGrid& g) {
  if (p.width != g.width() || p.height != g.height()) {
    fail(ErrorCode::kInvalidArgument, "plane and block grid differ in size");
  }
}

}  // namespace

void prefilter_plane(PlaneI32& plane, const BlockGrid& grid) {
  check_grid(plane, grid);
  vertical_edges<true>(plane, grid);
  horizontal_edges<true>(plane, grid);
}

void postfilter_plane(PlaneI32& plane, const BlockGrid& grid) {
  check_grid(plane, grid);
  horizontal_edges<false>(plane, grid);
  vertical_edges<false>(plane, grid);
}

}  // namespace dlk
