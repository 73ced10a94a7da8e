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

#ifndef DLK_TESTS_SUPPORT_DERING_ORACLES_HPP_
#define DLK_TESTS_SUPPORT_DERING_ORACLES_HPP_

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "dlk/dering.hpp"

namespace dlk::testing {

// Direction with the least total squared deviation from per-line means,
// computed directly in floating point; lowest index wins ties.
inline int brute_force_direction(const std::array<int16_t, 64>& b) {
  int best = 0;
  double best_cost = 1e300;
  for (int d = 0; d < kDirections; ++d) {
    std::map<int, std::vector<double>> lines;
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) lines[direction_line(d, i, j)].push_back(b[i * 8 + j]);
    }
    double cost = 0;
    for (const auto& [key, v] : lines) {
      double mean = 0;
      for (double x : v) mean += x;
      mean /= v.size();
      for (double x : v) cost += (x - mean) * (x - mean);
    }
    if (cost < best_cost - 1e-6) {
      best_cost = cost;
      best = d;
    }
  }
  return best;
}

// Two-level block whose boundary runs along direction d.
inline std::array<int16_t, 64> edge_block(int d, int phase) {
  std::array<int16_t, 64> b{};
  const int split = direction_line(d, 3 + phase, 4);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      b[i * 8 + j] = direction_line(d, i, j) < split ? 30 : 220;
    }
  }
  return b;
}

// Sharp-edged test picture: a disc, a diagonal band and a vertical bar.
inline PlaneU8 ringing_source(int w, int h) {
  PlaneU8 p(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = x - w * 0.35, dy = y - h * 0.4;
      uint8_t v = 40;
      if (dx * dx + dy * dy < (w * 0.22) * (w * 0.22)) v = 210;
      if (std::abs((x - y) - w / 4) < 6) v = 250;
      if (x > w * 3 / 4 && x < w * 3 / 4 + 9) v = 0;
      p.at(x, y) = v;
    }
  }
  return p;
}

}  // namespace dlk::testing

#endif  // DLK_TESTS_SUPPORT_DERING_ORACLES_HPP_
