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

#include <random>

#include "doctest.h"
#include "dlk/dering.hpp"
#include "dlk/transforms.hpp"
#include "support/dering_oracles.hpp"

namespace dlk {
namespace {

std::array<int16_t, 64> random_block(std::mt19937& rng) {
  std::array<int16_t, 64> b;
  for (auto& v : b) v = static_cast<int16_t>(rng() % 256);
  return b;
}

std::array<int16_t, 64> rotate_cw(const std::array<int16_t, 64>& b) {
  std::array<int16_t, 64> r;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) r[i * 8 + j] = b[(7 - j) * 8 + i];
  }
  return r;
}

// Coarse 8x8 DCT quantization of a plane, producing ringing.
PlaneU8 quantize_coarsely(const PlaneU8& src, int step) {
  PlaneU8 out(src.width, src.height);
  for (int by = 0; by < src.height; by += 8) {
    for (int bx = 0; bx < src.width; bx += 8) {
      std::vector<int32_t> px(64);
      for (int i = 0; i < 64; ++i) px[i] = src.at(bx + i % 8, by + i / 8);
      CoeffBlock c = dct_forward(px, 8);
      for (auto& v : c.coeffs) v = static_cast<int32_t>(div_round(v, step) * step);
      const auto rec = dct_inverse(c);
      for (int i = 0; i < 64; ++i) {
        out.at(bx + i % 8, by + i / 8) =
            static_cast<uint8_t>(std::clamp(rec[i], 0, 255));
      }
    }
  }
  return out;
}

double psnr(const PlaneU8& a, const PlaneU8& b) {
  double e = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = double(a.data[i]) - b.data[i];
    e += d * d;
  }
  return 10 * std::log10(255.0 * 255.0 * a.data.size() / e);
}

}  // namespace

TEST_CASE("conditional replacement examples") {
  const std::vector<int> w{3, 3, 2, 2, 1, 1};
  CHECK(conditional_replace(std::vector<int>(6, 100), 100, w, 4, 50) == 100);
  CHECK(conditional_replace(std::vector<int>{0, 255, 3, 9, 70, 1}, 100, w, 4,
                            0) == 100);
  CHECK(conditional_replace(std::vector<int>{200, 100, 100, 100, 100, 100},
                            100, w, 4, 20) == 100);
  // Within threshold: 100 + round(3 * 16 / 16).
  CHECK(conditional_replace(std::vector<int>{116, 100, 100, 100, 100, 100},
                            100, w, 4, 20) == 103);
}

TEST_CASE("direction examples") {
  std::array<int16_t, 64> step{};
  for (int i = 0; i < 64; ++i) step[i] = (i % 8) < 4 ? 0 : 255;
  CHECK(detect_direction(step.data(), 8).direction == 4);
  std::array<int16_t, 64> flat;
  flat.fill(77);
  const DirectionResult f = detect_direction(flat.data(), 8);
  CHECK(f.direction == 0);
  CHECK(f.score == 0);
  std::array<int16_t, 64> diag{};
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) diag[i * 8 + j] = i + j >= 8 ? 255 : 0;
  }
  CHECK(detect_direction(diag.data(), 8).direction == 2);
}

TEST_CASE("direction detector matches brute force") {
  std::mt19937 rng(60);
  for (int iter = 0; iter < 1000; ++iter) {
    const auto b = random_block(rng);
    REQUIRE(detect_direction(b.data(), 8).direction ==
            testing::brute_force_direction(b));
  }
  for (int d = 0; d < kDirections; ++d) {
    for (int phase = 0; phase < 2; ++phase) {
      const auto b = testing::edge_block(d, phase);
      CAPTURE(d);
      CHECK(detect_direction(b.data(), 8).direction ==
            testing::brute_force_direction(b));
      CHECK(detect_direction(b.data(), 8).direction == d);
    }
  }
}

TEST_CASE("direction invariance and rotation") {
  std::mt19937 rng(61);
  for (int iter = 0; iter < 1000; ++iter) {
    auto b = random_block(rng);
    const DirectionResult r = detect_direction(b.data(), 8);
    const auto costs = direction_costs(b.data(), 8);
    auto shifted = b;
    for (auto& v : shifted) v = static_cast<int16_t>(v + 37);
    CHECK(detect_direction(shifted.data(), 8).direction == r.direction);
    const auto rot = rotate_cw(b);
    const auto rcosts = direction_costs(rot.data(), 8);
    for (int d = 0; d < kDirections; ++d) {
      REQUIRE(rcosts[(d + 4) & 7] == costs[d]);
    }
  }
}

TEST_CASE("threshold mapping") {
  CHECK(dering_threshold(20, 0) == 0);
  CHECK(dering_threshold(20, 1) == 10);
  CHECK(dering_threshold(20, 3) == 20);
  CHECK(dering_threshold(20, 5) == 40);
  CHECK(default_dering_t0(1) == 1);
  CHECK(default_dering_t0(64) == 18);  // 64^0.7 = 18.38
  CHECK(default_dering_t0(4096) == 255);
}

TEST_CASE("identity configurations") {
  std::mt19937 rng(62);
  std::vector<PlaneU8> planes{PlaneU8(64, 64)};
  for (auto& v : planes[0].data) v = static_cast<uint8_t>(rng());
  const auto before = planes;
  dering_frame(planes, {64}, 0, {5});
  CHECK(planes == before);
  dering_frame(planes, {64}, 40, {0});
  CHECK(planes == before);
  std::vector<PlaneU8> flat{PlaneU8(128, 64, 93)};
  const auto flat_before = flat;
  dering_frame(flat, {64}, 255, {5, 3});
  CHECK(flat == flat_before);
}

TEST_CASE("large thresholds give the plain two-stage FIR") {
  std::mt19937 rng(63);
  PlaneU8 p(32, 32);
  for (auto& v : p.data) v = static_cast<uint8_t>(rng());
  const DeringPlane src(p);
  for (int d = 0; d < kDirections; ++d) {
    uint8_t out[64];
    dering_block(src, 8, 8, d, 256, out, 8);
    // Independent evaluation on a 12x12 stage-1 window.
    const auto t1 = direction_taps(d, 32);
    const auto t2 = orthogonal_taps(d, 12);
    int s1[144];
    for (int y = 0; y < 12; ++y) {
      for (int x = 0; x < 12; ++x) {
        const int cx = 6 + x, cy = 6 + y;
        const int c = p.at(cx, cy);
        int sum = 0;
        for (int k = 0; k < t1.count; ++k) {
          const int dy = static_cast<int>(std::floor(double(t1.offset[k]) / 32 + 0.5));
          const int dx = static_cast<int>(t1.offset[k] - dy * 32);
          sum += t1.weight[k] * (p.at(cx + dx, cy + dy) - c);
          sum += t1.weight[k] * (p.at(cx - dx, cy - dy) - c);
        }
        s1[y * 12 + x] = std::clamp(c + (sum >= 0 ? (sum + 8) >> 4 : -((-sum + 8) >> 4)), 0, 255);
      }
    }
    for (int y = 0; y < 8; ++y) {
      for (int x = 0; x < 8; ++x) {
        const int c = s1[(y + 2) * 12 + x + 2];
        int sum = 0;
        for (int k = 0; k < t2.count; ++k) {
          const int o = static_cast<int>(t2.offset[k]);
          sum += t2.weight[k] * (s1[(y + 2) * 12 + x + 2 + o] - c);
          sum += t2.weight[k] * (s1[(y + 2) * 12 + x + 2 - o] - c);
        }
        const int want = std::clamp(c + (sum >= 0 ? (sum + 4) >> 3 : -((-sum + 4) >> 3)), 0, 255);
        CAPTURE(d);
        REQUIRE(out[y * 8 + x] == want);
      }
    }
  }
}

TEST_CASE("deringing raises PSNR on a ringing picture") {
  const PlaneU8 src = testing::ringing_source(128, 128);
  const int step = 160;
  std::vector<PlaneU8> dec{quantize_coarsely(src, step)};
  const double before = psnr(src, dec[0]);
  const int t0 = default_dering_t0(step / 2);
  std::vector<PlaneU8> filtered = dec;
  dering_frame(filtered, {64}, t0, std::vector<uint8_t>(4, 3));
  const double after = psnr(src, filtered[0]);
  MESSAGE("psnr " << before << " -> " << after);
  CHECK(after > before);
  const auto idx = choose_dering(dec, {src}, {64}, {{128, 128}}, t0);
  std::vector<PlaneU8> chosen = dec;
  dering_frame(chosen, {64}, t0, idx);
  CHECK(psnr(src, chosen[0]) >= after - 1e-9);
}

}  // namespace dlk
