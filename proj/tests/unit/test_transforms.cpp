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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "dlk/transforms.hpp"
#include "support/transform_oracles.hpp"

namespace dlk {

TEST_CASE("constant block has only a DC coefficient") {
  std::vector<int32_t> x(64, 128);
  const CoeffBlock c = dct_forward(x, 8);
  CHECK(c.coeffs[0] == 128 * 8);
  for (std::size_t i = 1; i < c.coeffs.size(); ++i) CHECK(c.coeffs[i] == 0);
}

TEST_CASE("unsupported sizes are rejected") {
  std::vector<int32_t> x(36, 0);
  CHECK_THROWS_AS(dct_forward(x, 6), Error);
  std::vector<int32_t> y(4, 0);
  CHECK_THROWS_AS(dct_forward(y, 2), Error);
}

TEST_CASE("integer DCT tracks the float reference and preserves energy") {
  std::mt19937 rng(10);
  for (int iter = 0; iter < 20; ++iter) {
    const int n = 16;
    std::vector<int32_t> x(n * n);
    std::vector<double> xd(n * n);
    for (int i = 0; i < n * n; ++i) {
      x[i] = static_cast<int32_t>(rng() % 256);
      xd[i] = x[i];
    }
    const CoeffBlock c = dct_forward(x, n);
    const auto ref = testing::reference_dct(xd, n);
    double e_pix = 0, e_coef = 0;
    for (int i = 0; i < n * n; ++i) {
      CHECK(std::abs(c.coeffs[i] - ref[i]) <= 1.0);
      e_pix += xd[i] * xd[i];
      e_coef += double(c.coeffs[i]) * c.coeffs[i];
    }
    CHECK(std::abs(e_coef - e_pix) <= 1e-3 * e_pix);
  }
}

TEST_CASE("forward then inverse is within one per sample at 8 bits") {
  std::mt19937 rng(11);
  for (int n : {4, 8, 16, 32, 64}) {
    int max_err = 0;
    const int count = n >= 32 ? 200 : 1000;
    for (int iter = 0; iter < count; ++iter) {
      std::vector<int32_t> x(n * n);
      for (auto& v : x) v = static_cast<int32_t>(rng() % 256);
      const auto y = dct_inverse(dct_forward(x, n));
      for (int i = 0; i < n * n; ++i) {
        max_err = std::max(max_err, std::abs(y[i] - x[i]));
      }
    }
    CAPTURE(n);
    CHECK(max_err <= 1);
  }
}

TEST_CASE("lap4 is exactly invertible and keeps constants") {
  std::mt19937 rng(12);
  for (int iter = 0; iter < 200000; ++iter) {
    std::array<int32_t, 4> x;
    const int32_t amp = iter % 2 ? 5000 : 100;
    for (auto& v : x) v = static_cast<int32_t>(rng() % (2 * amp + 1)) - amp;
    auto y = x;
    lap4_forward(y);
    lap4_inverse(y);
    REQUIRE(y == x);
  }
  for (int32_t k : {-4000, -1, 0, 7, 2048}) {
    std::array<int32_t, 4> x{k, k, k, k};
    lap4_forward(x);
    CHECK(x == std::array<int32_t, 4>{k, k, k, k});
  }
}

TEST_CASE("plane lapping roundtrips exactly for random layouts") {
  std::mt19937 rng(13);
  for (int iter = 0; iter < 100; ++iter) {
    const int w = 64 * (1 + rng() % 3), h = 64 * (1 + rng() % 2);
    const BlockGrid g = testing::random_grid(w, h, rng, 0.6);
    PlaneI32 p(w, h);
    for (auto& v : p.data) v = static_cast<int32_t>(rng() % 4096) - 2048;
    PlaneI32 q = p;
    prefilter_plane(q, g);
    postfilter_plane(q, g);
    REQUIRE(q == p);
  }
}

TEST_CASE("constant planes are invariant under the prefilter") {
  std::mt19937 rng(14);
  const BlockGrid g = testing::random_grid(128, 128, rng, 0.7);
  PlaneI32 p(128, 128, 1234);
  PlaneI32 q = p;
  prefilter_plane(q, g);
  CHECK(q == p);
}

TEST_CASE("frame edges are never filtered") {
  BlockGrid g(128, 64);
  g.set_block(0, 0, 64);
  g.set_block(64, 0, 64);
  std::mt19937 rng(15);
  PlaneI32 p(128, 64);
  for (auto& v : p.data) v = static_cast<int32_t>(rng() % 2000);
  PlaneI32 q = p;
  prefilter_plane(q, g);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 128; ++x) {
      if (x < 62 || x > 65) REQUIRE(q.at(x, y) == p.at(x, y));
    }
  }
}

TEST_CASE("synthesis support spans at most N + 4 samples per axis") {
  for (int n : {4, 8, 16, 32}) {
    BlockGrid g(192, 192);
    for (int y = 0; y < 192; y += 64) {
      for (int x = 0; x < 192; x += 64) {
        for (int yy = y; yy < y + 64; yy += n) {
          for (int xx = x; xx < x + 64; xx += n) g.set_block(xx, yy, n);
        }
      }
    }
    for (int coef : {0, 1, n + 1, n * n - 1}) {
      CoeffBlock c(n);
      c.coeffs[coef] = 1 << 16;
      PlaneI32 p(192, 192, 0);
      const int bx = 96, by = 96;
      dct_inverse(c, &p.at(bx, by), p.width);
      postfilter_plane(p, g);
      int x0 = 192, x1 = -1, y0 = 192, y1 = -1;
      for (int y = 0; y < 192; ++y) {
        for (int x = 0; x < 192; ++x) {
          if (p.at(x, y) != 0) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
          }
        }
      }
      CAPTURE(n);
      CAPTURE(coef);
      CHECK(x1 - x0 + 1 <= n + 4);
      CHECK(y1 - y0 + 1 <= n + 4);
    }
  }
}

TEST_CASE("lapping raises AR(1) coding gain of the 8-point DCT") {
  std::mt19937 rng(16);
  const double plain = testing::ar1_coding_gain(false, 0.95, 10000, rng);
  const double lapped = testing::ar1_coding_gain(true, 0.95, 10000, rng);
  MESSAGE("plain " << plain << " dB, lapped " << lapped << " dB");
  CHECK(plain == doctest::Approx(8.83).epsilon(0.02));
  CHECK(lapped > plain);
}

}  // namespace dlk
