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
#include "dlk/cfl.hpp"

namespace dlk {
namespace {

// Smooth random texture so low-frequency structure dominates.
std::vector<int32_t> texture(std::mt19937& rng, int n) {
  std::vector<int32_t> px(n * n);
  const double fx = 0.2 + (rng() % 100) / 200.0, fy = 0.1 + (rng() % 100) / 250.0;
  const double ph = (rng() % 628) / 100.0;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      px[y * n + x] = static_cast<int32_t>(
          16 * (128 + 90 * std::sin(fx * x + fy * y * y / n + ph)));
    }
  }
  return px;
}

}  // namespace

TEST_CASE("availability") {
  CoeffBlock luma(16);
  CHECK_FALSE(make_chroma_predictor(nullptr, 8, 2).available);
  CHECK_FALSE(make_chroma_predictor(&luma, 4, 2).available);
  CHECK_FALSE(make_chroma_predictor(&luma, 16, 2).available);
  CHECK(make_chroma_predictor(&luma, 8, 2).available);
  CHECK(make_chroma_predictor(&luma, 16, 1).available);
  CHECK_FALSE(make_chroma_predictor(&luma, 8, 1).available);
}

TEST_CASE("predictor takes the low-frequency quarter with the sign") {
  CoeffBlock luma(8);
  for (int i = 0; i < 64; ++i) luma.coeffs[i] = i + 1;
  const CflPredictor p = make_chroma_predictor(&luma, 4, 2, -1);
  CHECK(p.r.at(0, 0) == 0);
  CHECK(p.r.at(1, 2) == -(1 * 8 + 2 + 1));
  CHECK(p.r.at(3, 3) == -(3 * 8 + 3 + 1));
}

TEST_CASE("chroma proportional to luma codes with zero angle") {
  std::mt19937 rng(70);
  for (int sign : {1, -1}) {
    for (int iter = 0; iter < 50; ++iter) {
      const int n = 8 << (iter % 3);
      const auto px = texture(rng, n);
      std::vector<int32_t> half(px.size());
      for (std::size_t i = 0; i < px.size(); ++i) half[i] = sign * px[i] / 2;
      const CoeffBlock luma = dct_forward(px, n);
      const CoeffBlock chroma = dct_forward(half, n);
      const CflPredictor p = make_chroma_predictor(&luma, n, 1);
      for (const Band& b : band_layout(n)) {
        const auto x = band_slice(chroma, b);
        const auto r = band_slice(p.r, b);
        const PvqBandCode c = pvq_quantize_band(x, r, 16 * 8, BandPred::kCfl);
        if (c.gain_index == 0) continue;
        REQUIRE(!c.noref);
        REQUIRE(c.cfl_sign == sign);
        REQUIRE(c.theta_index == 0);
      }
    }
  }
}

TEST_CASE("subsampled chroma is cheaper with the luma predictor") {
  std::mt19937 rng(71);
  double with = 0, without = 0;
  for (int iter = 0; iter < 40; ++iter) {
    const int n = 8;
    const auto px = texture(rng, 2 * n);
    std::vector<int32_t> sub(n * n);
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        const int s = px[2 * y * 2 * n + 2 * x] + px[2 * y * 2 * n + 2 * x + 1] +
                      px[(2 * y + 1) * 2 * n + 2 * x] +
                      px[(2 * y + 1) * 2 * n + 2 * x + 1];
        sub[y * n + x] = s / 8;
      }
    }
    const CoeffBlock luma = dct_forward(px, 2 * n);
    const CoeffBlock chroma = dct_forward(sub, n);
    const CflPredictor p = make_chroma_predictor(&luma, n, 2);
    const double q = 16 * 6;
    PvqModels m1, m2;
    RangeEncoder e1, e2;
    for (const Band& b : band_layout(n)) {
      const auto x = band_slice(chroma, b);
      with += pvq_encode_band(x, band_slice(p.r, b), q, BandPred::kCfl,
                              0.12 * q * q, m1, e1, true)
                  .bits;
      without += pvq_encode_band(x, band_slice(p.r, b), q, BandPred::kNone,
                                 0.12 * q * q, m2, e2, true)
                     .bits;
    }
  }
  MESSAGE("bits with cfl " << with << ", without " << without);
  CHECK(with < without);
}

TEST_CASE("band slices roundtrip") {
  CoeffBlock b(16);
  for (int i = 0; i < 256; ++i) b.coeffs[i] = i * 7 - 100;
  CoeffBlock c(16);
  c.coeffs[0] = b.coeffs[0];
  for (const Band& band : band_layout(16)) band_store(c, band, band_slice(b, band));
  CHECK(c.coeffs == b.coeffs);
}

}  // namespace dlk
