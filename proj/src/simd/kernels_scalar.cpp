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
#include <cstdlib>

#include "dlk/simd.hpp"
#include "simd/kernels_internal.hpp"

namespace dlk::simd {
namespace {

uint64_t sse_u8_c(const uint8_t* a, const uint8_t* b, std::size_t n) {
  uint64_t sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int d = int{a[i]} - int{b[i]};
    sum += static_cast<uint64_t>(d * d);
  }
  return sum;
}

void crf_c(int16_t* dst, std::ptrdiff_t dst_stride, const int16_t* src,
           std::ptrdiff_t src_stride, int w, int h, const CrfTaps& taps,
           int threshold) {
  const int round = 1 << (taps.shift - 1);
  for (int y = 0; y < h; ++y) {
    const int16_t* s = src + y * src_stride;
    int16_t* d = dst + y * dst_stride;
    for (int x = 0; x < w; ++x) {
      const int center = s[x];
      int sum = 0;
      for (int k = 0; k < taps.count; ++k) {
        const int p = s[x + taps.offset[k]];
        const int q = s[x - taps.offset[k]];
        const int dp = p - center;
        const int dq = q - center;
        if (std::abs(dp) < threshold) sum += taps.weight[k] * dp;
        if (std::abs(dq) < threshold) sum += taps.weight[k] * dq;
      }
      const int v = center + ((sum + round - (sum < 0)) >> taps.shift);
      d[x] = static_cast<int16_t>(std::clamp(v, 0, 255));
    }
  }
}

uint32_t model_update_c(uint16_t* counts, int n, int s, int inc,
                        uint32_t total, uint32_t cap) {
  counts[s] = static_cast<uint16_t>(counts[s] + inc);
  total += inc;
  if (total > cap) {
    total = 0;
    for (int i = 0; i < n; ++i) {
      counts[i] = static_cast<uint16_t>(std::max(1, counts[i] >> 1));
      total += counts[i];
    }
  }
  return total;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{Isa::kScalar, "scalar", sse_u8_c, crf_c,
                         model_update_c};
  return k;
}

}  // namespace dlk::simd
