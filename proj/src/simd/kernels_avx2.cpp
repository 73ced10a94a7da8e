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

#include "simd/kernels_internal.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

#include <algorithm>

#define DLK_AVX2 __attribute__((target("avx2")))

namespace dlk::simd {
namespace {

DLK_AVX2 uint64_t sse_u8_avx2(const uint8_t* a, const uint8_t* b,
                              std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const __m256i va = _mm256_cvtepu8_epi16(
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + i)));
    const __m256i vb = _mm256_cvtepu8_epi16(
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + i)));
    const __m256i d = _mm256_sub_epi16(va, vb);
    const __m256i sq = _mm256_madd_epi16(d, d);
    acc = _mm256_add_epi64(
        acc, _mm256_cvtepu32_epi64(_mm256_castsi256_si128(sq)));
    acc = _mm256_add_epi64(
        acc, _mm256_cvtepu32_epi64(_mm256_extracti128_si256(sq, 1)));
  }
  alignas(32) uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  uint64_t sum = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) {
    const int d = int{a[i]} - int{b[i]};
    sum += static_cast<uint64_t>(d * d);
  }
  return sum;
}

DLK_AVX2 inline __m256i load_rows(const int16_t* r0, const int16_t* r1) {
  return _mm256_inserti128_si256(
      _mm256_castsi128_si256(
          _mm_loadu_si128(reinterpret_cast<const __m128i*>(r0))),
      _mm_loadu_si128(reinterpret_cast<const __m128i*>(r1)), 1);
}

DLK_AVX2 inline __m256i crf_tap(__m256i sum, __m256i center, __m256i p,
                                __m256i thresh, __m256i weight) {
  const __m256i d = _mm256_sub_epi16(p, center);
  const __m256i keep = _mm256_cmpgt_epi16(thresh, _mm256_abs_epi16(d));
  return _mm256_add_epi16(
      sum, _mm256_mullo_epi16(_mm256_and_si256(d, keep), weight));
}

// Two rows of eight samples per iteration; odd heights reuse the last row.
DLK_AVX2 void crf_avx2(int16_t* dst, std::ptrdiff_t dst_stride,
                       const int16_t* src, std::ptrdiff_t src_stride, int w,
                       int h, const CrfTaps& taps, int threshold) {
  const __m256i thresh =
      _mm256_set1_epi16(static_cast<int16_t>(std::min(threshold, 32767)));
  const __m256i round = _mm256_set1_epi16(
      static_cast<int16_t>(1 << (taps.shift - 1)));
  const __m128i shift = _mm_cvtsi32_si128(taps.shift);
  const __m256i zero = _mm256_setzero_si256();
  const __m256i maxv = _mm256_set1_epi16(255);
  for (int y = 0; y < h; y += 2) {
    const int y1 = std::min(y + 1, h - 1);
    const int16_t* s0 = src + y * src_stride;
    const int16_t* s1 = src + y1 * src_stride;
    for (int x0 = 0; x0 < w; x0 += 8) {
      const int x = std::min(x0, w - 8);
      const __m256i c = load_rows(s0 + x, s1 + x);
      __m256i sum = zero;
      for (int k = 0; k < taps.count; ++k) {
        const std::ptrdiff_t o = taps.offset[k];
        const __m256i wk = _mm256_set1_epi16(taps.weight[k]);
        sum = crf_tap(sum, c, load_rows(s0 + x + o, s1 + x + o), thresh, wk);
        sum = crf_tap(sum, c, load_rows(s0 + x - o, s1 + x - o), thresh, wk);
      }
      const __m256i neg = _mm256_cmpgt_epi16(zero, sum);
      sum = _mm256_add_epi16(_mm256_add_epi16(sum, round), neg);
      __m256i v = _mm256_add_epi16(c, _mm256_sra_epi16(sum, shift));
      v = _mm256_min_epi16(_mm256_max_epi16(v, zero), maxv);
      _mm_storeu_si128(reinterpret_cast<__m128i*>(dst + y * dst_stride + x),
                       _mm256_castsi256_si128(v));
      _mm_storeu_si128(reinterpret_cast<__m128i*>(dst + y1 * dst_stride + x),
                       _mm256_extracti128_si256(v, 1));
    }
  }
}

DLK_AVX2 uint32_t model_update_avx2(uint16_t* counts, int n, int s, int inc,
                                    uint32_t total, uint32_t cap) {
  counts[s] = static_cast<uint16_t>(counts[s] + inc);
  total += inc;
  if (total <= cap) return total;
  const __m256i lane = _mm256_setr_epi16(0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10,
                                         11, 12, 13, 14, 15);
  const __m256i live =
      _mm256_cmpgt_epi16(_mm256_set1_epi16(static_cast<int16_t>(n)), lane);
  const __m256i floor1 = _mm256_and_si256(live, _mm256_set1_epi16(1));
  __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(counts));
  v = _mm256_max_epu16(_mm256_srli_epi16(v, 1), floor1);
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(counts), v);
  // Horizontal sum: widen pairs to 32 bits, then fold.
  __m256i s32 = _mm256_madd_epi16(v, _mm256_set1_epi16(1));
  __m128i f = _mm_add_epi32(_mm256_castsi256_si128(s32),
                            _mm256_extracti128_si256(s32, 1));
  f = _mm_add_epi32(f, _mm_shuffle_epi32(f, 0x4e));
  f = _mm_add_epi32(f, _mm_shuffle_epi32(f, 0xb1));
  return static_cast<uint32_t>(_mm_cvtsi128_si32(f));
}

}  // namespace

namespace internal {
const Kernels* avx2_table() {
  static const Kernels k{Isa::kAvx2, "avx2", sse_u8_avx2, crf_avx2,
                         model_update_avx2};
  return &k;
}
}  // namespace internal

}  // namespace dlk::simd

#else

namespace dlk::simd::internal {
const Kernels* avx2_table() { return nullptr; }
}  // namespace dlk::simd::internal

#endif
