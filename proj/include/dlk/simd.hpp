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

#ifndef DLK_SIMD_HPP_
#define DLK_SIMD_HPP_

#include <array>
#include <cstddef>
#include <cstdint>

// Data-parallel inner loops. Every kernel has a scalar reference; wider
// variants must produce bit-identical results and are chosen at runtime.
namespace dlk::simd {

enum class Isa { kScalar, kAvx2 };

// Taps of a conditional replacement filter: element offsets relative to the
// center sample plus integer weights. The normaliser is 1 << shift.
struct CrfTaps {
  int count = 0;
  std::array<std::ptrdiff_t, 6> offset{};
  std::array<int16_t, 6> weight{};
  int shift = 0;
};

// Samples outside the picture are stored as this value so that every
// difference against them exceeds any legal threshold.
inline constexpr int16_t kCrfOutside = 30000;

struct Kernels {
  Isa isa;
  const char* name;

  // Sum of squared differences of two byte runs.
  uint64_t (*sse_u8)(const uint8_t* a, const uint8_t* b, std::size_t n);

  // y = x + round(sum_k w_k * R(x[k] - x, T) / 2^shift), clamped to [0, 255],
  // over a w x h region; w >= 8. Tap reads may leave the region.
  void (*crf)(int16_t* dst, std::ptrdiff_t dst_stride, const int16_t* src,
              std::ptrdiff_t src_stride, int w, int h, const CrfTaps& taps,
              int threshold);

  // counts[s] += inc; when the total exceeds cap every count is halved and
  // clamped to >= 1. counts has 16 lanes, lanes >= n are zero. Returns the
  // new total.
  uint32_t (*model_update)(uint16_t* counts, int n, int s, int inc,
                           uint32_t total, uint32_t cap);
};

const Kernels& scalar_kernels();
// nullptr when the build or the running CPU has no AVX2.
const Kernels* avx2_kernels();

const Kernels& active_kernels();
// Overrides runtime selection; throws dlk::Error if the ISA is unavailable.
void select_isa(Isa isa);

}  // namespace dlk::simd

#endif  // DLK_SIMD_HPP_
