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

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "dlk/common.hpp"
#include "dlk/simd.hpp"
#include "simd/kernels_internal.hpp"

namespace dlk::simd {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Kernels* detect() {
  // DLK_ISA=scalar forces the reference kernels.
  const char* env = std::getenv("DLK_ISA");
  if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
  if (const Kernels* k = avx2_kernels()) return k;
  return &scalar_kernels();
}

std::atomic<const Kernels*>& active() {
  static std::atomic<const Kernels*> k{detect()};
  return k;
}

}  // namespace

const Kernels* avx2_kernels() {
  static const bool ok = cpu_has_avx2();
  return ok ? internal::avx2_table() : nullptr;
}

const Kernels& active_kernels() {
  return *active().load(std::memory_order_relaxed);
}

void select_isa(Isa isa) {
  const Kernels* k = isa == Isa::kScalar ? &scalar_kernels() : avx2_kernels();
  if (!k) fail(ErrorCode::kInvalidArgument, "requested ISA not available");
  active().store(k, std::memory_order_relaxed);
}

}  // namespace dlk::simd
