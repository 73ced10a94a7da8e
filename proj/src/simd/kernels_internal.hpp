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

#ifndef DLK_SRC_SIMD_KERNELS_INTERNAL_HPP_
#define DLK_SRC_SIMD_KERNELS_INTERNAL_HPP_

#include "dlk/simd.hpp"

namespace dlk::simd::internal {

// Defined in kernels_avx2.cpp when the compiler targets x86-64; returns the
// table without checking the running CPU.
const Kernels* avx2_table();

}  // namespace dlk::simd::internal

#endif  // DLK_SRC_SIMD_KERNELS_INTERNAL_HPP_
