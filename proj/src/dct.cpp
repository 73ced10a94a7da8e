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

#include <cmath>
#include <mutex>

#include "dlk/transforms.hpp"

namespace dlk {
namespace {

constexpr int kBasisBits = 14;
constexpr int kOutShift = 2 * kBasisBits;

struct BasisTables {
  // tables[log2(n) - 2] holds n * n entries, row u = frequency.
  std::array<std::vector<int32_t>, 5> tables;

  BasisTables() {
    for (int l = 0; l < 5; ++l) {
      const int n = 4 << l;
      auto& t = tables[l];
      t.resize(static_cast<std::size_t>(n) * n);
      for (int u = 0; u < n; ++u) {
        const double a = std::sqrt((u == 0 ? 1.0 : 2.0) / n);
        for (int j = 0; j < n; ++j) {
          const double c = a * std::cos(M_PI * (2 * j + 1) * u / (2.0 * n));
          t[u * n + j] =
              static_cast<int32_t>(round_half_away(c * (1 << kBasisBits)));
        }
      }
    }
  }
};

const BasisTables& tables() {
  static const BasisTables t;
  return t;
}

int32_t descale(int64_t v) {
  constexpr int64_t half = int64_t{1} << (kOutShift - 1);
  return static_cast<int32_t>(v < 0 ? -((-v + half) >> kOutShift)
                                    : (v + half) >> kOutShift);
}

void check_size(int n) {
  if (!is_block_size(n)) {
    fail(ErrorCode::kInvalidArgument, "unsupported transform size");
  }
}

}  // namespace

std::span<const int32_t> dct_basis(int n) {
  check_size(n);
  return tables().tables[ilog2(n) - 2];
}

CoeffBlock dct_forward(const int32_t* src, std::ptrdiff_t stride, int n) {
  const auto c = dct_basis(n);
  // Columns first: tmp[u][k] = sum_j C[u][j] * x[j][k].
  std::vector<int64_t> tmp(static_cast<std::size_t>(n) * n, 0);
  for (int u = 0; u < n; ++u) {
    int64_t* t = &tmp[u * n];
    for (int j = 0; j < n; ++j) {
      const int64_t cu = c[u * n + j];
      const int32_t* x = src + j * stride;
      for (int k = 0; k < n; ++k) t[k] += cu * x[k];
    }
  }
  CoeffBlock out(n);
  for (int u = 0; u < n; ++u) {
    const int64_t* t = &tmp[u * n];
    for (int v = 0; v < n; ++v) {
      const int32_t* cv = &c[v * n];
      int64_t acc = 0;
      for (int k = 0; k < n; ++k) acc += t[k] * cv[k];
      out.coeffs[u * n + v] = descale(acc);
    }
  }
  return out;
}

void dct_inverse(const CoeffBlock& block, int32_t* dst,
                 std::ptrdiff_t stride) {
  const int n = block.size;
  const auto c = dct_basis(n);
  // tmp[j][v] = sum_u C[u][j] * X[u][v].
  std::vector<int64_t> tmp(static_cast<std::size_t>(n) * n, 0);
  for (int u = 0; u < n; ++u) {
    const int32_t* x = &block.coeffs[u * n];
    bool any = false;
    for (int v = 0; v < n && !any; ++v) any = x[v] != 0;
    if (!any) continue;
    for (int j = 0; j < n; ++j) {
      const int64_t cu = c[u * n + j];
      int64_t* t = &tmp[j * n];
      for (int v = 0; v < n; ++v) t[v] += cu * x[v];
    }
  }
  for (int j = 0; j < n; ++j) {
    const int64_t* t = &tmp[j * n];
    int32_t* out = dst + j * stride;
    for (int k = 0; k < n; ++k) {
      int64_t acc = 0;
      for (int v = 0; v < n; ++v) acc += t[v] * c[v * n + k];
      out[k] = descale(acc);
    }
  }
}

CoeffBlock dct_forward(std::span<const int32_t> samples, int n) {
  check_size(n);
  if (samples.size() != static_cast<std::size_t>(n) * n) {
    fail(ErrorCode::kInvalidArgument, "sample count does not match size");
  }
  return dct_forward(samples.data(), n, n);
}

std::vector<int32_t> dct_inverse(const CoeffBlock& block) {
  check_size(block.size);
  std::vector<int32_t> out(block.coeffs.size());
  dct_inverse(block, out.data(), block.size);
  return out;
}

}  // namespace dlk
