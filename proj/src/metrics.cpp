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

#include "dlk/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "dlk/simd.hpp"

namespace dlk {

double plane_mse(const PlaneU8& a, const PlaneU8& b) {
  if (a.width != b.width || a.height != b.height) {
    fail(ErrorCode::kInvalidArgument, "plane sizes differ");
  }
  if (a.data.empty()) return 0;
  const uint64_t sse =
      simd::active_kernels().sse_u8(a.data.data(), b.data.data(), a.data.size());
  return static_cast<double>(sse) / static_cast<double>(a.data.size());
}

double psnr_from_mse(double mse) {
  if (mse <= 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

PsnrReport compare_images(const Image& a, const Image& b) {
  if (a.width != b.width || a.height != b.height || a.chroma != b.chroma ||
      a.planes.size() != b.planes.size()) {
    fail(ErrorCode::kInvalidArgument, "images differ in size or format");
  }
  static constexpr double kWeights[3] = {4, 1, 1};
  PsnrReport r;
  r.planes = static_cast<int>(a.planes.size());
  double num = 0, den = 0;
  for (int i = 0; i < r.planes; ++i) {
    r.mse[i] = plane_mse(a.planes[i], b.planes[i]);
    r.psnr[i] = psnr_from_mse(r.mse[i]);
    num += kWeights[i] * r.mse[i];
    den += kWeights[i];
  }
  r.weighted_mse = num / den;
  r.weighted = psnr_from_mse(r.weighted_mse);
  return r;
}

std::string format_psnr(double psnr) {
  if (std::isinf(psnr)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", psnr);
  return buf;
}

}  // namespace dlk
