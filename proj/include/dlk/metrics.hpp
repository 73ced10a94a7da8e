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

#ifndef DLK_METRICS_HPP_
#define DLK_METRICS_HPP_

#include <array>
#include <cstdint>
#include <string>

#include "dlk/common.hpp"

namespace dlk {

double plane_mse(const PlaneU8& a, const PlaneU8& b);
// 10 log10(255^2 / mse); +inf for mse 0.
double psnr_from_mse(double mse);

struct PsnrReport {
  int planes = 0;
  std::array<double, 3> mse{};
  std::array<double, 3> psnr{};
  double weighted_mse = 0;
  double weighted = 0;  // PSNR of the 4:1:1 weighted plane MSE
};

// Throws kInvalidArgument when the frames differ in size or format.
PsnrReport compare_images(const Image& a, const Image& b);

// Four decimals, or "inf".
std::string format_psnr(double psnr);

}  // namespace dlk

#endif  // DLK_METRICS_HPP_
