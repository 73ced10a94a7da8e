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

#ifndef DLK_CFL_HPP_
#define DLK_CFL_HPP_

#include <cstdint>
#include <vector>

#include "dlk/pvq.hpp"
#include "dlk/transforms.hpp"

namespace dlk {

struct CflPredictor {
  bool available = false;
  int sign = 1;
  CoeffBlock r;  // chroma_size x chroma_size, DC zeroed
};

// Chroma prediction from the reconstructed coefficients of the co-located
// luma block. ratio is the luma/chroma size ratio of the sampling: 1 for
// 4:4:4 copies the block, 2 for 4:2:0 takes the low-frequency quarter of a
// luma block twice the chroma size. A luma block of any other size, or a null
// one, leaves the predictor unavailable.
CflPredictor make_chroma_predictor(const CoeffBlock* luma, int chroma_size,
                                   int ratio, int sign = 1);

// Coefficients of one band, in band order.
std::vector<int32_t> band_slice(const CoeffBlock& block, const Band& band);
void band_store(CoeffBlock& block, const Band& band,
                const std::vector<int32_t>& values);

}  // namespace dlk

#endif  // DLK_CFL_HPP_
