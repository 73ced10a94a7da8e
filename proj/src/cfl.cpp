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

#include "dlk/cfl.hpp"

namespace dlk {

CflPredictor make_chroma_predictor(const CoeffBlock* luma, int chroma_size,
                                   int ratio, int sign) {
  CflPredictor p;
  p.sign = sign;
  if (!luma || luma->size != ratio * chroma_size) return p;
  p.available = true;
  p.r = CoeffBlock(chroma_size);
  for (int y = 0; y < chroma_size; ++y) {
    for (int x = 0; x < chroma_size; ++x) p.r.at(y, x) = sign * luma->at(y, x);
  }
  p.r.at(0, 0) = 0;
  return p;
}

std::vector<int32_t> band_slice(const CoeffBlock& block, const Band& band) {
  std::vector<int32_t> out(band.index.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = block.coeffs[band.index[i]];
  }
  return out;
}

void band_store(CoeffBlock& block, const Band& band,
                const std::vector<int32_t>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    block.coeffs[band.index[i]] = values[i];
  }
}

}  // namespace dlk
