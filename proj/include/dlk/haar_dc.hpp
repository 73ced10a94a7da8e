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

#ifndef DLK_HAAR_DC_HPP_
#define DLK_HAAR_DC_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dlk/entropy.hpp"

namespace dlk {

struct Haar4 {
  int32_t dc, h, v, d;
  bool operator==(const Haar4&) const = default;
};

// Exactly invertible 2x2 Haar on (top-left, top-right, bottom-left,
// bottom-right). Scaled so dc = (a + b + c + d) / 2 up to lifting rounding.
Haar4 haar4_forward(int32_t a, int32_t b, int32_t c, int32_t d);
std::array<int32_t, 4> haar4_inverse(const Haar4& x);

struct DcNode {
  int x = 0;  // offset inside the superblock
  int y = 0;
  int size = 0;
  int32_t dc = 0;  // leaf DC, or the Haar dc of an internal node
  int32_t h = 0;
  int32_t v = 0;
  int32_t d = 0;
  std::array<int, 4> child{-1, -1, -1, -1};  // TL, TR, BL, BR
  bool leaf() const { return child[0] < 0; }
};

// Quadtree of transform-block DCs. nodes[0] is the root; leaves appear in
// z-order when walked depth first.
class DcTree {
 public:
  using SplitFn = std::function<bool(int x, int y, int size)>;

  DcTree() = default;
  DcTree(int root_size, const SplitFn& split);

  int root_size() const { return nodes_.empty() ? 0 : nodes_[0].size; }
  std::vector<DcNode>& nodes() { return nodes_; }
  const std::vector<DcNode>& nodes() const { return nodes_; }
  // Leaf indices in z-order.
  const std::vector<int>& leaves() const { return leaves_; }

  // Leaves -> internal Haar coefficients, bottom up.
  void forward();
  // Root dc and internal h/v/d -> leaf DCs, top down.
  void inverse();

 private:
  int build(int x, int y, int size, const SplitFn& split);

  std::vector<DcNode> nodes_;
  std::vector<int> leaves_;
};

// Root DC prediction weights for (left, top-left, top, top-right) in 1/16.
inline constexpr std::array<int, 4> kDcWeights{5, -2, 8, 5};

// Weighted neighbour prediction, renormalised over the neighbours present.
// Zero when none is.
int32_t predict_root_dc(const std::array<std::optional<int32_t>, 4>& nbr,
                        const std::array<int, 4>& weights = kDcWeights);

// Quantizer step for a node of the given size: base * 2^(-L/2) with
// L = log2(size / 8), at least 1.
int32_t haar_step(int32_t base, int size);

struct DcModels {
  FrequencyModel root{16};
  FrequencyModel hv{16};
  FrequencyModel diag{16};
};

// Codes the tree whose leaf DCs are set. On return the tree holds the
// reconstruction the decoder will produce.
void superblock_dc_encode(DcTree& tree,
                          const std::array<std::optional<int32_t>, 4>& nbr,
                          int32_t base_step, RangeEncoder& enc,
                          DcModels& models);
// Fills leaf DCs of a tree that already has the right shape.
void superblock_dc_decode(DcTree& tree,
                          const std::array<std::optional<int32_t>, 4>& nbr,
                          int32_t base_step, RangeDecoder& dec,
                          DcModels& models);

}  // namespace dlk

#endif  // DLK_HAAR_DC_HPP_
