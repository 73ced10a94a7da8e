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

#include "dlk/haar_dc.hpp"

#include <cmath>

#include "dlk/common.hpp"

namespace dlk {

Haar4 haar4_forward(int32_t a, int32_t b, int32_t c, int32_t d) {
  a += c;
  d -= b;
  const int32_t e = (a - d) >> 1;
  b = e - b;
  c = e - c;
  a -= b;
  d += c;
  return {a, b, c, d};
}

std::array<int32_t, 4> haar4_inverse(const Haar4& x) {
  int32_t a = x.dc, b = x.h, c = x.v, d = x.d;
  d -= c;
  a += b;
  const int32_t e = (a - d) >> 1;
  c = e - c;
  b = e - b;
  d += b;
  a -= c;
  return {a, b, c, d};
}

DcTree::DcTree(int root_size, const SplitFn& split) {
  build(0, 0, root_size, split);
}

int DcTree::build(int x, int y, int size, const SplitFn& split) {
  const int idx = static_cast<int>(nodes_.size());
  nodes_.push_back(DcNode{x, y, size});
  if (size > 4 && split(x, y, size)) {
    const int m = size / 2;
    const int c0 = build(x, y, m, split);
    const int c1 = build(x + m, y, m, split);
    const int c2 = build(x, y + m, m, split);
    const int c3 = build(x + m, y + m, m, split);
    nodes_[idx].child = {c0, c1, c2, c3};
  } else {
    leaves_.push_back(idx);
  }
  return idx;
}

void DcTree::forward() {
  // Children always follow their parent, so a reverse sweep is bottom up.
  for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
    DcNode& n = nodes_[i];
    if (n.leaf()) continue;
    const Haar4 x =
        haar4_forward(nodes_[n.child[0]].dc, nodes_[n.child[1]].dc,
                      nodes_[n.child[2]].dc, nodes_[n.child[3]].dc);
    n.dc = x.dc;
    n.h = x.h;
    n.v = x.v;
    n.d = x.d;
  }
}

void DcTree::inverse() {
  for (DcNode& n : nodes_) {
    if (n.leaf()) continue;
    const auto q = haar4_inverse({n.dc, n.h, n.v, n.d});
    for (int k = 0; k < 4; ++k) nodes_[n.child[k]].dc = q[k];
  }
}

int32_t predict_root_dc(const std::array<std::optional<int32_t>, 4>& nbr,
                        const std::array<int, 4>& weights) {
  int64_t num = 0;
  int64_t den = 0;
  for (int k = 0; k < 4; ++k) {
    if (!nbr[k]) continue;
    num += int64_t{weights[k]} * *nbr[k];
    den += weights[k];
  }
  if (den == 0) return 0;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return static_cast<int32_t>(div_round(num, den));
}

int32_t haar_step(int32_t base, int size) {
  const int level = ilog2(static_cast<uint64_t>(size)) - 3;
  const int64_t s = round_half_away(base * std::exp2(-0.5 * level));
  return static_cast<int32_t>(std::max<int64_t>(1, s));
}

namespace {

// h and v of a node are predicted from its parent's at a quarter of the
// value; a linear ramp scales by exactly that between levels.
int32_t hv_prediction(int32_t parent) {
  return static_cast<int32_t>(div_round(parent, 4));
}

constexpr int64_t kMaxDc = int64_t{1} << 24;

int32_t quantize(int32_t value, int32_t step) {
  return static_cast<int32_t>(div_round(value, step));
}

template <typename Coder>
void walk(DcTree& tree, const std::array<std::optional<int32_t>, 4>& nbr,
          int32_t base_step, DcModels& models, Coder&& code) {
  auto& nodes = tree.nodes();
  std::vector<int> parent(nodes.size(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (int c : nodes[i].child) {
      if (c >= 0) parent[c] = static_cast<int>(i);
    }
  }
  DcNode& root = nodes[0];
  const int32_t pred = predict_root_dc(nbr);
  const int32_t root_step = haar_step(base_step, root.size);
  root.dc = pred + code(models.root, root.dc - pred, root_step);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    DcNode& n = nodes[i];
    if (n.leaf()) continue;
    const int32_t step = haar_step(base_step, n.size);
    int32_t ph = 0, pv = 0;
    if (parent[i] >= 0) {
      ph = hv_prediction(nodes[parent[i]].h);
      pv = hv_prediction(nodes[parent[i]].v);
    }
    n.h = ph + code(models.hv, n.h - ph, step);
    n.v = pv + code(models.hv, n.v - pv, step);
    n.d = code(models.diag, n.d, step);
  }
  tree.inverse();
}

}  // namespace

void superblock_dc_encode(DcTree& tree,
                          const std::array<std::optional<int32_t>, 4>& nbr,
                          int32_t base_step, RangeEncoder& enc,
                          DcModels& models) {
  tree.forward();
  walk(tree, nbr, base_step, models,
       [&](FrequencyModel& m, int32_t residual, int32_t step) {
         const int32_t q = quantize(residual, step);
         enc.encode_signed(m, q);
         return q * step;
       });
}

void superblock_dc_decode(DcTree& tree,
                          const std::array<std::optional<int32_t>, 4>& nbr,
                          int32_t base_step, RangeDecoder& dec,
                          DcModels& models) {
  walk(tree, nbr, base_step, models,
       [&](FrequencyModel& m, int32_t, int32_t step) {
         const int64_t v = int64_t{dec.decode_signed(m)} * step;
         if (v < -kMaxDc || v > kMaxDc) {
           fail(ErrorCode::kCorruptStream, "DC residual out of range");
         }
         return static_cast<int32_t>(v);
       });
}

}  // namespace dlk
