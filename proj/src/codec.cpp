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

#include "dlk/codec.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "dlk/cfl.hpp"
#include "dlk/dering.hpp"
#include "dlk/entropy.hpp"
#include "dlk/haar_dc.hpp"
#include "dlk/pvq.hpp"

namespace dlk {

int quantizer_for_index(int qi) {
  if (qi < 0 || qi > kMaxQi) {
    fail(ErrorCode::kInvalidArgument, "quantizer index out of range");
  }
  return static_cast<int>(round_half_away(std::exp2(qi / 6.0 + 1)));
}

// ---------------------------------------------------------------------------
// Header

std::array<uint8_t, kHeaderBytes> serialize_header(const FrameHeader& h) {
  if (h.width < 1 || h.width > 0xFFFF || h.height < 1 || h.height > 0xFFFF ||
      h.qi < 0 || h.qi > kMaxQi || h.dering_t0 < 0 || h.dering_t0 > 255) {
    fail(ErrorCode::kInvalidArgument, "header field out of range");
  }
  const uint32_t len = h.payload_bytes;
  return {'D',
          'L',
          'K',
          '1',
          kFormatVersion,
          static_cast<uint8_t>(h.width >> 8),
          static_cast<uint8_t>(h.width),
          static_cast<uint8_t>(h.height >> 8),
          static_cast<uint8_t>(h.height),
          static_cast<uint8_t>(h.chroma),
          static_cast<uint8_t>(h.qi),
          static_cast<uint8_t>(h.dering_t0),
          static_cast<uint8_t>(len >> 24),
          static_cast<uint8_t>(len >> 16),
          static_cast<uint8_t>(len >> 8),
          static_cast<uint8_t>(len)};
}

FrameHeader parse_header(std::span<const uint8_t> b) {
  if (b.size() < kHeaderBytes) fail(ErrorCode::kCorruptStream, "truncated header");
  if (b[0] != 'D' || b[1] != 'L' || b[2] != 'K' || b[3] != '1') {
    fail(ErrorCode::kBadHeader, "bad magic");
  }
  if (b[4] != kFormatVersion) fail(ErrorCode::kBadHeader, "unsupported version");
  FrameHeader h;
  h.width = b[5] << 8 | b[6];
  h.height = b[7] << 8 | b[8];
  if (h.width == 0 || h.height == 0) fail(ErrorCode::kBadHeader, "empty frame");
  if (b[9] > 1) fail(ErrorCode::kBadHeader, "bad chroma mode");
  h.chroma = static_cast<ChromaMode>(b[9]);
  h.qi = b[10];
  if (h.qi > kMaxQi) fail(ErrorCode::kBadHeader, "bad quantizer index");
  h.dering_t0 = b[11];
  h.payload_bytes = uint32_t{b[12]} << 24 | uint32_t{b[13]} << 16 |
                    uint32_t{b[14]} << 8 | b[15];
  return h;
}

// ---------------------------------------------------------------------------
// Plans

SuperblockPlan::SuperblockPlan(int size) : size_(size) {
  if (!is_block_size(size)) fail(ErrorCode::kInvalidArgument, "bad plan size");
  log2_.assign(static_cast<std::size_t>(size / 4) * (size / 4),
               static_cast<uint8_t>(ilog2(static_cast<uint64_t>(size))));
}

int SuperblockPlan::block_size_at(int x, int y) const {
  return 1 << log2_[static_cast<std::size_t>(y / 4) * (size_ / 4) + x / 4];
}

void SuperblockPlan::set_leaf(int x, int y, int size) {
  if (!is_block_size(size) || size > size_ || x % size || y % size ||
      x + size > size_ || y + size > size_) {
    fail(ErrorCode::kInvalidArgument, "leaf does not fit the plan");
  }
  const auto l = static_cast<uint8_t>(ilog2(static_cast<uint64_t>(size)));
  for (int yy = y; yy < y + size; yy += 4) {
    for (int xx = x; xx < x + size; xx += 4) {
      log2_[static_cast<std::size_t>(yy / 4) * (size_ / 4) + xx / 4] = l;
    }
  }
}

std::vector<std::array<int, 3>> SuperblockPlan::leaves() const {
  std::vector<std::array<int, 3>> out;
  std::function<void(int, int, int)> rec = [&](int x, int y, int n) {
    if (block_size_at(x, y) < n) {
      const int m = n / 2;
      rec(x, y, m);
      rec(x + m, y, m);
      rec(x, y + m, m);
      rec(x + m, y + m, m);
    } else {
      out.push_back({x, y, n});
    }
  };
  rec(0, 0, size_);
  return out;
}

SuperblockPlan SuperblockPlan::chroma_420() const {
  SuperblockPlan c(size_ / 2);
  for (const auto& [x, y, n] : leaves()) {
    const int cs = std::max(kMinBlockSize, n / 2);
    c.set_leaf(x / 2 / cs * cs, y / 2 / cs * cs, cs);
  }
  return c;
}

CoeffBlock hv_predict_ac(AcMode mode, const CoeffBlock* left,
                         const CoeffBlock* above, int n) {
  CoeffBlock r(n);
  if (mode == AcMode::kHorizontal) {
    if (!left || left->size != n) {
      fail(ErrorCode::kInvalidArgument, "horizontal prediction unavailable");
    }
    for (int row = 1; row < n; ++row) r.at(row, 0) = left->at(row, 0);
  } else if (mode == AcMode::kVertical) {
    if (!above || above->size != n) {
      fail(ErrorCode::kInvalidArgument, "vertical prediction unavailable");
    }
    for (int col = 1; col < n; ++col) r.at(0, col) = above->at(0, col);
  }
  return r;
}

namespace {

constexpr int32_t kMaxCoeffMag = 1 << 20;
constexpr int32_t kMaxSample = 1 << 16;

struct Quant {
  int q_int;      // Q in pixel units
  double q;       // Q in coefficient units (4 fractional bits)
  double lambda;  // per bit, in squared coefficient units
};

Quant make_quant(int q, double lambda_scale) {
  return {q, 16.0 * q, 256.0 * lambda_scale * q * q};
}

int level_of(int n) { return ilog2(static_cast<uint64_t>(n)) - 2; }

// The luma plane prefiltered with uniform n x n blocks, for n = 4..64.
std::array<PlaneI32, 5> uniform_prefiltered(const PlaneI32& luma) {
  std::array<PlaneI32, 5> out;
  for (int l = 0; l < 5; ++l) {
    const int n = 4 << l;
    BlockGrid g(luma.width, luma.height);
    for (int y = 0; y < luma.height; y += n) {
      for (int x = 0; x < luma.width; x += n) g.set_block(x, y, n);
    }
    out[l] = luma;
    prefilter_plane(out[l], g);
  }
  return out;
}

struct BlockCost {
  double distortion = 0;
  double bits = 0;
  int32_t dc = 0;
};

BlockCost trial_block(const PlaneI32& p, int x, int y, int n,
                      const Quant& qt, PvqModels& models) {
  const CoeffBlock c = dct_forward(&p.at(x, y), p.width, n);
  RangeEncoder counter = RangeEncoder().fork_counter();
  BlockCost cost;
  cost.dc = c.coeffs[0];
  for (const Band& b : band_layout(n)) {
    const std::vector<int32_t> xs = band_slice(c, b);
    const std::vector<int32_t> zero(xs.size(), 0);
    const BandResult res = pvq_encode_band(xs, zero, qt.q, BandPred::kNone,
                                           qt.lambda, models, counter, true);
    cost.distortion += res.distortion;
    cost.bits += res.bits;
  }
  return cost;
}

// Cost of the Haar details a split of an n x n node adds, from the DCs of
// its four children in z-order. h/v prediction from the parent is ignored.
BlockCost detail_cost(const std::array<int32_t, 4>& child_dc, int n,
                      const Quant& qt, DcModels& models) {
  const Haar4 hv = haar4_forward(child_dc[0], child_dc[1], child_dc[2], child_dc[3]);
  const int32_t step = haar_step(16 * qt.q_int, n);
  RangeEncoder counter = RangeEncoder().fork_counter();
  BlockCost cost;
  auto code = [&](FrequencyModel& m, int32_t value) {
    const int32_t q = static_cast<int32_t>(div_round(value, step));
    counter.encode_signed(m, q);
    const double e = double(value) - double(q) * step;
    cost.distortion += e * e;
  };
  code(models.hv, hv.h);
  code(models.hv, hv.v);
  code(models.diag, hv.d);
  cost.bits = counter.tell();
  cost.dc = hv.dc;
  return cost;
}

// Adapts the models along a chosen plan, as the real coder would.
void adapt_models(const std::array<PlaneI32, 5>& levels, int sbx, int sby,
                  const SuperblockPlan& plan, const Quant& qt, PvqModels& pvq,
                  DcModels& dc) {
  DcTree tree(kSuperblockSize,
              [&](int x, int y, int n) { return plan.is_split(x, y, n); });
  for (int li : tree.leaves()) {
    DcNode& node = tree.nodes()[li];
    node.dc = trial_block(levels[level_of(node.size)], sbx + node.x,
                          sby + node.y, node.size, qt, pvq)
                  .dc;
  }
  RangeEncoder counter = RangeEncoder().fork_counter();
  superblock_dc_encode(tree, {}, 16 * qt.q_int, counter, dc);
}

void check_plane(const PlaneI32& luma) {
  if (luma.width % kSuperblockSize || luma.height % kSuperblockSize ||
      luma.width == 0 || luma.height == 0) {
    fail(ErrorCode::kInvalidArgument, "plane is not a whole number of superblocks");
  }
}

}  // namespace

std::vector<SuperblockPlan> plan_frame(const PlaneI32& luma, int q,
                                       double lambda_scale) {
  check_plane(luma);
  const Quant qt = make_quant(q, lambda_scale);
  const auto levels = uniform_prefiltered(luma);
  PvqModels pvq;
  DcModels dc;
  std::vector<SuperblockPlan> plans;
  for (int sby = 0; sby < luma.height; sby += kSuperblockSize) {
    for (int sbx = 0; sbx < luma.width; sbx += kSuperblockSize) {
      SuperblockPlan plan;
      const PvqModels pvq_snapshot = pvq;
      const DcModels dc_snapshot = dc;
      // Returns the best cost J of the node and its DC.
      std::function<std::pair<double, int32_t>(int, int, int)> best =
          [&](int x, int y, int n) -> std::pair<double, int32_t> {
        PvqModels m = pvq_snapshot;
        const BlockCost c =
            trial_block(levels[level_of(n)], sbx + x, sby + y, n, qt, m);
        const double j = c.distortion + qt.lambda * c.bits;
        if (n == kMinBlockSize) {
          plan.set_leaf(x, y, n);
          return {j, c.dc};
        }
        const int h = n / 2;
        double split = 0;
        std::array<int32_t, 4> dcs;
        const int cx[4] = {x, x + h, x, x + h}, cy[4] = {y, y, y + h, y + h};
        for (int k = 0; k < 4; ++k) {
          const auto [jk, dk] = best(cx[k], cy[k], h);
          split += jk;
          dcs[k] = dk;
        }
        DcModels dm = dc_snapshot;
        const BlockCost details = detail_cost(dcs, n, qt, dm);
        split += details.distortion + qt.lambda * details.bits;
        if (split < j) return {split, details.dc};
        plan.set_leaf(x, y, n);
        return {j, c.dc};
      };
      best(0, 0, kSuperblockSize);
      adapt_models(levels, sbx, sby, plan, qt, pvq, dc);
      plans.push_back(std::move(plan));
    }
  }
  return plans;
}

PlanCost evaluate_plan(const PlaneI32& luma,
                       const std::vector<SuperblockPlan>& plans, int q,
                       double lambda_scale) {
  check_plane(luma);
  const Quant qt = make_quant(q, lambda_scale);
  const auto levels = uniform_prefiltered(luma);
  PvqModels pvq;
  DcModels dc;
  PlanCost total;
  const int cols = luma.width / kSuperblockSize;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const int sbx = static_cast<int>(i) % cols * kSuperblockSize;
    const int sby = static_cast<int>(i) / cols * kSuperblockSize;
    const SuperblockPlan& plan = plans[i];
    const PvqModels pvq_snapshot = pvq;
    const DcModels dc_snapshot = dc;
    std::function<int32_t(int, int, int)> visit = [&](int x, int y, int n) {
      if (!plan.is_split(x, y, n)) {
        PvqModels m = pvq_snapshot;
        const BlockCost c =
            trial_block(levels[level_of(n)], sbx + x, sby + y, n, qt, m);
        total.distortion += c.distortion / 256.0;
        total.bits += c.bits;
        return c.dc;
      }
      const int h = n / 2;
      const std::array<int32_t, 4> dcs = {visit(x, y, h), visit(x + h, y, h),
                                          visit(x, y + h, h),
                                          visit(x + h, y + h, h)};
      DcModels dm = dc_snapshot;
      const BlockCost details = detail_cost(dcs, n, qt, dm);
      total.distortion += details.distortion / 256.0;
      total.bits += details.bits;
      return details.dc;
    };
    visit(0, 0, kSuperblockSize);
    adapt_models(levels, sbx, sby, plan, qt, pvq, dc);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Frame coding

namespace {

int fold(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

PlaneI32 pad_fixed(const PlaneU8& p, int w, int h) {
  PlaneI32 out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out.at(x, y) = (p.at(fold(x, p.width), fold(y, p.height)) - 128) * 16;
    }
  }
  return out;
}

PlaneU8 pad_u8(const PlaneU8& p, int w, int h) {
  PlaneU8 out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out.at(x, y) = p.at(fold(x, p.width), fold(y, p.height));
    }
  }
  return out;
}

PlaneU8 crop(const PlaneU8& p, int w, int h) {
  PlaneU8 out(w, h);
  for (int y = 0; y < h; ++y) {
    std::copy_n(&p.at(0, y), w, &out.at(0, y));
  }
  return out;
}

uint8_t to_pixel(int32_t s) {
  const int32_t v = s >= 0 ? (s + 8) >> 4 : -((-s + 8) >> 4);
  return static_cast<uint8_t>(std::clamp(v + 128, 0, 255));
}

int round_up(int v, int m) { return (v + m - 1) / m * m; }

struct PlaneCtx {
  int width = 0, height = 0, sb = 0, sb_cols = 0, sb_rows = 0;
  PlaneI32 src;  // encoder: prefiltered source
  PlaneI32 recon;
  BlockGrid grid;
  std::vector<std::optional<int32_t>> root_dc;
  std::vector<CoeffBlock> blocks;
  std::vector<int> cell_block;

  PlaneCtx(int w, int h, int sb_size)
      : width(w),
        height(h),
        sb(sb_size),
        sb_cols(w / sb_size),
        sb_rows(h / sb_size),
        recon(w, h),
        grid(w, h),
        root_dc(static_cast<std::size_t>(sb_cols) * sb_rows),
        cell_block(static_cast<std::size_t>(w / 4) * (h / 4), -1) {}

  const CoeffBlock* block_at(int x, int y) const {
    if (x < 0 || y < 0 || x >= width || y >= height) return nullptr;
    const int i = cell_block[static_cast<std::size_t>(y / 4) * (width / 4) + x / 4];
    return i < 0 ? nullptr : &blocks[i];
  }

  void store(int x, int y, CoeffBlock&& b) {
    const int idx = static_cast<int>(blocks.size());
    const int n = b.size;
    blocks.push_back(std::move(b));
    for (int yy = y; yy < y + n; yy += 4) {
      for (int xx = x; xx < x + n; xx += 4) {
        cell_block[static_cast<std::size_t>(yy / 4) * (width / 4) + xx / 4] = idx;
      }
    }
  }

  std::array<std::optional<int32_t>, 4> dc_neighbors(int c, int r) const {
    auto at = [&](int cc, int rr) -> std::optional<int32_t> {
      if (cc < 0 || rr < 0 || cc >= sb_cols) return std::nullopt;
      return root_dc[static_cast<std::size_t>(rr) * sb_cols + cc];
    };
    return {at(c - 1, r), at(c - 1, r - 1), at(c, r - 1), at(c + 1, r - 1)};
  }
};

struct Models {
  std::array<FrequencyModel, 4> split{FrequencyModel(2), FrequencyModel(2),
                                      FrequencyModel(2), FrequencyModel(2)};
  // Mode alphabets {none, H}, {none, V} and {none, H, V}.
  std::array<FrequencyModel, 3> mode{FrequencyModel(2), FrequencyModel(2),
                                     FrequencyModel(3)};
  std::array<DcModels, 2> dc;
  std::array<PvqModels, 2> pvq;
  FrequencyModel dering{static_cast<int>(kDeringFactors.size())};
};

double ac_error(const CoeffBlock& x, const CoeffBlock& r) {
  double e = 0;
  for (std::size_t i = 1; i < x.coeffs.size(); ++i) {
    const double d = double(x.coeffs[i]) - r.coeffs[i];
    e += d * d;
  }
  return e;
}

class FrameCoder {
 public:
  FrameCoder(int width, int height, ChromaMode chroma, int q, bool cfl,
             RangeEncoder* enc, RangeDecoder* dec)
      : qt_(make_quant(q, kLambdaScale)), cfl_(cfl), enc_(enc), dec_(dec) {
    planes_.emplace_back(width, height, kSuperblockSize);
    if (chroma == ChromaMode::k420) {
      planes_.emplace_back(width / 2, height / 2, kSuperblockSize / 2);
      planes_.emplace_back(width / 2, height / 2, kSuperblockSize / 2);
    }
  }

  void set_source(int pi, PlaneI32&& src) { planes_[pi].src = std::move(src); }
  int sb_cols() const { return planes_[0].sb_cols; }
  int sb_rows() const { return planes_[0].sb_rows; }
  Models& models() { return models_; }
  FrameStats& stats() { return stats_; }

  void code_superblock(int c, int r, SuperblockPlan& plan) {
    double t = tell();
    code_plan(plan, 0, 0, kSuperblockSize, 0);
    stats_.plan_bits += tell() - t;
    code_plane_sb(0, c, r, plan);
    if (planes_.size() > 1) {
      const SuperblockPlan cp = plan.chroma_420();
      code_plane_sb(1, c, r, cp);
      code_plane_sb(2, c, r, cp);
    }
  }

  // Postfilter and convert to padded 8-bit planes.
  std::vector<PlaneU8> finish() {
    std::vector<PlaneU8> out;
    for (PlaneCtx& p : planes_) {
      postfilter_plane(p.recon, p.grid);
      PlaneU8 u(p.width, p.height);
      for (std::size_t i = 0; i < u.data.size(); ++i) {
        u.data[i] = to_pixel(p.recon.data[i]);
      }
      out.push_back(std::move(u));
    }
    return out;
  }

  std::vector<int> sb_sizes() const {
    std::vector<int> s;
    for (const PlaneCtx& p : planes_) s.push_back(p.sb);
    return s;
  }

  int symbol(FrequencyModel& m, int s) {
    if (enc_) {
      enc_->encode_symbol(m, s);
      return s;
    }
    return dec_->decode_symbol(m);
  }

  double tell() const { return enc_ ? enc_->tell() : 0.0; }

 private:
  void code_plan(SuperblockPlan& plan, int x, int y, int n, int depth) {
    bool split = false;
    if (n > kMinBlockSize) {
      split = symbol(models_.split[depth], enc_ && plan.is_split(x, y, n)) == 1;
    }
    if (!split) {
      if (!enc_) plan.set_leaf(x, y, n);
      return;
    }
    const int h = n / 2;
    code_plan(plan, x, y, h, depth + 1);
    code_plan(plan, x + h, y, h, depth + 1);
    code_plan(plan, x, y + h, h, depth + 1);
    code_plan(plan, x + h, y + h, h, depth + 1);
  }

  void code_plane_sb(int pi, int c, int r, const SuperblockPlan& plan) {
    const double t = tell();
    PlaneCtx& p = planes_[pi];
    const int x0 = c * p.sb, y0 = r * p.sb;
    DcTree tree(p.sb, [&](int x, int y, int n) { return plan.is_split(x, y, n); });
    std::vector<CoeffBlock> src;
    if (enc_) {
      for (int li : tree.leaves()) {
        DcNode& node = tree.nodes()[li];
        src.push_back(dct_forward(&p.src.at(x0 + node.x, y0 + node.y),
                                  p.width, node.size));
        node.dc = src.back().coeffs[0];
      }
    }
    const auto nbr = p.dc_neighbors(c, r);
    DcModels& dm = models_.dc[pi > 0];
    const int32_t base = 16 * qt_.q_int;
    if (enc_) {
      superblock_dc_encode(tree, nbr, base, *enc_, dm);
    } else {
      superblock_dc_decode(tree, nbr, base, *dec_, dm);
    }
    p.root_dc[static_cast<std::size_t>(r) * p.sb_cols + c] = tree.nodes()[0].dc;
    const auto& leaves = tree.leaves();
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      const DcNode& node = tree.nodes()[leaves[i]];
      code_block(pi, x0 + node.x, y0 + node.y, node.size, node.dc,
                 enc_ ? &src[i] : nullptr);
    }
    stats_.plane_bits[pi] += tell() - t;
  }

  void code_block(int pi, int x, int y, int n, int32_t dc,
                  const CoeffBlock* src) {
    PlaneCtx& p = planes_[pi];
    CoeffBlock rc(n);
    rc.coeffs[0] = std::clamp(dc, -kMaxCoeffMag, kMaxCoeffMag);
    CoeffBlock r(n);
    BandPred pred = BandPred::kNone;
    if (pi == 0) {
      const CoeffBlock* left = p.block_at(x - 1, y);
      const CoeffBlock* above = p.block_at(x, y - 1);
      if (left && left->size != n) left = nullptr;
      if (above && above->size != n) above = nullptr;
      AcMode mode = AcMode::kNone;
      if (left || above) {
        std::vector<AcMode> avail{AcMode::kNone};
        if (left) avail.push_back(AcMode::kHorizontal);
        if (above) avail.push_back(AcMode::kVertical);
        int s = 0;
        if (enc_) {
          double best = ac_error(*src, r);
          for (std::size_t k = 1; k < avail.size(); ++k) {
            const double e = ac_error(*src, hv_predict_ac(avail[k], left, above, n));
            if (e < best) {
              best = e;
              s = static_cast<int>(k);
            }
          }
        }
        const int ctx = left && above ? 2 : (left ? 0 : 1);
        mode = avail[symbol(models_.mode[ctx], s)];
      }
      if (mode != AcMode::kNone) {
        r = hv_predict_ac(mode, left, above, n);
        pred = BandPred::kHv;
      }
    } else {
      const CflPredictor cfl =
          make_chroma_predictor(planes_[0].block_at(2 * x, 2 * y), n, 2);
      if (cfl.available) {
        r = cfl.r;
        pred = BandPred::kCfl;
      }
    }
    PvqModels& pm = models_.pvq[pi > 0];
    for (const Band& b : band_layout(n)) {
      const std::vector<int32_t> rs = band_slice(r, b);
      std::vector<int32_t> out;
      if (enc_) {
        out = pvq_encode_band(band_slice(*src, b), rs, qt_.q, pred, qt_.lambda,
                              pm, *enc_, false, pi == 0 || cfl_)
                  .recon;
      } else {
        out = pvq_decode_band(rs, qt_.q, pred, pm, *dec_);
      }
      band_store(rc, b, out);
    }
    for (auto& v : rc.coeffs) v = std::clamp(v, -kMaxCoeffMag, kMaxCoeffMag);
    dct_inverse(rc, &p.recon.at(x, y), p.width);
    for (int yy = y; yy < y + n; ++yy) {
      for (int xx = x; xx < x + n; ++xx) {
        p.recon.at(xx, yy) = std::clamp(p.recon.at(xx, yy), -kMaxSample, kMaxSample);
      }
    }
    p.store(x, y, std::move(rc));
    p.grid.set_block(x, y, n);
  }

  Quant qt_;
  bool cfl_;
  RangeEncoder* enc_;
  RangeDecoder* dec_;
  std::vector<PlaneCtx> planes_;
  Models models_;
  FrameStats stats_;
};

std::vector<std::array<int, 2>> visible_sizes(int w, int h, ChromaMode chroma) {
  std::vector<std::array<int, 2>> v{{w, h}};
  if (chroma == ChromaMode::k420) {
    v.push_back({(w + 1) / 2, (h + 1) / 2});
    v.push_back({(w + 1) / 2, (h + 1) / 2});
  }
  return v;
}

void check_image(const Image& img) {
  if (img.width < 1 || img.height < 1 || img.width > 0xFFFF ||
      img.height > 0xFFFF) {
    fail(ErrorCode::kInvalidArgument, "image dimensions out of range");
  }
  const auto vis = visible_sizes(img.width, img.height, img.chroma);
  if (img.planes.size() != vis.size()) {
    fail(ErrorCode::kInvalidArgument, "plane count does not match chroma mode");
  }
  for (std::size_t i = 0; i < vis.size(); ++i) {
    if (img.planes[i].width != vis[i][0] || img.planes[i].height != vis[i][1]) {
      fail(ErrorCode::kInvalidArgument, "plane size does not match image");
    }
  }
}

}  // namespace

EncodedFrame encode_frame(const Image& img, const EncoderOptions& opt) {
  check_image(img);
  const int q = quantizer_for_index(opt.qi);
  const int t0 = opt.dering_t0 < 0 ? default_dering_t0(q) : opt.dering_t0;
  if (t0 > 255) fail(ErrorCode::kInvalidArgument, "dering threshold above 255");
  const int pw = round_up(img.width, kSuperblockSize);
  const int ph = round_up(img.height, kSuperblockSize);
  std::vector<PlaneI32> fixed;
  std::vector<PlaneU8> padded;
  for (std::size_t i = 0; i < img.planes.size(); ++i) {
    const int w = i == 0 ? pw : pw / 2, h = i == 0 ? ph : ph / 2;
    fixed.push_back(pad_fixed(img.planes[i], w, h));
    padded.push_back(pad_u8(img.planes[i], w, h));
  }

  EncodedFrame out;
  std::vector<SuperblockPlan> plans = opt.plans;
  if (plans.empty()) {
    plans = plan_frame(fixed[0], q);
  } else if (plans.size() != static_cast<std::size_t>(pw / kSuperblockSize) *
                                  (ph / kSuperblockSize) ||
             std::any_of(plans.begin(), plans.end(), [](const SuperblockPlan& p) {
               return p.size() != kSuperblockSize;
             })) {
    fail(ErrorCode::kInvalidArgument, "plan count does not match the frame");
  }
  RangeEncoder enc;
  FrameCoder coder(pw, ph, img.chroma, q, opt.cfl, &enc, nullptr);
  // Prefilter the source with the final layout.
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    const int sb = i == 0 ? kSuperblockSize : kSuperblockSize / 2;
    BlockGrid grid(fixed[i].width, fixed[i].height);
    for (int r = 0; r < coder.sb_rows(); ++r) {
      for (int c = 0; c < coder.sb_cols(); ++c) {
        const SuperblockPlan& lp = plans[static_cast<std::size_t>(r) * coder.sb_cols() + c];
        const SuperblockPlan plan = i == 0 ? lp : lp.chroma_420();
        for (const auto& [x, y, n] : plan.leaves()) {
          grid.set_block(c * sb + x, r * sb + y, n);
        }
      }
    }
    prefilter_plane(fixed[i], grid);
    coder.set_source(static_cast<int>(i), std::move(fixed[i]));
  }
  for (int r = 0; r < coder.sb_rows(); ++r) {
    for (int c = 0; c < coder.sb_cols(); ++c) {
      coder.code_superblock(c, r, plans[static_cast<std::size_t>(r) * coder.sb_cols() + c]);
    }
  }
  std::vector<PlaneU8> planes = coder.finish();
  const auto sb = coder.sb_sizes();
  std::vector<uint8_t> dering;
  if (t0 > 0) {
    dering = choose_dering(planes, padded, sb,
                           visible_sizes(img.width, img.height, img.chroma), t0);
    const double t = enc.tell();
    for (uint8_t d : dering) coder.symbol(coder.models().dering, d);
    coder.stats().dering_bits = enc.tell() - t;
    dering_frame(planes, sb, t0, dering);
  }

  std::vector<uint8_t> payload = enc.finish();
  FrameHeader h;
  h.width = img.width;
  h.height = img.height;
  h.chroma = img.chroma;
  h.qi = opt.qi;
  h.dering_t0 = t0;
  h.payload_bytes = static_cast<uint32_t>(payload.size());
  const auto head = serialize_header(h);
  out.bytes.assign(head.begin(), head.end());
  out.bytes.insert(out.bytes.end(), payload.begin(), payload.end());

  out.reconstruction.width = img.width;
  out.reconstruction.height = img.height;
  out.reconstruction.chroma = img.chroma;
  for (std::size_t i = 0; i < planes.size(); ++i) {
    out.reconstruction.planes.push_back(
        crop(planes[i], img.planes[i].width, img.planes[i].height));
  }
  out.stats = coder.stats();
  out.stats.plans = std::move(plans);
  out.stats.dering = std::move(dering);
  out.stats.dering_t0 = t0;
  return out;
}

Image decode_frame(std::span<const uint8_t> bytes, std::size_t* consumed) {
  const FrameHeader h = parse_header(bytes);
  if (bytes.size() - kHeaderBytes < h.payload_bytes) {
    fail(ErrorCode::kCorruptStream, "truncated payload");
  }
  if (int64_t{h.width} * h.height > kMaxPixels) {
    fail(ErrorCode::kUnsupportedFormat, "frame too large");
  }
  const int pw = round_up(h.width, kSuperblockSize);
  const int ph = round_up(h.height, kSuperblockSize);
  RangeDecoder dec(bytes.subspan(kHeaderBytes, h.payload_bytes));
  FrameCoder coder(pw, ph, h.chroma, quantizer_for_index(h.qi), true, nullptr,
                   &dec);
  for (int r = 0; r < coder.sb_rows(); ++r) {
    for (int c = 0; c < coder.sb_cols(); ++c) {
      SuperblockPlan plan;
      coder.code_superblock(c, r, plan);
    }
  }
  std::vector<PlaneU8> planes = coder.finish();
  if (h.dering_t0 > 0) {
    std::vector<uint8_t> dering(
        static_cast<std::size_t>(coder.sb_rows()) * coder.sb_cols());
    for (uint8_t& d : dering) {
      d = static_cast<uint8_t>(coder.symbol(coder.models().dering, 0));
    }
    dering_frame(planes, coder.sb_sizes(), h.dering_t0, dering);
  }
  Image img;
  img.width = h.width;
  img.height = h.height;
  img.chroma = h.chroma;
  const auto vis = visible_sizes(h.width, h.height, h.chroma);
  for (std::size_t i = 0; i < planes.size(); ++i) {
    img.planes.push_back(crop(planes[i], vis[i][0], vis[i][1]));
  }
  if (consumed) *consumed = kHeaderBytes + h.payload_bytes;
  return img;
}

std::vector<Image> decode_sequence(std::span<const uint8_t> bytes) {
  std::vector<Image> out;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t used = 0;
    out.push_back(decode_frame(bytes.subspan(pos), &used));
    pos += used;
  }
  return out;
}

}  // namespace dlk
