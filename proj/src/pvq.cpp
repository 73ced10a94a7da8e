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

#include "dlk/pvq.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

#include "dlk/common.hpp"

namespace dlk {

// ---------------------------------------------------------------------------
// Geometry

Reflector make_reflector(std::span<const double> r) {
  const int n = static_cast<int>(r.size());
  double norm2 = 0;
  int m = 0;
  for (int i = 0; i < n; ++i) {
    norm2 += r[i] * r[i];
    if (std::abs(r[i]) > std::abs(r[m])) m = i;
  }
  if (norm2 <= 0) fail(ErrorCode::kInvalidArgument, "zero prediction vector");
  const double norm = std::sqrt(norm2);
  Reflector refl;
  refl.m = m;
  refl.s = r[m] < 0 ? -1 : 1;
  refl.v.resize(n);
  for (int i = 0; i < n; ++i) refl.v[i] = r[i] / norm;
  refl.v[m] += refl.s;
  return refl;
}

std::vector<double> reflect(std::span<const double> x, const Reflector& refl) {
  double xv = 0, vv = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xv += x[i] * refl.v[i];
    vv += refl.v[i] * refl.v[i];
  }
  const double f = 2 * xv / vv;
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - f * refl.v[i];
  return z;
}

GainShape decompose(std::span<const double> z, int m, int s) {
  GainShape gs;
  gs.u.assign(z.size(), 0.0);
  double g2 = 0;
  for (double v : z) g2 += v * v;
  gs.g = std::sqrt(g2);
  if (gs.g <= 0) return gs;
  gs.theta = std::acos(std::clamp(-s * z[m] / gs.g, -1.0, 1.0));
  double rest = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (static_cast<int>(i) != m) rest += z[i] * z[i];
  }
  if (rest > 0) {
    const double inv = 1.0 / std::sqrt(rest);
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (static_cast<int>(i) != m) gs.u[i] = z[i] * inv;
    }
  }
  return gs;
}

std::vector<double> recompose(const GainShape& gs, int m, int s) {
  std::vector<double> z(gs.u.size());
  const double st = std::sin(gs.theta);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = gs.g * gs.u[i] * st;
  z[m] = -s * gs.g * std::cos(gs.theta);
  return z;
}

// ---------------------------------------------------------------------------
// Scalar parameters

int compand_gain(double g, double q) {
  if (g <= 0) return 0;
  const double idx = std::pow(g / q, 1.0 - kPvqAlpha);
  return static_cast<int>(std::min<int64_t>(round_half_away(idx), 1 << 30));
}

double decompand_gain(int index, double q) {
  return q * std::pow(static_cast<double>(index), kPvqBeta);
}

int compute_k(int theta_index, int n) {
  const int64_t k =
      round_half_away(theta_index * std::sqrt((n + 2) / 2.0));
  return static_cast<int>(std::clamp<int64_t>(k, 0, kMaxPulses));
}

int compute_k_noref(int gain_index, int n) {
  const int64_t k =
      round_half_away(gain_index / kPvqBeta * std::sqrt((n + 2) / 2.0));
  return static_cast<int>(std::clamp<int64_t>(k, 0, kMaxPulses));
}

double compute_k_from_angle(int gain_index, double theta, int n) {
  return gain_index * std::sin(theta) / kPvqBeta * std::sqrt((n + 2) / 2.0);
}

// ---------------------------------------------------------------------------
// Pyramid codebook

std::vector<int> pvq_search(std::span<const double> t, int k) {
  const int n = static_cast<int>(t.size());
  std::vector<int> y(n, 0);
  if (k <= 0 || n == 0) return y;
  std::vector<double> a(n);
  double l1 = 0;
  for (int i = 0; i < n; ++i) {
    a[i] = std::abs(t[i]);
    l1 += a[i];
  }
  if (l1 <= 0) {
    y[0] = k;
    return y;
  }
  // Pre-projection onto the pyramid, then one pulse at a time. c is the
  // correlation with |t| and e the energy of y.
  int sum = 0;
  double c = 0, e = 0;
  for (int i = 0; i < n; ++i) {
    y[i] = static_cast<int>(round_half_away(k * a[i] / l1));
    sum += y[i];
    c += a[i] * y[i];
    e += double(y[i]) * y[i];
  }
  while (sum > k) {
    int best = -1;
    double best_score = -1;
    for (int i = 0; i < n; ++i) {
      if (y[i] == 0) continue;
      const double nc = c - a[i];
      const double ne = e - 2 * y[i] + 1;
      const double score = ne > 0 ? nc * nc / ne : 0;
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    c -= a[best];
    e -= 2 * y[best] - 1;
    --y[best];
    --sum;
  }
  while (sum < k) {
    int best = 0;
    double best_score = -1;
    for (int i = 0; i < n; ++i) {
      const double nc = c + a[i];
      const double score = nc * nc / (e + 2 * y[i] + 1);
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    c += a[best];
    e += 2 * y[best] + 1;
    ++y[best];
    ++sum;
  }
  // Single-pulse moves until none improves the normalised correlation.
  for (int iter = 0; iter < 4 * n; ++iter) {
    const double cur = c * c / e;
    double best_score = cur * (1 + 1e-12);
    int bi = -1, bj = -1;
    for (int i = 0; i < n; ++i) {
      if (y[i] == 0) continue;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double nc = c - a[i] + a[j];
        const double ne = e - 2 * y[i] + 2 * y[j] + 2;
        const double score = nc * nc / ne;
        if (score > best_score) {
          best_score = score;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) break;
    c += a[bj] - a[bi];
    e += 2 * y[bj] - 2 * y[bi] + 2;
    --y[bi];
    ++y[bj];
  }
  for (int i = 0; i < n; ++i) {
    if (t[i] < 0) y[i] = -y[i];
  }
  return y;
}

namespace {

// Exact counts V(n, k) for n <= kMaxBandSize, grown on demand.
class CountTable {
 public:
  const BigUint& get(int n, int k) {
    if (k >= static_cast<int>(rows_[0].size())) grow(k);
    return rows_[n][k];
  }

 private:
  void grow(int k) {
    const int old = static_cast<int>(rows_[0].size());
    const int want = std::max(k + 1, old * 2);
    for (auto& r : rows_) r.resize(want);
    for (int kk = old; kk < want; ++kk) {
      rows_[0][kk] = kk == 0 ? 1 : 0;
      for (int n = 1; n <= kMaxBandSize; ++n) {
        rows_[n][kk] = kk == 0 ? BigUint(1)
                               : rows_[n - 1][kk] + rows_[n][kk - 1] +
                                     rows_[n - 1][kk - 1];
      }
    }
  }

  std::array<std::vector<BigUint>, kMaxBandSize + 1> rows_;
};

CountTable& counts() {
  thread_local CountTable t;
  return t;
}

void check_nk(int n, int k) {
  if (n < 0 || n > kMaxBandSize || k < 0 || k > kMaxPulses) {
    fail(ErrorCode::kInvalidArgument, "codebook dimensions out of range");
  }
}

}  // namespace

BigUint codebook_size(int n, int k) {
  check_nk(n, k);
  return counts().get(n, k);
}

double codebook_bits(int n, int k) {
  check_nk(n, k);
  static const auto table = [] {
    // log2 V(n, k) via the same recurrence in floating point.
    std::vector<double> v((kMaxBandSize + 1) * (kMaxPulses + 1));
    auto at = [&](int nn, int kk) -> double& {
      return v[nn * (kMaxPulses + 1) + kk];
    };
    for (int kk = 0; kk <= kMaxPulses; ++kk) at(0, kk) = kk == 0 ? 1 : 0;
    for (int nn = 1; nn <= kMaxBandSize; ++nn) {
      at(nn, 0) = 1;
      for (int kk = 1; kk <= kMaxPulses; ++kk) {
        at(nn, kk) = at(nn - 1, kk) + at(nn, kk - 1) + at(nn - 1, kk - 1);
      }
    }
    for (double& x : v) x = x > 0 ? std::log2(x) : 0;
    return v;
  }();
  return table[n * (kMaxPulses + 1) + k];
}

// Values at each position are ordered 0, +1, -1, +2, -2, ...
BigUint pvq_rank(std::span<const int> y) {
  const int n = static_cast<int>(y.size());
  int k = 0;
  for (int v : y) k += std::abs(v);
  check_nk(n, k);
  CountTable& t = counts();
  BigUint rank = 0;
  for (int i = 0; i < n && k > 0; ++i) {
    const int rest = n - i - 1;
    const int a = std::abs(y[i]);
    if (a > 0) {
      rank += t.get(rest, k);
      for (int j = 1; j < a; ++j) rank += 2 * t.get(rest, k - j);
      if (y[i] < 0) rank += t.get(rest, k - a);
    }
    k -= a;
  }
  return rank;
}

std::vector<int> pvq_unrank(int n, int k, const BigUint& rank) {
  check_nk(n, k);
  CountTable& t = counts();
  if (rank < 0 || rank >= t.get(n, k)) {
    fail(ErrorCode::kInvalidArgument, "rank out of range");
  }
  std::vector<int> y(n, 0);
  BigUint r = rank;
  for (int i = 0; i < n && k > 0; ++i) {
    const int rest = n - i - 1;
    const BigUint& zero = t.get(rest, k);
    if (r < zero) continue;
    r -= zero;
    for (int a = 1;; ++a) {
      const BigUint& c = t.get(rest, k - a);
      if (r < c) {
        y[i] = a;
        break;
      }
      r -= c;
      if (r < c) {
        y[i] = -a;
        break;
      }
      r -= c;
    }
    k -= std::abs(y[i]);
  }
  return y;
}

// ---------------------------------------------------------------------------
// Bands

namespace {

void add_band(std::vector<Band>& out, int n, int x0, int y0, int w, int h) {
  if (w * h > kMaxBandSize) {
    add_band(out, n, x0, y0, w, h / 2);
    add_band(out, n, x0, y0 + h / 2, w, h - h / 2);
    return;
  }
  Band b{x0, y0, w, h, {}};
  for (int y = y0; y < y0 + h; ++y) {
    for (int x = x0; x < x0 + w; ++x) {
      if (x == 0 && y == 0) continue;
      b.index.push_back(y * n + x);
    }
  }
  out.push_back(std::move(b));
}

std::vector<Band> make_layout(int n) {
  std::vector<Band> out;
  add_band(out, n, 0, 0, 4, 4);
  for (int s = 4; s < n; s *= 2) {
    add_band(out, n, s, 0, s, s);
    add_band(out, n, 0, s, s, s);
    add_band(out, n, s, s, s, s);
  }
  return out;
}

}  // namespace

const std::vector<Band>& band_layout(int n) {
  static const std::array<std::vector<Band>, 5> layouts{
      make_layout(4), make_layout(8), make_layout(16), make_layout(32),
      make_layout(64)};
  switch (n) {
    case 4: return layouts[0];
    case 8: return layouts[1];
    case 16: return layouts[2];
    case 32: return layouts[3];
    case 64: return layouts[4];
    default: fail(ErrorCode::kInvalidArgument, "unsupported block size");
  }
}

// ---------------------------------------------------------------------------
// Band coding

namespace {

constexpr int kMaxGainIndex = 1 << 20;
constexpr double kMaxCoeff = double(1 << 20);

std::vector<double> to_double(std::span<const int32_t> v, int sign = 1) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = sign * double(v[i]);
  return out;
}

bool all_zero(std::span<const int32_t> v) {
  return std::all_of(v.begin(), v.end(), [](int32_t x) { return x == 0; });
}

double norm(std::span<const int32_t> v) {
  double s = 0;
  for (int32_t x : v) s += double(x) * x;
  return std::sqrt(s);
}

int max_theta_index(int gain_index) {
  return static_cast<int>(std::floor(M_PI / 2 * gain_index / kPvqBeta));
}

// Pulse vector without position m.
std::vector<int> drop(const std::vector<int>& y, int m) {
  std::vector<int> out;
  out.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (static_cast<int>(i) != m) out.push_back(y[i]);
  }
  return out;
}

std::vector<int> insert_zero(const std::vector<int>& y, int m) {
  std::vector<int> out(y.begin(), y.end());
  out.insert(out.begin() + m, 0);
  return out;
}

}  // namespace

PvqBandCode pvq_quantize_band(std::span<const int32_t> x,
                              std::span<const int32_t> r, double q,
                              BandPred pred, bool force_noref) {
  const int n = static_cast<int>(x.size());
  PvqBandCode code;
  code.y.assign(n, 0);
  const std::vector<double> xd = to_double(x);
  const double g = norm(x);
  code.gain_index = std::min(compand_gain(g, q), kMaxGainIndex);
  const bool have_pred = pred != BandPred::kNone && !all_zero(r);
  // A zero gain carries nothing a prediction could help with.
  code.noref = !have_pred || force_noref || code.gain_index == 0;
  if (!code.noref) {
    int sign = 1;
    if (pred == BandPred::kCfl) {
      double dot = 0;
      for (int i = 0; i < n; ++i) dot += xd[i] * r[i];
      sign = dot < 0 ? -1 : 1;
      code.cfl_sign = sign;
    }
    const Reflector refl = make_reflector(to_double(r, sign));
    const GainShape gs = decompose(reflect(xd, refl), refl.m, refl.s);
    if (g > 0 && gs.theta > M_PI / 2) {
      code.noref = true;
      code.cfl_sign = 0;
    } else {
      code.theta_index = std::min(
          static_cast<int>(round_half_away(gs.theta * code.gain_index /
                                           kPvqBeta)),
          max_theta_index(code.gain_index));
      code.k = compute_k(code.theta_index, n);
      if (code.k > 0) {
        std::vector<double> t;
        for (int i = 0; i < n; ++i) {
          if (i != refl.m) t.push_back(gs.u[i]);
        }
        code.y = insert_zero(pvq_search(t, code.k), refl.m);
      }
      return code;
    }
  }
  if (code.gain_index > 0) {
    code.k = compute_k_noref(code.gain_index, n);
    code.y = pvq_search(xd, code.k);
  }
  return code;
}

std::vector<int32_t> pvq_reconstruct_band(const PvqBandCode& code,
                                          std::span<const int32_t> r,
                                          double q) {
  const int n = static_cast<int>(code.y.size());
  std::vector<int32_t> out(n, 0);
  if (code.gain_index == 0) return out;
  const double gh = decompand_gain(code.gain_index, q);
  double yn = 0;
  for (int v : code.y) yn += double(v) * v;
  yn = std::sqrt(yn);
  std::vector<double> xh(n, 0.0);
  if (code.noref) {
    for (int i = 0; i < n; ++i) xh[i] = yn > 0 ? gh * code.y[i] / yn : 0;
  } else {
    const Reflector refl = make_reflector(
        to_double(r, code.cfl_sign == 0 ? 1 : code.cfl_sign));
    GainShape gs;
    gs.g = gh;
    gs.theta = code.theta_index * kPvqBeta / code.gain_index;
    gs.u.assign(n, 0.0);
    for (int i = 0; i < n; ++i) gs.u[i] = yn > 0 ? code.y[i] / yn : 0;
    xh = reflect(recompose(gs, refl.m, refl.s), refl);
  }
  for (int i = 0; i < n; ++i) {
    out[i] = static_cast<int32_t>(
        round_half_away(std::clamp(xh[i], -kMaxCoeff, kMaxCoeff)));
  }
  return out;
}

double pvq_write_band(const PvqBandCode& code, std::span<const int32_t> r,
                      double q, BandPred pred, PvqModels& models,
                      RangeEncoder& enc, bool trial) {
  const int n = static_cast<int>(code.y.size());
  const bool have_pred = pred != BandPred::kNone && !all_zero(r);
  if (have_pred) enc.encode_symbol(models.noref, code.noref ? 1 : 0);
  const bool predicted = have_pred && !code.noref;
  if (predicted && pred == BandPred::kCfl) {
    enc.encode_symbol(models.cfl_sign, code.cfl_sign < 0 ? 1 : 0);
  }
  if (predicted && pred == BandPred::kHv) {
    enc.encode_signed(models.gain_delta,
                      code.gain_index - compand_gain(norm(r), q));
  } else {
    enc.encode_escaped(models.gain, static_cast<uint32_t>(code.gain_index));
  }
  if (code.gain_index == 0) return 0;
  if (predicted) {
    enc.encode_escaped(models.theta, static_cast<uint32_t>(code.theta_index));
  }
  if (code.k == 0) return 0;
  const int n_eff = predicted ? n - 1 : n;
  if (trial) return codebook_bits(n_eff, code.k);
  const int m = predicted ? make_reflector(to_double(r)).m : -1;
  const BigUint rank = pvq_rank(predicted ? drop(code.y, m) : code.y);
  enc.encode_uniform(rank, codebook_size(n_eff, code.k));
  return 0;
}

PvqBandCode pvq_read_band(std::span<const int32_t> r, double q, BandPred pred,
                          PvqModels& models, RangeDecoder& dec) {
  const int n = static_cast<int>(r.size());
  PvqBandCode code;
  code.y.assign(n, 0);
  const bool have_pred = pred != BandPred::kNone && !all_zero(r);
  code.noref = !have_pred || dec.decode_symbol(models.noref) == 1;
  const bool predicted = !code.noref;
  if (predicted && pred == BandPred::kCfl) {
    code.cfl_sign = dec.decode_symbol(models.cfl_sign) == 1 ? -1 : 1;
  }
  int64_t gain;
  if (predicted && pred == BandPred::kHv) {
    gain = int64_t{dec.decode_signed(models.gain_delta)} +
           compand_gain(norm(r), q);
  } else {
    gain = dec.decode_escaped(models.gain);
  }
  if (gain < 0 || gain > kMaxGainIndex) {
    fail(ErrorCode::kCorruptStream, "band gain out of range");
  }
  code.gain_index = static_cast<int>(gain);
  if (code.gain_index == 0) {
    code.cfl_sign = 0;
    return code;
  }
  if (predicted) {
    code.theta_index = static_cast<int>(dec.decode_escaped(models.theta));
    if (code.theta_index > max_theta_index(code.gain_index)) {
      fail(ErrorCode::kCorruptStream, "band angle out of range");
    }
    code.k = compute_k(code.theta_index, n);
  } else {
    code.k = compute_k_noref(code.gain_index, n);
  }
  if (code.k == 0) return code;
  const int n_eff = predicted ? n - 1 : n;
  const BigUint rank = dec.decode_uniform(codebook_size(n_eff, code.k));
  std::vector<int> y = pvq_unrank(n_eff, code.k, rank);
  code.y = predicted ? insert_zero(y, make_reflector(to_double(r)).m) : y;
  return code;
}

namespace {

double squared_error(std::span<const int32_t> x,
                     const std::vector<int32_t>& y) {
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = double(x[i]) - y[i];
    d += e * e;
  }
  return d;
}

BandResult trial(std::span<const int32_t> x, std::span<const int32_t> r,
                 double q, BandPred pred, bool force_noref,
                 const PvqModels& models, const RangeEncoder& enc) {
  BandResult res;
  res.code = pvq_quantize_band(x, r, q, pred, force_noref);
  res.recon = pvq_reconstruct_band(res.code, r, q);
  res.distortion = squared_error(x, res.recon);
  PvqModels m = models;
  RangeEncoder counter = enc.fork_counter();
  const double before = counter.tell();
  const double extra = pvq_write_band(res.code, r, q, pred, m, counter, true);
  res.bits = counter.tell() - before + extra;
  return res;
}

}  // namespace

BandResult pvq_encode_band(std::span<const int32_t> x,
                           std::span<const int32_t> r, double q,
                           BandPred pred, double lambda, PvqModels& models,
                           RangeEncoder& enc, bool trial_only,
                           bool allow_prediction) {
  BandResult best = trial(x, r, q, pred, !allow_prediction, models, enc);
  const bool have_pred = pred != BandPred::kNone && !all_zero(r);
  if (have_pred && !best.code.noref) {
    BandResult alt = trial(x, r, q, pred, true, models, enc);
    if (alt.distortion + lambda * alt.bits <=
        best.distortion + lambda * best.bits) {
      best = std::move(alt);
    }
  }
  const double before = enc.tell();
  const double extra =
      pvq_write_band(best.code, r, q, pred, models, enc, trial_only);
  best.bits = enc.tell() - before + extra;
  return best;
}

std::vector<int32_t> pvq_decode_band(std::span<const int32_t> r, double q,
                                     BandPred pred, PvqModels& models,
                                     RangeDecoder& dec) {
  return pvq_reconstruct_band(pvq_read_band(r, q, pred, models, dec), r, q);
}

}  // namespace dlk
