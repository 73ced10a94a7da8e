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

#ifndef DLK_PVQ_HPP_
#define DLK_PVQ_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "dlk/entropy.hpp"

namespace dlk {

// Activity masking exponent and beta = 1 / (1 - alpha).
inline constexpr double kPvqAlpha = 1.0 / 3.0;
inline constexpr double kPvqBeta = 1.0 / (1.0 - kPvqAlpha);
// Upper bound on pulses per band; keeps rank tables bounded on any input.
inline constexpr int kMaxPulses = 2048;
inline constexpr int kMaxBandSize = 64;

// ---------------------------------------------------------------------------
// Geometry

struct Reflector {
  std::vector<double> v;
  int m = 0;  // index of the largest |r|
  int s = 1;  // sign of r[m]
};

// Throws kInvalidArgument for an all-zero prediction.
Reflector make_reflector(std::span<const double> r);
std::vector<double> reflect(std::span<const double> x, const Reflector& refl);

struct GainShape {
  double g = 0;
  double theta = 0;
  std::vector<double> u;  // unit vector with u[m] = 0; all zero if g = 0
};

GainShape decompose(std::span<const double> z, int m, int s);
std::vector<double> recompose(const GainShape& gs, int m, int s);

// ---------------------------------------------------------------------------
// Scalar parameters

// Companded gain index round((g / q)^(1 - alpha)); q > 0.
int compand_gain(double g, double q);
// q * index^beta.
double decompand_gain(int index, double q);
// Pulses from the angle index alone.
int compute_k(int theta_index, int n);
// Pulses for a band without prediction (the angle is taken as pi/2).
int compute_k_noref(int gain_index, int n);
// The gain-dependent form, for comparison only.
double compute_k_from_angle(int gain_index, double theta, int n);

// ---------------------------------------------------------------------------
// Pyramid codebook

// Integer vector with L1 norm k maximising t.y / |y|; signs follow t.
std::vector<int> pvq_search(std::span<const double> t, int k);

BigUint codebook_size(int n, int k);
// log2 of codebook_size, for rate estimates.
double codebook_bits(int n, int k);
BigUint pvq_rank(std::span<const int> y);
std::vector<int> pvq_unrank(int n, int k, const BigUint& rank);

// ---------------------------------------------------------------------------
// Bands

struct Band {
  int x0 = 0, y0 = 0, w = 0, h = 0;  // rectangle in the coefficient block
  std::vector<int> index;            // raster positions, row-major in N x N
};

// AC bands of an N x N block, low to high frequency.
const std::vector<Band>& band_layout(int n);

// ---------------------------------------------------------------------------
// Band coding

enum class BandPred : uint8_t {
  kNone,  // no prediction available
  kHv,    // copied from a neighbour block; gain coded relative to it
  kCfl,   // luma shape with a coded sign; gain coded standalone
};

struct PvqBandCode {
  bool noref = true;
  int cfl_sign = 0;  // +1 or -1 in predicted CfL bands, else 0
  int gain_index = 0;
  int theta_index = 0;
  int k = 0;
  std::vector<int> y;  // full band length; y[m] = 0 when predicted
  bool operator==(const PvqBandCode&) const = default;
};

struct PvqModels {
  FrequencyModel noref{2};
  FrequencyModel cfl_sign{2};
  FrequencyModel gain_delta{16};
  FrequencyModel gain{16};
  FrequencyModel theta{16};
};

// Quantizes x against r. Prediction is used when r is nonzero, pred is not
// kNone and force_noref is false, unless the angle exceeds pi/2.
PvqBandCode pvq_quantize_band(std::span<const int32_t> x,
                              std::span<const int32_t> r, double q,
                              BandPred pred, bool force_noref = false);
// Reconstruction shared by encoder and decoder.
std::vector<int32_t> pvq_reconstruct_band(const PvqBandCode& code,
                                          std::span<const int32_t> r,
                                          double q);

// Writes the code. With trial set the rank is not coded and its size in bits
// is returned instead; otherwise returns 0.
double pvq_write_band(const PvqBandCode& code, std::span<const int32_t> r,
                      double q, BandPred pred, PvqModels& models,
                      RangeEncoder& enc, bool trial = false);
PvqBandCode pvq_read_band(std::span<const int32_t> r, double q, BandPred pred,
                          PvqModels& models, RangeDecoder& dec);

struct BandResult {
  PvqBandCode code;
  std::vector<int32_t> recon;
  double distortion = 0;  // squared error
  double bits = 0;
};

// Quantize, pick predicted or noref by distortion + lambda * bits when both
// are possible, code, and return the reconstruction. Without
// allow_prediction the band is always coded noref (the flag is still sent).
BandResult pvq_encode_band(std::span<const int32_t> x,
                           std::span<const int32_t> r, double q,
                           BandPred pred, double lambda, PvqModels& models,
                           RangeEncoder& enc, bool trial = false,
                           bool allow_prediction = true);
std::vector<int32_t> pvq_decode_band(std::span<const int32_t> r, double q,
                                     BandPred pred, PvqModels& models,
                                     RangeDecoder& dec);

}  // namespace dlk

#endif  // DLK_PVQ_HPP_
