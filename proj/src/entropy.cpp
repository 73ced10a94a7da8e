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

#include "dlk/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "dlk/common.hpp"
#include "dlk/simd.hpp"

namespace dlk {

FrequencyModel::FrequencyModel(int symbols, int increment, uint32_t cap)
    : cap_(cap), symbols_(symbols), increment_(increment) {
  if (symbols < 2 || symbols > kMaxSymbols || increment < 0 ||
      increment > 1024 || cap > kDefaultCap || cap < 2u * kMaxSymbols) {
    fail(ErrorCode::kInvalidArgument, "bad frequency model parameters");
  }
  for (int i = 0; i < symbols; ++i) counts_[i] = 1;
  total_ = static_cast<uint32_t>(symbols);
}

FrequencyModel::FrequencyModel(std::span<const uint16_t> counts, int increment,
                               uint32_t cap)
    : FrequencyModel(static_cast<int>(counts.size()), increment, cap) {
  total_ = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) fail(ErrorCode::kInvalidArgument, "zero count");
    counts_[i] = counts[i];
    total_ += counts[i];
  }
  if (total_ > cap_) fail(ErrorCode::kInvalidArgument, "counts exceed cap");
}

uint32_t FrequencyModel::cumulative(int s) const {
  uint32_t c = 0;
  for (int i = 0; i < s; ++i) c += counts_[i];
  return c;
}

void FrequencyModel::update(int s) {
  if (increment_ == 0) return;
  total_ = simd::active_kernels().model_update(counts_.data(), symbols_, s,
                                               increment_, total_, cap_);
}

std::pair<uint32_t, uint32_t> map_interval(uint32_t range, uint32_t fl,
                                           uint32_t fh, uint32_t ft) {
  if (ft > range || 2 * ft <= range || fl >= fh || fh > ft) {
    fail(ErrorCode::kInvalidArgument, "map_interval precondition violated");
  }
  const uint32_t d = range - ft;
  return {fl + std::min(fl, d), fh + std::min(fh, d)};
}

int scale_shift(uint32_t ft, uint32_t range) {
  int s = ilog2(range) - ilog2(ft);
  if ((ft << s) > range) --s;
  return s;
}

// ---------------------------------------------------------------------------
// Encoder. low_ holds the unflushed part of the code value: the low 16 bits
// are aligned with range_, cnt_ more bits sit above them, and bit cnt_ + 16
// is a pending carry. Whole bytes leave from the top through push_byte(),
// which holds back the last byte and any run of 0xFF bytes until it is known
// whether a carry will ripple into them.

void RangeEncoder::encode(uint32_t fl, uint32_t fh, uint32_t ft) {
  const int sh = scale_shift(ft, range_);
  const auto [u, v] = map_interval(range_, fl << sh, fh << sh, ft << sh);
  low_ += u;
  range_ = v - u;
  normalize();
}

void RangeEncoder::encode_symbol(FrequencyModel& model, int s) {
  if (s < 0 || s >= model.size()) {
    fail(ErrorCode::kInvalidArgument, "symbol outside alphabet");
  }
  const uint32_t fl = model.cumulative(s);
  encode(fl, fl + model.count(s), model.total());
  model.update(s);
}

void RangeEncoder::normalize() {
  if (range_ >= 0x8000) return;
  const int d = 15 - ilog2(range_);
  range_ <<= d;
  low_ <<= d;
  cnt_ += d;
  shifted_ += d;
  while (cnt_ >= 8) {
    const int keep = cnt_ + 8;
    push_byte(static_cast<uint32_t>(low_ >> keep));
    low_ &= (uint64_t{1} << keep) - 1;
    cnt_ -= 8;
  }
}

void RangeEncoder::push_byte(uint32_t byte) {
  if (byte == 0xFF) {
    ++pending_;
    return;
  }
  const uint32_t carry = byte >> 8;
  if (cache_ >= 0) emit(static_cast<uint8_t>(cache_ + carry));
  for (; pending_ > 0; --pending_) emit(static_cast<uint8_t>(0xFF + carry));
  cache_ = static_cast<int>(byte & 0xFF);
}

void RangeEncoder::emit(uint8_t b) {
  ++emitted_;
  if (!count_only_) out_.push_back(b);
}

std::vector<uint8_t> RangeEncoder::finish() {
  // Pick the value in [low, low + range) with the most trailing zeros; the
  // decoder reads zeros past the end, so only its significant bytes are
  // needed. range >= 2^15 guarantees s = 15 always fits.
  const uint64_t end = low_ + range_;
  for (int s = 16; s >= 0; --s) {
    const uint64_t mask = (uint64_t{1} << s) - 1;
    const uint64_t v = (low_ + mask) & ~mask;
    if (v < end) {
      low_ = v;
      break;
    }
  }
  int nbits = cnt_ + 16;
  const int pad = (8 - nbits % 8) % 8;
  low_ <<= pad;
  nbits += pad;
  while (nbits > 0) {
    nbits -= 8;
    push_byte(static_cast<uint32_t>(low_ >> nbits));
    low_ &= (uint64_t{1} << nbits) - 1;
  }
  if (cache_ >= 0) emit(static_cast<uint8_t>(cache_));
  for (; pending_ > 0; --pending_) emit(0xFF);
  cache_ = -1;
  while (!out_.empty() && out_.back() == 0) out_.pop_back();
  return std::move(out_);
}

double RangeEncoder::tell() const {
  return static_cast<double>(shifted_) - std::log2(range_ / 65535.0);
}

RangeEncoder RangeEncoder::fork_counter() const {
  RangeEncoder e;
  e.low_ = low_;
  e.range_ = range_;
  e.cnt_ = cnt_;
  e.shifted_ = shifted_;
  e.cache_ = cache_;
  e.pending_ = pending_;
  e.emitted_ = emitted_;
  e.count_only_ = true;
  return e;
}

namespace {

int hex_digits(const BigUint& v) {
  return v == 0 ? 0 : static_cast<int>(boost::multiprecision::msb(v) / 4) + 1;
}

unsigned hex_digit(const BigUint& v, int i) {
  return static_cast<unsigned>((v >> (4 * i)) & 15);
}

}  // namespace

// Digits are sent most significant first. While the prefix still equals the
// prefix of bound - 1 the alphabet is cut to that digit + 1, so no codeword
// is wasted on values >= bound at the top digit.
void RangeEncoder::encode_uniform(const BigUint& value, const BigUint& bound) {
  if (bound < 1 || value < 0 || value >= bound) {
    fail(ErrorCode::kInvalidArgument, "uniform value out of range");
  }
  const BigUint top = bound - 1;
  bool tight = true;
  for (int i = hex_digits(top) - 1; i >= 0; --i) {
    const unsigned dv = hex_digit(value, i);
    const unsigned lim = tight ? hex_digit(top, i) : 15;
    if (lim > 0) encode(dv, dv + 1, lim + 1);
    tight = tight && dv == lim;
  }
}

void RangeEncoder::encode_uniform(uint32_t value, uint32_t bound) {
  encode_uniform(BigUint(value), BigUint(bound));
}

void RangeEncoder::encode_escaped(FrequencyModel& model, uint32_t value) {
  if (value >= (1u << 31)) fail(ErrorCode::kInvalidArgument, "too large");
  if (value < 15) {
    encode_symbol(model, static_cast<int>(value));
    return;
  }
  encode_symbol(model, 15);
  const uint64_t e1 = uint64_t{value} - 15 + 1;
  const int b = ilog2(e1);
  encode_uniform(static_cast<uint32_t>(b), 32);
  if (b > 0) {
    encode_uniform(static_cast<uint32_t>(e1 - (uint64_t{1} << b)), 1u << b);
  }
}

void RangeEncoder::encode_signed(FrequencyModel& model, int32_t value) {
  encode_escaped(model, static_cast<uint32_t>(std::abs(int64_t{value})));
  if (value != 0) encode_uniform(value < 0 ? 1u : 0u, 2u);
}

// ---------------------------------------------------------------------------
// Decoder. code_ is the offset of the stream value from the encoder's low,
// at the same 16-bit scale as range_, so 0 <= code_ < range_ on any stream
// the encoder produced.

RangeDecoder::RangeDecoder(std::span<const uint8_t> data) : data_(data) {
  code_ = read_bits(16);
}

uint32_t RangeDecoder::read_bits(int n) {
  if (n == 0) return 0;
  while (bitcnt_ < n) {
    const uint8_t b = pos_ < data_.size() ? data_[pos_] : 0;
    ++pos_;
    bitbuf_ = (bitbuf_ << 8) | b;
    bitcnt_ += 8;
  }
  bitcnt_ -= n;
  const uint32_t v = static_cast<uint32_t>(bitbuf_ >> bitcnt_);
  bitbuf_ &= (uint64_t{1} << bitcnt_) - 1;
  return v & ((1u << n) - 1);
}

uint32_t RangeDecoder::decode_cumulative(uint32_t ft) {
  shift_ = scale_shift(ft, range_);
  const uint32_t d = range_ - (ft << shift_);
  const uint32_t x = code_ < 2 * d ? code_ >> 1 : code_ - d;
  const uint32_t xu = x >> shift_;
  if (xu >= ft) fail(ErrorCode::kCorruptStream, "range decoder code overflow");
  return xu;
}

void RangeDecoder::consume(uint32_t fl, uint32_t fh, uint32_t ft) {
  const auto [u, v] =
      map_interval(range_, fl << shift_, fh << shift_, ft << shift_);
  code_ -= u;
  range_ = v - u;
  normalize();
}

void RangeDecoder::normalize() {
  if (range_ >= 0x8000) return;
  const int d = 15 - ilog2(range_);
  range_ <<= d;
  code_ = (code_ << d) | read_bits(d);
}

int RangeDecoder::decode_symbol(FrequencyModel& model) {
  const uint32_t x = decode_cumulative(model.total());
  int s = 0;
  uint32_t fl = 0;
  while (fl + model.count(s) <= x) {
    fl += model.count(s);
    ++s;
  }
  consume(fl, fl + model.count(s), model.total());
  model.update(s);
  return s;
}

BigUint RangeDecoder::decode_uniform(const BigUint& bound) {
  if (bound < 1) fail(ErrorCode::kInvalidArgument, "uniform bound < 1");
  const BigUint top = bound - 1;
  BigUint value = 0;
  bool tight = true;
  for (int i = hex_digits(top) - 1; i >= 0; --i) {
    const unsigned lim = tight ? hex_digit(top, i) : 15;
    unsigned dv = 0;
    if (lim > 0) {
      dv = decode_cumulative(lim + 1);
      consume(dv, dv + 1, lim + 1);
    }
    value = (value << 4) | dv;
    tight = tight && dv == lim;
  }
  return value;
}

uint32_t RangeDecoder::decode_uniform(uint32_t bound) {
  return static_cast<uint32_t>(decode_uniform(BigUint(bound)));
}

uint32_t RangeDecoder::decode_escaped(FrequencyModel& model) {
  const int s = decode_symbol(model);
  if (s < 15) return static_cast<uint32_t>(s);
  const uint32_t b = decode_uniform(32u);
  if (b > 30) fail(ErrorCode::kCorruptStream, "escape length out of range");
  const uint32_t rest = b > 0 ? decode_uniform(1u << b) : 0;
  const uint64_t v = 15 + (uint64_t{1} << b) + rest - 1;
  if (v >= (1u << 31)) fail(ErrorCode::kCorruptStream, "escape too large");
  return static_cast<uint32_t>(v);
}

int32_t RangeDecoder::decode_signed(FrequencyModel& model) {
  const int32_t mag = static_cast<int32_t>(decode_escaped(model));
  if (mag != 0 && decode_uniform(2u) == 1) return -mag;
  return mag;
}

}  // namespace dlk
