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

#ifndef DLK_ENTROPY_HPP_
#define DLK_ENTROPY_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dlk {

using BigUint = boost::multiprecision::cpp_int;

// Adaptive frequency counts for an alphabet of 2..16 symbols.
class FrequencyModel {
 public:
  static constexpr int kMaxSymbols = 16;
  static constexpr int kDefaultIncrement = 16;
  static constexpr uint32_t kDefaultCap = 1u << 15;

  explicit FrequencyModel(int symbols, int increment = kDefaultIncrement,
                          uint32_t cap = kDefaultCap);
  // Fixed counts; increment 0 disables adaptation.
  FrequencyModel(std::span<const uint16_t> counts, int increment,
                 uint32_t cap = kDefaultCap);
  static FrequencyModel uniform(int symbols) {
    return FrequencyModel(symbols, 0);
  }

  int size() const { return symbols_; }
  uint32_t total() const { return total_; }
  uint32_t count(int s) const { return counts_[s]; }
  uint32_t cumulative(int s) const;  // sum of counts below s
  int increment() const { return increment_; }
  uint32_t cap() const { return cap_; }

  void update(int s);

  bool operator==(const FrequencyModel&) const = default;

 private:
  alignas(32) std::array<uint16_t, kMaxSymbols> counts_{};
  uint32_t total_ = 0;
  uint32_t cap_ = kDefaultCap;
  int symbols_ = 0;
  int increment_ = 0;
};

// Piecewise integer mapping of the cumulative interval [fl, fh) out of ft
// onto [u, v) within range. ft must lie in (range/2, range]. Symbols near
// the start of the alphabet get the excess d = range - ft.
std::pair<uint32_t, uint32_t> map_interval(uint32_t range, uint32_t fl,
                                           uint32_t fh, uint32_t ft);

// Smallest left shift that puts ft into (range/2, range].
int scale_shift(uint32_t ft, uint32_t range);

class RangeEncoder {
 public:
  RangeEncoder() = default;

  // Codes [fl, fh) out of ft (ft <= 2^15, unscaled).
  void encode(uint32_t fl, uint32_t fh, uint32_t ft);
  // Codes s and then adapts the model.
  void encode_symbol(FrequencyModel& model, int s);

  // value < bound, as radix-16 digits with non-adaptive models.
  void encode_uniform(const BigUint& value, const BigUint& bound);
  void encode_uniform(uint32_t value, uint32_t bound);

  // Magnitude with a 16-ary adaptive model; 15 escapes to an Elias-gamma
  // style uniform suffix.
  void encode_escaped(FrequencyModel& model, uint32_t value);
  // Magnitude as above plus a uniform sign bit for nonzero values.
  void encode_signed(FrequencyModel& model, int32_t value);

  // Flushes and returns the payload. The encoder is spent afterwards.
  std::vector<uint8_t> finish();

  // Bits consumed so far, fractional. Differences give trial rates.
  double tell() const;

  // Copy of the arithmetic state that drops its output; for trial encodes.
  RangeEncoder fork_counter() const;

  uint32_t range() const { return range_; }

 private:
  void normalize();
  void push_byte(uint32_t byte);
  void emit(uint8_t b);

  uint64_t low_ = 0;
  uint32_t range_ = 0xFFFF;
  int cnt_ = 0;  // buffered bits above the 16-bit window
  uint64_t shifted_ = 0;
  int cache_ = -1;
  uint64_t pending_ = 0;
  uint64_t emitted_ = 0;
  bool count_only_ = false;
  std::vector<uint8_t> out_;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const uint8_t> data);

  // Returns the cumulative value in [0, ft) the code points at; the caller
  // locates the symbol and must then call consume() with the same ft.
  // Throws kCorruptStream on an impossible code. Reads past the end of the
  // input see zero bytes.
  uint32_t decode_cumulative(uint32_t ft);
  void consume(uint32_t fl, uint32_t fh, uint32_t ft);

  int decode_symbol(FrequencyModel& model);
  BigUint decode_uniform(const BigUint& bound);
  uint32_t decode_uniform(uint32_t bound);
  uint32_t decode_escaped(FrequencyModel& model);
  int32_t decode_signed(FrequencyModel& model);

 private:
  uint32_t read_bits(int n);
  void normalize();

  std::span<const uint8_t> data_;
  std::size_t pos_ = 0;
  uint64_t bitbuf_ = 0;
  int bitcnt_ = 0;
  uint32_t range_ = 0xFFFF;
  uint32_t code_ = 0;
  int shift_ = 0;  // scale shift of the pending decode_cumulative()
};

}  // namespace dlk

#endif  // DLK_ENTROPY_HPP_
