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

#ifndef DLK_CODEC_HPP_
#define DLK_CODEC_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dlk/common.hpp"
#include "dlk/transforms.hpp"

namespace dlk {

inline constexpr int kSuperblockSize = 64;
inline constexpr int kMaxQi = 63;
inline constexpr uint8_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderBytes = 16;
// Rate-distortion multiplier: lambda = kLambdaScale * Q^2 per bit.
inline constexpr double kLambdaScale = 0.12;
// Decoder refuses frames larger than this many luma samples.
inline constexpr int64_t kMaxPixels = int64_t{1} << 26;

// Q = round(2^(qi/6 + 1)).
int quantizer_for_index(int qi);

// "DLK1", version, width and height (16-bit big endian), chroma mode, qi,
// dering T0, payload length (32-bit big endian).
struct FrameHeader {
  int width = 0;
  int height = 0;
  ChromaMode chroma = ChromaMode::kMono;
  int qi = 0;
  int dering_t0 = 0;
  uint32_t payload_bytes = 0;
  bool operator==(const FrameHeader&) const = default;
};

std::array<uint8_t, kHeaderBytes> serialize_header(const FrameHeader& h);
// Throws kBadHeader on a bad magic, version or field value and
// kCorruptStream when fewer bytes than the header are given.
FrameHeader parse_header(std::span<const uint8_t> bytes);

enum class AcMode : uint8_t { kNone = 0, kHorizontal = 1, kVertical = 2 };

// Quadtree of transform sizes over one superblock, at 4x4 granularity.
class SuperblockPlan {
 public:
  explicit SuperblockPlan(int size = kSuperblockSize);

  int size() const { return size_; }
  int block_size_at(int x, int y) const;
  bool is_split(int x, int y, int size) const {
    return block_size_at(x, y) < size;
  }
  void set_leaf(int x, int y, int size);
  // (x, y, size) of every leaf in z-order.
  std::vector<std::array<int, 3>> leaves() const;
  // 4:2:0 chroma plan: half the luma leaf size, at least 4.
  SuperblockPlan chroma_420() const;

  bool operator==(const SuperblockPlan&) const = default;

 private:
  int size_ = 0;
  std::vector<uint8_t> log2_;
};

// Prediction for the AC coefficients of an n x n luma block: horizontal
// copies the left block's first column, vertical the above block's first
// row. Everything else, and DC, is zero. The neighbour must be n x n.
CoeffBlock hv_predict_ac(AcMode mode, const CoeffBlock* left,
                         const CoeffBlock* above, int n);

// Block-size decision for every superblock of a padded luma plane holding
// samples with 4 fractional bits. Costs are AC distortion plus
// lambda_scale * Q^2 times trial bits.
std::vector<SuperblockPlan> plan_frame(const PlaneI32& luma, int q,
                                       double lambda_scale = kLambdaScale);

struct PlanCost {
  double distortion = 0;  // squared error in pixel units
  double bits = 0;
};
// The planner's cost measure for a given plan.
PlanCost evaluate_plan(const PlaneI32& luma,
                       const std::vector<SuperblockPlan>& plans, int q,
                       double lambda_scale = kLambdaScale);

struct EncoderOptions {
  int qi = 32;
  int dering_t0 = -1;  // -1 derives it from the quantizer, 0 disables
  bool cfl = true;
  // Block layout per superblock in raster order; empty runs the planner.
  std::vector<SuperblockPlan> plans;
};

struct FrameStats {
  std::array<double, 3> plane_bits{};  // DC and AC bits per plane
  double plan_bits = 0;
  double dering_bits = 0;
  int dering_t0 = 0;
  std::vector<SuperblockPlan> plans;
  std::vector<uint8_t> dering;
};

struct EncodedFrame {
  std::vector<uint8_t> bytes;  // header + payload
  Image reconstruction;        // what any decoder will output
  FrameStats stats;
};

EncodedFrame encode_frame(const Image& img, const EncoderOptions& opt);
// Decodes the frame at the front of bytes; *consumed receives its length.
Image decode_frame(std::span<const uint8_t> bytes,
                   std::size_t* consumed = nullptr);

// Intra-only sequences are plain concatenations of frames.
std::vector<Image> decode_sequence(std::span<const uint8_t> bytes);

}  // namespace dlk

#endif  // DLK_CODEC_HPP_
