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

#ifndef DLK_IMAGE_IO_HPP_
#define DLK_IMAGE_IO_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dlk/common.hpp"

namespace dlk {

// YUV4MPEG2 with C420 (also the default when no C tag is present) or Cmono.
// Other colour spaces and interlaced streams are rejected.
std::vector<Image> parse_y4m(std::span<const uint8_t> bytes);
std::vector<uint8_t> format_y4m(const std::vector<Image>& frames);

// Binary PGM (P5) gives a mono image. Binary PPM (P6) is converted to 4:2:0
// with full-range BT.601 and 2x2 chroma averaging. maxval must be 255.
Image parse_pnm(std::span<const uint8_t> bytes);
// PGM for mono frames, PPM (nearest-neighbour chroma) for 4:2:0.
std::vector<uint8_t> format_pnm(const Image& img);

std::vector<uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const uint8_t> bytes);

// By content: "YUV4MPEG2" magic or a P5/P6 header.
std::vector<Image> load_frames(const std::string& path);
// By extension: .y4m, .pgm (mono only) or .ppm (single frame).
void save_frames(const std::string& path, const std::vector<Image>& frames);

}  // namespace dlk

#endif  // DLK_IMAGE_IO_HPP_
