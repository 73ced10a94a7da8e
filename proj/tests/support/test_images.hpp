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

#ifndef DLK_TESTS_SUPPORT_TEST_IMAGES_HPP_
#define DLK_TESTS_SUPPORT_TEST_IMAGES_HPP_

#include <algorithm>
#include <cmath>
#include <random>

#include "dlk/common.hpp"

namespace dlk::testing {

inline uint8_t px(double v) {
  return static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

// Smooth blobs, a gradient and mild noise; a stand-in for natural content.
inline PlaneU8 textured_plane(int w, int h, uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::normal_distribution<double> noise(0, 3);
  struct Blob { double x, y, r, a; };
  std::vector<Blob> blobs;
  for (int i = 0; i < 12; ++i) {
    blobs.push_back({u(rng) * w, u(rng) * h, 4 + u(rng) * w / 4, u(rng) * 160 - 80});
  }
  PlaneU8 p(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = 60 + 120.0 * x / w + 20 * std::sin(y * 0.21);
      for (const Blob& b : blobs) {
        const double d2 = (x - b.x) * (x - b.x) + (y - b.y) * (y - b.y);
        v += b.a * std::exp(-d2 / (b.r * b.r));
      }
      p.at(x, y) = px(v + noise(rng));
    }
  }
  return p;
}

inline PlaneU8 downsample(const PlaneU8& p) {
  PlaneU8 out((p.width + 1) / 2, (p.height + 1) / 2);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      int sum = 0, n = 0;
      for (int dy = 0; dy < 2; ++dy) {
        for (int dx = 0; dx < 2; ++dx) {
          if (2 * x + dx < p.width && 2 * y + dy < p.height) {
            sum += p.at(2 * x + dx, 2 * y + dy);
            ++n;
          }
        }
      }
      out.at(x, y) = static_cast<uint8_t>((sum + n / 2) / n);
    }
  }
  return out;
}

inline Image textured_image(int w, int h, uint32_t seed) {
  Image img = Image::make(w, h, ChromaMode::k420);
  img.planes[0] = textured_plane(w, h, seed);
  img.planes[1] = downsample(textured_plane(w, h, seed + 1));
  img.planes[2] = downsample(textured_plane(w, h, seed + 2));
  return img;
}

// Hard edges: a disc, a diagonal bar and a dark vertical bar.
inline PlaneU8 hard_edge_plane(int w, int h) {
  PlaneU8 p(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double dx = x - w * 0.35, dy = y - h * 0.4;
      uint8_t v = 40;
      if (dx * dx + dy * dy < (w * 0.22) * (w * 0.22)) v = 210;
      if (std::abs((x - y) - w / 4) < 6) v = 250;
      if (x > w * 3 / 4 && x < w * 3 / 4 + 9) v = 0;
      p.at(x, y) = v;
    }
  }
  return p;
}

inline Image hard_edge_image(int w, int h) {
  Image img = Image::make(w, h, ChromaMode::k420);
  img.planes[0] = hard_edge_plane(w, h);
  const PlaneU8 c = downsample(img.planes[0]);
  for (std::size_t i = 0; i < c.data.size(); ++i) {
    img.planes[1].data[i] = static_cast<uint8_t>(255 - c.data[i] / 2);
    img.planes[2].data[i] = static_cast<uint8_t>(64 + c.data[i] / 3);
  }
  return img;
}

// Chroma planes equal to half the (downsampled) luma.
inline Image half_luma_chroma_image(const PlaneU8& luma) {
  Image img = Image::make(luma.width, luma.height, ChromaMode::k420);
  img.planes[0] = luma;
  const PlaneU8 c = downsample(luma);
  for (std::size_t i = 0; i < c.data.size(); ++i) {
    img.planes[1].data[i] = static_cast<uint8_t>(c.data[i] / 2);
    img.planes[2].data[i] = static_cast<uint8_t>(c.data[i] / 2);
  }
  return img;
}

// Noise-free synthetic patterns: 0 gratings, 1 zone plate, 2 product of
// sinusoids.
inline PlaneU8 synthetic_pattern(int kind, int w, int h) {
  PlaneU8 p(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = 128;
      if (kind == 0) {
        v += 50 * std::sin(x * 0.19 + y * 0.07) + 40 * std::sin(y * 0.31 - x * 0.05) +
             20 * std::cos((x + y) * 0.5);
      } else if (kind == 1) {
        const double r = std::hypot(x - w / 2.0, y - h / 2.0);
        v += 100 * std::cos(r * r * 0.0025);
      } else {
        v += 60 * std::sin(x * 0.1) * std::cos(y * 0.13) + 50 * std::sin((x - 2 * y) * 0.2);
      }
      p.at(x, y) = px(v);
    }
  }
  return p;
}

// Constant vertical stripes with period `period`, aligned to x = 0.
inline PlaneU8 stripes_plane(int w, int h, int period) {
  PlaneU8 p(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) p.at(x, y) = (x % period) < period / 2 ? 200 : 50;
  }
  return p;
}

}  // namespace dlk::testing

#endif  // DLK_TESTS_SUPPORT_TEST_IMAGES_HPP_
