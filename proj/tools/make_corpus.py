#!/usr/bin/env python3
# Copyright 2026 The dlk Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the test corpus (Y4M) into tests/corpus."""

import argparse
import pathlib

import numpy as np
from skimage import data


def write_y4m(path, y, cb=None, cr=None):
  h, w = y.shape
  tag = "Cmono" if cb is None else "C420jpeg"
  with open(path, "wb") as f:
    f.write(f"YUV4MPEG2 W{w} H{h} F25:1 Ip A1:1 {tag}\n".encode())
    f.write(b"FRAME\n")
    for p in (y, cb, cr):
      if p is not None:
        f.write(np.ascontiguousarray(p, dtype=np.uint8).tobytes())


def down2(p):
  p = p.astype(np.float64)
  return np.clip(np.floor((p[0::2, 0::2] + p[1::2, 0::2] + p[0::2, 1::2] +
                           p[1::2, 1::2] + 2) / 4), 0, 255).astype(np.uint8)


def rgb_to_420(rgb):
  r, g, b = (rgb[..., i].astype(np.float64) for i in range(3))
  y = 0.299 * r + 0.587 * g + 0.114 * b
  cb = 128 - 0.168736 * r - 0.331264 * g + 0.5 * b
  cr = 128 + 0.5 * r - 0.418688 * g - 0.081312 * b
  q = lambda p: np.clip(np.round(p), 0, 255).astype(np.uint8)
  return q(y), down2(q(cb)), down2(q(cr))


def hard_edge(w, h):
  yy, xx = np.mgrid[0:h, 0:w]
  p = np.full((h, w), 40, np.uint8)
  p[(xx - w * 0.35) ** 2 + (yy - h * 0.4) ** 2 < (w * 0.22) ** 2] = 210
  p[np.abs((xx - yy) - w // 4) < 6] = 250
  p[(xx > w * 3 // 4) & (xx < w * 3 // 4 + 9)] = 0
  return p


def main():
  ap = argparse.ArgumentParser()
  ap.add_argument("--out", default=str(pathlib.Path(__file__).parent.parent /
                                      "tests" / "corpus"))
  args = ap.parse_args()
  out = pathlib.Path(args.out)
  out.mkdir(parents=True, exist_ok=True)

  camera = data.camera()[128:384, 128:384]
  write_y4m(out / "camera_256.y4m", camera)

  astro = data.astronaut()[0:256, 128:384]
  write_y4m(out / "astronaut_256.y4m", *rgb_to_420(astro))

  coffee = data.coffee()[80:272, 200:392]
  write_y4m(out / "coffee_192.y4m", *rgb_to_420(coffee))

  edge = hard_edge(256, 256)
  c = down2(edge)
  write_y4m(out / "hard_edge_256.y4m", edge, (255 - c // 2).astype(np.uint8),
            (64 + c // 3).astype(np.uint8))

  flat = np.full((128, 128), 100, np.uint8)
  write_y4m(out / "flat_128.y4m", flat, np.full((64, 64), 120, np.uint8),
            np.full((64, 64), 140, np.uint8))

  # Noise-free gratings; both chroma planes are half the luma.
  yy, xx = np.mgrid[0:256, 0:256].astype(np.float64)
  g = (128 + 50 * np.sin(xx * 0.19 + yy * 0.07) +
       40 * np.sin(yy * 0.31 - xx * 0.05) + 20 * np.cos((xx + yy) * 0.5))
  g = np.clip(np.round(g), 0, 255).astype(np.uint8)
  half = down2(g) // 2
  write_y4m(out / "cfl_half_luma_256.y4m", g, half, half)


if __name__ == "__main__":
  main()
