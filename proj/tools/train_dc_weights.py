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
"""Least-squares superblock DC predictor weights.

Fits dc = wL*left + wTL*topleft + wT*top + wTR*topright over every interior
64x64 superblock of the luma planes in a folder, with the weights summing to
one. Prints the weights and the nearest sixteenths that still sum to 16.

  train_dc_weights.py DIR [--size 64]

Reads .y4m (first plane of every frame), .pgm/.ppm and anything skimage.io
can open.
"""

import argparse
import pathlib

import numpy as np
from skimage import io as skio


def y4m_lumas(path):
  data = path.read_bytes()
  head, _, rest = data.partition(b"\n")
  tags = {t[:1]: t[1:] for t in head.split()[1:]}
  w, h = int(tags[b"W"]), int(tags[b"H"])
  mono = tags.get(b"C", b"420") == b"mono"
  frame = w * h if mono else w * h + 2 * ((w + 1) // 2) * ((h + 1) // 2)
  out = []
  while rest.startswith(b"FRAME"):
    _, _, rest = rest.partition(b"\n")
    out.append(np.frombuffer(rest[:w * h], np.uint8).reshape(h, w))
    rest = rest[frame:]
  return out


def lumas(path):
  if path.suffix == ".y4m":
    return y4m_lumas(path)
  img = skio.imread(path).astype(np.float64)
  if img.ndim == 3:
    img = img[..., :3] @ np.array([0.299, 0.587, 0.114])
  return [img]


def samples(y, s):
  rows, cols = y.shape[0] // s, y.shape[1] // s
  dc = y[:rows * s, :cols * s].reshape(rows, s, cols, s).mean(axis=(1, 3))
  x, t = [], []
  for r in range(1, rows):
    for c in range(1, cols - 1):
      x.append([dc[r, c - 1], dc[r - 1, c - 1], dc[r - 1, c], dc[r - 1, c + 1]])
      t.append(dc[r, c])
  return x, t


def fit(x, t):
  # Substitute wTR = 1 - (wL + wTL + wT) to keep the unity sum exact.
  x, t = np.asarray(x), np.asarray(t)
  a = x[:, :3] - x[:, 3:4]
  b = t - x[:, 3]
  w3, *_ = np.linalg.lstsq(a, b, rcond=None)
  return np.append(w3, 1 - w3.sum())


def sixteenths(w):
  q = np.round(w * 16).astype(int)
  q[np.argmax(np.abs(w * 16 - q))] += 16 - q.sum()
  return q


def main():
  ap = argparse.ArgumentParser()
  ap.add_argument("folder")
  ap.add_argument("--size", type=int, default=64)
  args = ap.parse_args()
  xs, ts = [], []
  for p in sorted(pathlib.Path(args.folder).iterdir()):
    try:
      planes = lumas(p)
    except (ValueError, OSError, KeyError):
      continue
    for y in planes:
      x, t = samples(np.asarray(y, np.float64), args.size)
      xs += x
      ts += t
  if len(ts) < 4:
    raise SystemExit("not enough interior superblocks")
  w = fit(xs, ts)
  q = sixteenths(w)
  print("samples\t%d" % len(ts))
  print("weights\t" + "\t".join("%.4f" % v for v in w))
  print("sixteenths\t" + "\t".join(str(v) for v in q))


if __name__ == "__main__":
  main()
