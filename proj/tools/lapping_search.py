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
"""Grid search for the 4-point lapping filter constants.

The filter acts on the span (x0, x1 | x2, x3) straddling a block edge:
butterfly, scale the odd pair by (1 + scale/64), shear t2 += (shear/64) * t3,
inverse butterfly. Constants are chosen to maximise the biorthogonal coding
gain of an 8-point DCT with lapping on an AR(1) source (rho = 0.95).
"""
import argparse

import numpy as np


def dct_matrix(n):
    k = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    m = np.cos(np.pi * (2 * j + 1) * k / (2 * n)) * np.sqrt(2.0 / n)
    m[0] /= np.sqrt(2.0)
    return m


def prefilter4(scale, shear):
    s = 1.0 + scale / 64.0
    p = shear / 64.0
    # butterfly
    b = np.array([[0.5, 0, 0, 0.5], [0, 0.5, 0.5, 0], [0, 1, -1, 0], [1, 0, 0, -1]])
    odd = np.array([[s, p * s], [0, s]])
    m = np.eye(4)
    m[2:, 2:] = odd
    # inverse butterfly: y0 = t0 + t3/2, y3 = y0 - t3, y1 = t1 + t2/2, y2 = y1 - t2
    ib = np.linalg.inv(b)
    return ib @ m @ b


def coding_gain(n, pre, rho):
    # Lapped analysis over a long periodic signal, examine one block.
    blocks = 8
    length = n * blocks
    full = np.eye(length)
    if pre is not None:
        f = np.eye(length)
        for e in range(0, length, n):
            idx = [(e - 2 + i) % length for i in range(4)]
            g = np.eye(length)
            g[np.ix_(idx, idx)] = pre
            f = g @ f
        full = f
    d = dct_matrix(n)
    ana = np.zeros((length, length))
    for b in range(blocks):
        ana[b * n:(b + 1) * n, b * n:(b + 1) * n] = d
    ana = ana @ full
    syn = np.linalg.inv(ana)
    i = np.arange(length)
    dist = np.abs(i[:, None] - i[None, :])
    dist = np.minimum(dist, length - dist)
    cov = rho ** dist
    blk = slice(3 * n, 4 * n)
    var = np.einsum("ij,jk,ik->i", ana[blk], cov, ana[blk])
    norms = np.sum(syn[:, blk] ** 2, axis=0)
    return 10 * np.log10(1.0 / np.exp(np.mean(np.log(var * norms))))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rho", type=float, default=0.95)
    args = ap.parse_args()
    base = coding_gain(8, None, args.rho)
    best = None
    for scale in range(0, 65, 2):
        for shear in range(-64, 65, 4):
            g = coding_gain(8, prefilter4(scale, shear), args.rho)
            if best is None or g > best[0]:
                best = (g, scale, shear)
    # refine
    g0, s0, p0 = best
    for scale in range(max(0, s0 - 2), s0 + 3):
        for shear in range(p0 - 4, p0 + 5):
            g = coding_gain(8, prefilter4(scale, shear), args.rho)
            if g > best[0]:
                best = (g, scale, shear)
    print(f"dct8 gain {base:.4f} dB")
    print(f"lapped gain {best[0]:.4f} dB scale={best[1]}/64 shear={best[2]}/64")


if __name__ == "__main__":
    main()
