"""Numpy implementation of the bilinear resampling kernel.

Used automatically when the compiled extension is not built. Arithmetic
mirrors the Cython loop operation-for-operation so both backends produce
bit-identical output: source coordinates map corner pixel centers onto
corner pixel centers, interpolation runs in float64, and results round
half-to-even.
"""

import numpy as np


def _source_coords(out_len: int, in_len: int) -> np.ndarray:
    if out_len == 1:
        return np.array([(in_len - 1) * 0.5])
    step = (in_len - 1) / (out_len - 1)
    coords = np.arange(out_len, dtype=np.float64) * step
    return np.minimum(np.maximum(coords, 0.0), float(in_len - 1))


def resize_bilinear(src: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Resample a uint8 (h, w) raster to (out_h, out_w)."""
    in_h, in_w = src.shape
    pix = src.astype(np.float64)

    ys = _source_coords(out_h, in_h)
    xs = _source_coords(out_w, in_w)
    y0 = np.floor(ys).astype(np.intp)
    x0 = np.floor(xs).astype(np.intp)
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]
    y1 = np.minimum(y0 + 1, in_h - 1)
    x1 = np.minimum(x0 + 1, in_w - 1)

    v00 = pix[np.ix_(y0, x0)]
    v01 = pix[np.ix_(y0, x1)]
    v10 = pix[np.ix_(y1, x0)]
    v11 = pix[np.ix_(y1, x1)]

    top = v00 * (1.0 - fx) + v01 * fx
    bottom = v10 * (1.0 - fx) + v11 * fx
    value = top * (1.0 - fy) + bottom * fy
    return np.rint(value).astype(np.uint8)
