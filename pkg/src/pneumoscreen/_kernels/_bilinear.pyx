# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loop for bilinear resampling of 8-bit grayscale rasters.

Must stay arithmetically identical to pneumoscreen._kernels._fallback:
corner-aligned coordinate mapping, float64 interpolation, half-to-even
rounding.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor, rint

cnp.import_array()


def resize_bilinear(const unsigned char[:, ::1] src, Py_ssize_t out_h, Py_ssize_t out_w):
    """Resample a uint8 (h, w) raster to (out_h, out_w)."""
    cdef Py_ssize_t in_h = src.shape[0]
    cdef Py_ssize_t in_w = src.shape[1]
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] out = np.empty((out_h, out_w), dtype=np.uint8)
    cdef unsigned char[:, ::1] dst = out

    cdef double step_y, step_x, y, x, fy, fx, top, bottom, value
    cdef Py_ssize_t i, j, y0, x0, y1, x1

    step_y = 0.0 if out_h == 1 else (in_h - 1) / <double>(out_h - 1)
    step_x = 0.0 if out_w == 1 else (in_w - 1) / <double>(out_w - 1)

    for i in range(out_h):
        y = (in_h - 1) * 0.5 if out_h == 1 else i * step_y
        if y < 0.0:
            y = 0.0
        if y > in_h - 1:
            y = in_h - 1
        y0 = <Py_ssize_t>floor(y)
        fy = y - y0
        y1 = y0 + 1
        if y1 > in_h - 1:
            y1 = in_h - 1
        for j in range(out_w):
            x = (in_w - 1) * 0.5 if out_w == 1 else j * step_x
            if x < 0.0:
                x = 0.0
            if x > in_w - 1:
                x = in_w - 1
            x0 = <Py_ssize_t>floor(x)
            fx = x - x0
            x1 = x0 + 1
            if x1 > in_w - 1:
                x1 = in_w - 1

            top = src[y0, x0] * (1.0 - fx) + src[y0, x1] * fx
            bottom = src[y1, x0] * (1.0 - fx) + src[y1, x1] * fx
            value = top * (1.0 - fy) + bottom * fy
            dst[i, j] = <unsigned char>rint(value)

    return out
