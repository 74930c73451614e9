# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.

Must stay expression-for-expression identical to ``pykernels.py`` so the
two backends return bit-identical results (fp contraction is disabled in
setup.py for the same reason).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor

cnp.import_array()


def hough_accumulate_counts(
    double[::1] xs,
    double[::1] ys,
    double[::1] cos_t,
    double[::1] sin_t,
    double rho_step,
    Py_ssize_t n_rho,
):
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t n_theta = cos_t.shape[0]
    cdef Py_ssize_t half = (n_rho - 1) // 2
    counts_arr = np.zeros((n_theta, n_rho), dtype=np.int64)
    cdef long long[:, ::1] counts = counts_arr
    cdef Py_ssize_t t, i, idx
    cdef double c, s, rho
    for t in range(n_theta):
        c = cos_t[t]
        s = sin_t[t]
        for i in range(n):
            rho = xs[i] * c + ys[i] * s
            idx = <Py_ssize_t>floor(rho / rho_step + 0.5) + half
            counts[t, idx] += 1
    return counts_arr


def rotate_bilinear(
    double[:, ::1] src,
    double angle_rad,
    Py_ssize_t out_h,
    Py_ssize_t out_w,
    double fill,
):
    cdef Py_ssize_t h = src.shape[0]
    cdef Py_ssize_t w = src.shape[1]
    cdef double c = np.cos(angle_rad)
    cdef double s = np.sin(angle_rad)
    cdef double cx_src = (w - 1) / 2.0
    cdef double cy_src = (h - 1) / 2.0
    cdef double cx_dst = (out_w - 1) / 2.0
    cdef double cy_dst = (out_h - 1) / 2.0
    out_arr = np.empty((out_h, out_w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t yd, xd, xi, yi
    cdef double dx, dy, sx, sy, fx, fy
    cdef double v00, v01, v10, v11, w00, w01, w10, w11
    for yd in range(out_h):
        dy = yd - cy_dst
        for xd in range(out_w):
            dx = xd - cx_dst
            sx = c * dx + s * dy + cx_src
            sy = c * dy - s * dx + cy_src
            fx = sx - floor(sx)
            fy = sy - floor(sy)
            xi = <Py_ssize_t>floor(sx)
            yi = <Py_ssize_t>floor(sy)
            v00 = src[yi, xi] if (0 <= xi < w and 0 <= yi < h) else fill
            v01 = src[yi, xi + 1] if (0 <= xi + 1 < w and 0 <= yi < h) else fill
            v10 = src[yi + 1, xi] if (0 <= xi < w and 0 <= yi + 1 < h) else fill
            v11 = src[yi + 1, xi + 1] if (0 <= xi + 1 < w and 0 <= yi + 1 < h) else fill
            w00 = (1.0 - fx) * (1.0 - fy)
            w01 = fx * (1.0 - fy)
            w10 = (1.0 - fx) * fy
            w11 = fx * fy
            out[yd, xd] = (w00 * v00 + w01 * v01) + (w10 * v10 + w11 * v11)
    return out_arr
