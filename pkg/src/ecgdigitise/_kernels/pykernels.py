"""NumPy implementations of the hot kernels.

These are the fallback when the compiled extension is unavailable. Both
backends must agree bit-for-bit: every floating-point expression here is
written in the same shape and evaluation order as in ``_core.pyx`` (and
the extension is compiled with fp contraction off).
"""

from __future__ import annotations

import numpy as np


def hough_accumulate_counts(
    xs: np.ndarray,
    ys: np.ndarray,
    cos_t: np.ndarray,
    sin_t: np.ndarray,
    rho_step: float,
    n_rho: int,
) -> np.ndarray:
    """Vote counts per (theta bin, rho bin).

    rho bin index = centre + floor(rho / rho_step + 0.5); the caller
    guarantees every point lies within the covered rho range.
    """
    n_theta = cos_t.shape[0]
    half = (n_rho - 1) // 2
    counts = np.zeros((n_theta, n_rho), dtype=np.int64)
    for t in range(n_theta):
        rho = xs * cos_t[t] + ys * sin_t[t]
        idx = np.floor(rho / rho_step + 0.5).astype(np.int64) + half
        counts[t] = np.bincount(idx, minlength=n_rho)
    return counts


def rotate_bilinear(
    src: np.ndarray,
    angle_rad: float,
    out_h: int,
    out_w: int,
    fill: float,
) -> np.ndarray:
    """Rotate src about its centre onto an (out_h, out_w) canvas.

    Inverse mapping with bilinear sampling; out-of-source neighbours read
    as ``fill``.
    """
    h, w = src.shape
    c = np.cos(angle_rad)
    s = np.sin(angle_rad)
    cx_src = (w - 1) / 2.0
    cy_src = (h - 1) / 2.0
    cx_dst = (out_w - 1) / 2.0
    cy_dst = (out_h - 1) / 2.0

    dx = np.arange(out_w, dtype=np.float64) - cx_dst
    dy = np.arange(out_h, dtype=np.float64) - cy_dst
    dxg, dyg = np.meshgrid(dx, dy)
    # inverse rotation: R(-a) applied to destination offsets
    sx = c * dxg + s * dyg + cx_src
    sy = c * dyg - s * dxg + cy_src

    x0 = np.floor(sx)
    y0 = np.floor(sy)
    fx = sx - x0
    fy = sy - y0
    xi = x0.astype(np.int64)
    yi = y0.astype(np.int64)

    def sample(yy, xx):
        inside = (xx >= 0) & (xx < w) & (yy >= 0) & (yy < h)
        vals = src[np.clip(yy, 0, h - 1), np.clip(xx, 0, w - 1)]
        return np.where(inside, vals, fill)

    v00 = sample(yi, xi)
    v01 = sample(yi, xi + 1)
    v10 = sample(yi + 1, xi)
    v11 = sample(yi + 1, xi + 1)

    w00 = (1.0 - fx) * (1.0 - fy)
    w01 = fx * (1.0 - fy)
    w10 = (1.0 - fx) * fy
    w11 = fx * fy
    return (w00 * v00 + w01 * v01) + (w10 * v10 + w11 * v11)
