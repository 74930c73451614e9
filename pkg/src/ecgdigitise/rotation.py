"""Printout deskew: Hough line detection, angle filtering, resampling.

Straight grid lines dominate the vote mass of an ECG printout, so the
transform runs on the whole binarised image. Lines are kept only inside a
configured angle window and only when enough of them are mutually
parallel; the correction angle is the vote-weighted mean of the surviving
cluster, mapped so that those lines become horizontal.

Angle convention: ``rotate_image(img, a)`` rotates content by ``a`` and
``estimate_rotation`` of the result returns ``-a`` (the correction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    AngleOutOfRange,
    DegenerateImage,
    NoLinesDetected,
    NoParallelCluster,
    PointOutOfRange,
)
from .raster import BinaryMask, RasterImage, binarise, otsu_threshold


@dataclass(frozen=True)
class PolarLine:
    """A detected line in normal form: x*cos(theta) + y*sin(theta) = rho."""

    rho: float
    theta: float  # radians in [0, pi)
    votes: int

    @property
    def theta_degrees(self) -> float:
        return math.degrees(self.theta)


@dataclass(frozen=True)
class HoughAccumulator:
    counts: np.ndarray  # (theta_bins, rho_bins) int64
    theta_step: float  # radians
    rho_step: float  # pixels

    @property
    def theta_bins(self) -> int:
        return self.counts.shape[0]

    @property
    def rho_bins(self) -> int:
        return self.counts.shape[1]

    def theta_of(self, t: int) -> float:
        return t * self.theta_step

    def rho_of(self, r: int) -> float:
        return (r - (self.rho_bins - 1) // 2) * self.rho_step


@dataclass(frozen=True)
class RotationEstimate:
    angle_degrees: float  # correction to apply (makes grid lines horizontal)
    supporting_lines: int
    mean_residual_degrees: float


@dataclass(frozen=True)
class RotationConfig:
    theta_step_deg: float = 0.5
    rho_step_px: float = 1.0
    min_votes: int | None = None  # None -> adaptive (see _auto_min_votes)
    angle_centre_deg: float = 90.0
    angle_half_range_deg: float = 30.0
    min_parallel: int = 5
    parallel_tol_deg: float = 1.0
    max_correction_deg: float = 45.0
    max_points: int = 120_000  # edge points are stride-subsampled past this
    refine_theta: bool = True


def extract_edges(mask: BinaryMask) -> np.ndarray:
    """(x, y) coordinates of foreground pixels with a background 4-neighbour.

    Pixels outside the image count as background, so border foreground
    pixels are edges. Row-major order.
    """
    bits = mask.bits
    interior = np.zeros_like(bits)
    interior[1:-1, 1:-1] = (
        bits[1:-1, 1:-1]
        & bits[:-2, 1:-1]
        & bits[2:, 1:-1]
        & bits[1:-1, :-2]
        & bits[1:-1, 2:]
    )
    edge = bits & ~interior
    ys, xs = np.nonzero(edge)
    return np.column_stack([xs, ys]).astype(np.int64)


def _theta_table(theta_step: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n_theta = max(1, int(round(math.pi / theta_step)))
    thetas = np.arange(n_theta, dtype=np.float64) * theta_step
    return thetas, np.cos(thetas), np.sin(thetas)


def hough_accumulate(
    points: np.ndarray, theta_step: float, rho_step: float, diag: float
) -> HoughAccumulator:
    """Vote each point into every theta bin at its rounded rho bin.

    Theta bins are centred at k*theta_step over [0, pi); rho bins cover
    [-diag, +diag] at rho_step spacing.
    """
    if theta_step <= 0 or rho_step <= 0:
        raise ValueError("theta_step and rho_step must be positive")
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    thetas, cos_t, sin_t = _theta_table(theta_step)
    half = int(math.ceil(diag / rho_step))
    n_rho = 2 * half + 1
    if pts.shape[0] == 0:
        counts = np.zeros((len(thetas), n_rho), dtype=np.int64)
        return HoughAccumulator(counts, theta_step, rho_step)
    radius2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
    if np.any(radius2 > diag * diag):
        raise PointOutOfRange("a point lies further than diag from the origin")
    xs = np.ascontiguousarray(pts[:, 0])
    ys = np.ascontiguousarray(pts[:, 1])
    counts = _kernels.hough_accumulate_counts(xs, ys, cos_t, sin_t, float(rho_step), n_rho)
    return HoughAccumulator(counts, theta_step, rho_step)


def extract_peak_lines(acc: HoughAccumulator, min_votes: int) -> list[PolarLine]:
    """Bins that reach min_votes and are 3x3-neighbourhood maxima.

    Plateau ties are all returned. Sorted by votes descending, then
    (theta, rho) ascending.
    """
    if min_votes < 1:
        raise ValueError("min_votes must be >= 1")
    counts = acc.counts
    padded = np.zeros((counts.shape[0] + 2, counts.shape[1] + 2), dtype=counts.dtype)
    padded[1:-1, 1:-1] = counts
    is_max = counts >= min_votes
    for dt in (-1, 0, 1):
        for dr in (-1, 0, 1):
            if dt == 0 and dr == 0:
                continue
            neigh = padded[1 + dt : padded.shape[0] - 1 + dt, 1 + dr : padded.shape[1] - 1 + dr]
            is_max &= counts >= neigh
    t_idx, r_idx = np.nonzero(is_max)
    lines = [
        PolarLine(rho=acc.rho_of(int(r)), theta=acc.theta_of(int(t)), votes=int(counts[t, r]))
        for t, r in zip(t_idx, r_idx)
    ]
    lines.sort(key=lambda ln: (-ln.votes, ln.theta, ln.rho))
    return lines


def filter_lines(
    lines: list[PolarLine],
    centre_degrees: float,
    half_range_degrees: float,
    min_parallel: int,
    parallel_tol_degrees: float,
) -> list[PolarLine]:
    """Largest cluster of near-parallel lines inside the angle window.

    A cluster is a fixed point of: members = lines within tol of the
    members' vote-weighted mean angle. Ties between equally large clusters
    go to the one containing the highest-vote line.
    """
    if half_range_degrees <= 0:
        raise ValueError("half_range_degrees must be positive")
    if min_parallel < 1:
        raise ValueError("min_parallel must be >= 1")
    in_range = [
        ln for ln in lines if abs(ln.theta_degrees - centre_degrees) <= half_range_degrees
    ]
    if len(in_range) < min_parallel:
        raise NoParallelCluster(
            f"{len(in_range)} lines in range, {min_parallel} parallel required"
        )

    def weighted_mean(members):
        tot = sum(ln.votes for ln in members)
        return sum(ln.votes * ln.theta_degrees for ln in members) / tot

    seeds = sorted(in_range, key=lambda ln: (-ln.votes, ln.theta, ln.rho))
    clusters: list[tuple[frozenset, list[PolarLine]]] = []
    seen = set()
    for seed in seeds:
        mean = seed.theta_degrees
        members = None
        for _ in range(100):
            new = [
                ln for ln in in_range if abs(ln.theta_degrees - mean) <= parallel_tol_degrees
            ]
            if not new:
                break
            new_mean = weighted_mean(new)
            if members is not None and {id(x) for x in new} == {id(x) for x in members}:
                break
            members, mean = new, new_mean
        if not members or len(members) < min_parallel:
            continue
        key = frozenset(id(x) for x in members)
        if key not in seen:
            seen.add(key)
            clusters.append((key, members))
    if not clusters:
        raise NoParallelCluster(
            f"no cluster of {min_parallel} lines within {parallel_tol_degrees} deg"
        )

    def cluster_rank(entry):
        _, members = entry
        size = len(members)
        best_line = max(members, key=lambda ln: ln.votes)
        return (size, best_line.votes)

    _, best = max(clusters, key=cluster_rank)
    return sorted(best, key=lambda ln: (ln.theta, ln.rho))


def _auto_min_votes(width: int, stride: int) -> int:
    base = max(50, int(0.3 * width))
    return max(25, int(math.ceil(base / stride)))


def _refine_theta(acc: HoughAccumulator, line: PolarLine) -> float:
    """Parabolic sub-bin interpolation of theta around a peak, in degrees."""
    t = int(round(line.theta / acc.theta_step))
    r = int(round(line.rho / acc.rho_step)) + (acc.rho_bins - 1) // 2
    if t <= 0 or t >= acc.theta_bins - 1:
        return line.theta_degrees
    c0 = float(acc.counts[t - 1, r])
    c1 = float(acc.counts[t, r])
    c2 = float(acc.counts[t + 1, r])
    denom = c0 - 2.0 * c1 + c2
    if denom >= 0:
        return line.theta_degrees
    delta = 0.5 * (c0 - c2) / denom
    delta = max(-0.5, min(0.5, delta))
    return math.degrees((t + delta) * acc.theta_step)


def estimate_rotation(img: RasterImage, cfg: RotationConfig | None = None) -> RotationEstimate:
    """Correction angle that aligns the printout's grid horizontally.

    Raises NoLinesDetected / NoParallelCluster when the image offers no
    usable line structure; callers are expected to proceed unrotated.
    """
    cfg = cfg or RotationConfig()
    try:
        threshold = otsu_threshold(img)
    except DegenerateImage as exc:
        raise NoLinesDetected("image has no contrast") from exc
    mask = binarise(img, threshold)
    edges = extract_edges(mask)
    if edges.shape[0] == 0:
        raise NoLinesDetected("no edge pixels")

    stride = max(1, int(math.ceil(edges.shape[0] / cfg.max_points)))
    edges = edges[::stride]
    centre = np.array([(img.width - 1) / 2.0, (img.height - 1) / 2.0])
    pts = edges.astype(np.float64) - centre
    diag = math.hypot(img.width, img.height) / 2.0 + cfg.rho_step_px

    theta_step = math.radians(cfg.theta_step_deg)
    acc = hough_accumulate(pts, theta_step, cfg.rho_step_px, diag)
    min_votes = cfg.min_votes if cfg.min_votes is not None else _auto_min_votes(img.width, stride)
    peaks = extract_peak_lines(acc, min_votes)
    if not peaks:
        raise NoLinesDetected(f"no accumulator peaks above {min_votes} votes")
    cluster = filter_lines(
        peaks,
        cfg.angle_centre_deg,
        cfg.angle_half_range_deg,
        cfg.min_parallel,
        cfg.parallel_tol_deg,
    )

    votes = np.array([ln.votes for ln in cluster], dtype=np.float64)
    if cfg.refine_theta:
        angles = np.array([_refine_theta(acc, ln) for ln in cluster])
    else:
        angles = np.array([ln.theta_degrees for ln in cluster])
    mean_theta = float(np.sum(votes * angles) / np.sum(votes))
    residual = float(np.sum(votes * np.abs(angles - mean_theta)) / np.sum(votes))
    angle = 90.0 - mean_theta
    if abs(angle) > cfg.max_correction_deg:
        raise NoParallelCluster(
            f"correction {angle:.2f} deg exceeds max {cfg.max_correction_deg} deg"
        )
    return RotationEstimate(
        angle_degrees=angle,
        supporting_lines=len(cluster),
        mean_residual_degrees=residual,
    )


def rotate_image(img: RasterImage, angle_degrees: float) -> RasterImage:
    """Resample the image rotated by angle_degrees about its centre.

    The canvas grows to contain the rotated bounds; uncovered pixels are
    white. angle 0 returns the input unchanged.
    """
    if abs(angle_degrees) > 45.0:
        raise AngleOutOfRange(f"|angle| must be <= 45 deg, got {angle_degrees}")
    if angle_degrees == 0.0:
        return img
    a = math.radians(angle_degrees)
    c, s = abs(math.cos(a)), abs(math.sin(a))
    out_w = max(1, int(math.floor(img.width * c + img.height * s + 0.5)))
    out_h = max(1, int(math.floor(img.width * s + img.height * c + 0.5)))
    lum = _kernels.rotate_bilinear(
        np.ascontiguousarray(img.luminance), a, out_h, out_w, 1.0
    )
    return RasterImage(np.clip(lum, 0.0, 1.0), img.pixels_per_mm)
