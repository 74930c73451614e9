"""Grayscale raster images, binary masks, and file I/O.

Luminance is stored as float64 in [0, 1] (0 = black) regardless of the
source bit depth, so every downstream stage sees one contract. RGB input
is reduced with the fixed luma weights (0.299, 0.587, 0.114).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import CorruptImage, DegenerateImage, InvalidThreshold, UnsupportedFormat

LUMA_WEIGHTS = (0.299, 0.587, 0.114)

_SUPPORTED_SUFFIXES = {".png", ".pgm", ".ppm", ".pnm"}


@dataclass(frozen=True)
class RasterImage:
    """A grayscale image plus optional physical resolution metadata."""

    luminance: np.ndarray  # (height, width) float64 in [0, 1]
    pixels_per_mm: float | None = None

    def __post_init__(self):
        lum = np.asarray(self.luminance, dtype=np.float64)
        if lum.ndim != 2 or lum.shape[0] < 1 or lum.shape[1] < 1:
            raise ValueError("luminance must be a 2-D array with positive dimensions")
        if np.any(lum < 0.0) or np.any(lum > 1.0) or not np.all(np.isfinite(lum)):
            raise ValueError("luminance values must lie in [0, 1]")
        if self.pixels_per_mm is not None and not self.pixels_per_mm > 0:
            raise ValueError("pixels_per_mm must be positive when given")
        lum.flags.writeable = False
        object.__setattr__(self, "luminance", lum)

    @property
    def width(self) -> int:
        return self.luminance.shape[1]

    @property
    def height(self) -> int:
        return self.luminance.shape[0]


@dataclass(frozen=True)
class BinaryMask:
    """Boolean foreground mask; True marks ink."""

    bits: np.ndarray  # (height, width) bool

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=bool)
        if bits.ndim != 2 or bits.shape[0] < 1 or bits.shape[1] < 1:
            raise ValueError("bits must be a 2-D array with positive dimensions")
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    def count(self) -> int:
        return int(self.bits.sum())


def _to_luminance(im: Image.Image) -> np.ndarray:
    if im.mode == "L":
        return np.asarray(im, dtype=np.float64) / 255.0
    if im.mode == "1":
        return np.asarray(im.convert("L"), dtype=np.float64) / 255.0
    if im.mode in ("I", "I;16", "I;16B"):
        arr = np.asarray(im, dtype=np.float64)
        return np.clip(arr / 65535.0, 0.0, 1.0)
    if im.mode != "RGB":
        im = im.convert("RGB")
    rgb = np.asarray(im, dtype=np.float64) / 255.0
    r, g, b = LUMA_WEIGHTS
    return rgb[..., 0] * r + rgb[..., 1] * g + rgb[..., 2] * b


def load_image(path) -> RasterImage:
    """Decode a PNG/PGM/PPM file into a RasterImage.

    pixels_per_mm is populated from DPI metadata when the file carries it.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(str(path))
    if path.suffix.lower() not in _SUPPORTED_SUFFIXES:
        raise UnsupportedFormat(f"unsupported raster format: {path.suffix!r}")
    try:
        with Image.open(path) as im:
            im.load()
            lum = _to_luminance(im)
            dpi = im.info.get("dpi")
    except UnidentifiedImageError as exc:
        raise CorruptImage(f"cannot decode {path}: {exc}") from exc
    except (OSError, SyntaxError, ValueError) as exc:
        raise CorruptImage(f"cannot decode {path}: {exc}") from exc
    pixels_per_mm = None
    if dpi:
        try:
            dpi_x = float(dpi[0])
        except (TypeError, IndexError):
            dpi_x = float(dpi)
        if dpi_x > 0:
            pixels_per_mm = dpi_x / 25.4
    return RasterImage(np.clip(lum, 0.0, 1.0), pixels_per_mm)


def save_image(img: RasterImage, path) -> None:
    """Write 8-bit grayscale PNG or binary PGM; quantises to 1/255 steps."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix not in _SUPPORTED_SUFFIXES:
        raise UnsupportedFormat(f"unsupported raster format: {suffix!r}")
    arr = np.floor(img.luminance * 255.0 + 0.5).astype(np.uint8)
    im = Image.fromarray(arr, mode="L")
    if suffix == ".png":
        kwargs = {}
        if img.pixels_per_mm is not None:
            dpi = img.pixels_per_mm * 25.4
            kwargs["dpi"] = (dpi, dpi)
        im.save(path, format="PNG", **kwargs)
    else:
        im.save(path, format="PPM")


def binarise(img: RasterImage, threshold: float) -> BinaryMask:
    """Foreground = pixels strictly darker than the threshold."""
    if not (0.0 < threshold < 1.0):
        raise InvalidThreshold(f"threshold must lie in (0, 1), got {threshold}")
    return BinaryMask(img.luminance < threshold)


def otsu_threshold(img: RasterImage) -> float:
    """Threshold maximising between-class variance of the 256-bin histogram.

    Ties across the optimal split are resolved to the mean tied bin, which
    places the threshold mid-gap for well-separated bimodal images.
    """
    bins = np.floor(img.luminance * 255.0 + 0.5).astype(np.int64)
    hist = np.bincount(bins.ravel(), minlength=256).astype(np.float64)
    if np.count_nonzero(hist) < 2:
        raise DegenerateImage("image has a single luminance level")

    total = hist.sum()
    levels = np.arange(256, dtype=np.float64)
    w0 = np.cumsum(hist)[:-1]
    w1 = total - w0
    mu0 = np.cumsum(hist * levels)[:-1]
    mu_total = float((hist * levels).sum())
    valid = (w0 > 0) & (w1 > 0)
    var_between = np.zeros(255)
    m0 = np.where(valid, mu0 / np.where(w0 > 0, w0, 1.0), 0.0)
    m1 = np.where(valid, (mu_total - mu0) / np.where(w1 > 0, w1, 1.0), 0.0)
    var_between[valid] = (w0 * w1)[valid] * (m0 - m1)[valid] ** 2

    best = var_between.max()
    ties = np.nonzero(var_between == best)[0]
    k = float(ties.mean())
    return (k + 0.5) / 255.0
