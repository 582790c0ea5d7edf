"""Three-stage impulse restoration.

Stage 1 detects impulses (0/255). Stage 2 grows a minimal odd window around
each noisy pixel until it holds at least one clean pixel, then estimates the
pixel by RBF interpolation over the clean pixels of that window. Stage 3
re-smooths the estimated pixels with distance-decayed weights over the same
recorded windows and replaces statistical outliers by the window median.

Every stage reads a completed input buffer and writes a fresh output buffer,
so results do not depend on pixel processing order. Stage 2 only ever reads
originally-clean pixels, never earlier estimates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .image_io import quantize
from .noise import detect
from .rbf import _estimate, shape_parameter


class UnrestorableImageError(RuntimeError):
    """No clean pixel reachable for some noisy pixel (or the whole image)."""

    def __init__(self, row: int, col: int):
        super().__init__(f"no clean pixel within reach of noisy pixel ({row}, {col})")
        self.pixel = (row, col)


class WindowRecord(NamedTuple):
    """Adaptive window chosen for one noisy pixel (bounds are inclusive, clipped)."""

    row: int
    col: int
    half_width: int
    row0: int
    row1: int
    col0: int
    col1: int


@dataclass
class RestorationConfig:
    """Tunables for the restoration pipeline.

    alpha: decay rate of the smoothing weights exp(-alpha * distance).
    epsilon_coefficient: constant in the shape-parameter heuristic c*sqrt(n)/w.
    outlier_sigma: half-width of the outlier band in standard deviations.
    smoothing_enabled: True runs the full pipeline (PM); False skips the
        smoothing and outlier stage entirely (PM-WS).
    max_half_width: optional cap on window growth; None grows as far as the
        image extent requires.
    """

    alpha: float = 1.0
    epsilon_coefficient: float = 0.8
    outlier_sigma: float = 2.0
    smoothing_enabled: bool = True
    max_half_width: int | None = None

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive: {self.alpha}")
        if self.epsilon_coefficient <= 0:
            raise ValueError(f"epsilon_coefficient must be positive: {self.epsilon_coefficient}")
        if self.outlier_sigma <= 0:
            raise ValueError(f"outlier_sigma must be positive: {self.outlier_sigma}")
        if self.max_half_width is not None and self.max_half_width < 1:
            raise ValueError(f"max_half_width must be >= 1: {self.max_half_width}")


@njit(cache=True)
def _min_half_width(mask, r, c, cap):
    """Smallest half-width whose clipped window holds a clean pixel; -1 if none."""
    h, w = mask.shape
    for hw in range(1, cap + 1):
        r0 = max(0, r - hw)
        r1 = min(h - 1, r + hw)
        c0 = max(0, c - hw)
        c1 = min(w - 1, c + hw)
        for i in range(r0, r1 + 1):
            for j in range(c0, c1 + 1):
                if not mask[i, j]:
                    return hw
    return -1


@njit(cache=True)
def _interpolate_kernel(img, mask, eps_coeff, max_hw):
    """Stage-2 pass. Returns (out, rows, cols, hws, n_fallback, bad_r, bad_c).

    bad_r/bad_c are -1 on success, else the first pixel with no reachable
    clean neighbor. Solver failures fall back to the window's clean mean and
    are counted in n_fallback.
    """
    h, w = img.shape
    out = img.copy()
    total = 0
    for i in range(h):
        for j in range(w):
            if mask[i, j]:
                total += 1
    rows = np.empty(total, np.int64)
    cols = np.empty(total, np.int64)
    hws = np.empty(total, np.int64)
    k = 0
    n_fallback = 0
    for r in range(h):
        for c in range(w):
            if not mask[r, c]:
                continue
            cap = max(max(r, h - 1 - r), max(c, w - 1 - c))
            if max_hw > 0 and max_hw < cap:
                cap = max_hw
            hw = _min_half_width(mask, r, c, cap)
            if hw < 0:
                return out, rows, cols, hws, n_fallback, r, c
            rows[k] = r
            cols[k] = c
            hws[k] = hw
            k += 1
            r0 = max(0, r - hw)
            r1 = min(h - 1, r + hw)
            c0 = max(0, c - hw)
            c1 = min(w - 1, c + hw)
            n = 0
            for i in range(r0, r1 + 1):
                for j in range(c0, c1 + 1):
                    if not mask[i, j]:
                        n += 1
            centers = np.empty((n, 2))
            values = np.empty(n)
            t = 0
            for i in range(r0, r1 + 1):
                for j in range(c0, c1 + 1):
                    if not mask[i, j]:
                        centers[t, 0] = i
                        centers[t, 1] = j
                        values[t] = img[i, j]
                        t += 1
            eps = shape_parameter(n, 2 * hw + 1, eps_coeff)
            est, ok = _estimate(float(r), float(c), centers, values, eps)
            if ok:
                out[r, c] = est
            else:
                out[r, c] = values.sum() / n
                n_fallback += 1
    return out, rows, cols, hws, n_fallback, -1, -1


@njit(cache=True)
def _smooth_kernel(img, rows, cols, hws, alpha):
    """Distance-weighted re-smoothing of the recorded pixels (Jacobi-style)."""
    h, w = img.shape
    out = img.copy()
    for k in range(rows.size):
        r = rows[k]
        c = cols[k]
        hw = hws[k]
        r0 = max(0, r - hw)
        r1 = min(h - 1, r + hw)
        c0 = max(0, c - hw)
        c1 = min(w - 1, c + hw)
        num = 0.0
        den = 0.0
        for i in range(r0, r1 + 1):
            for j in range(c0, c1 + 1):
                dr = float(r - i)
                dc = float(c - j)
                wgt = np.exp(-alpha * np.sqrt(dr * dr + dc * dc))
                num += img[i, j] * wgt
                den += wgt
        out[r, c] = num / den
    return out


@njit(cache=True)
def _outlier_kernel(img, rows, cols, hws, sigma_mult):
    """Replace recorded pixels outside mean +/- sigma_mult*std by the window median."""
    h, w = img.shape
    out = img.copy()
    for k in range(rows.size):
        r = rows[k]
        c = cols[k]
        hw = hws[k]
        r0 = max(0, r - hw)
        r1 = min(h - 1, r + hw)
        c0 = max(0, c - hw)
        c1 = min(w - 1, c + hw)
        m = (r1 - r0 + 1) * (c1 - c0 + 1)
        buf = np.empty(m)
        t = 0
        for i in range(r0, r1 + 1):
            for j in range(c0, c1 + 1):
                buf[t] = img[i, j]
                t += 1
        mu = buf.sum() / m
        ss = 0.0
        for i in range(m):
            d = buf[i] - mu
            ss += d * d
        sigma = np.sqrt(ss / m)
        lo = mu - sigma_mult * sigma
        hi = mu + sigma_mult * sigma
        v = img[r, c]
        if v > hi or v < lo:
            buf.sort()
            med = buf[(m - 1) // 2]
            if lo <= med <= hi:
                out[r, c] = med
    return out


def _records_to_arrays(records):
    n = len(records)
    rows = np.fromiter((t.row for t in records), np.int64, n)
    cols = np.fromiter((t.col for t in records), np.int64, n)
    hws = np.fromiter((t.half_width for t in records), np.int64, n)
    return rows, cols, hws


def _make_record(shape, r, c, hw) -> WindowRecord:
    h, w = shape
    return WindowRecord(
        row=int(r),
        col=int(c),
        half_width=int(hw),
        row0=max(0, int(r) - int(hw)),
        row1=min(h - 1, int(r) + int(hw)),
        col0=max(0, int(c) - int(hw)),
        col1=min(w - 1, int(c) + int(hw)),
    )


def find_window(mask: np.ndarray, center, max_half_width: int | None = None) -> WindowRecord:
    """Minimal odd window around a noisy pixel that contains a clean pixel."""
    mask = np.ascontiguousarray(mask, dtype=np.bool_)
    r, c = int(center[0]), int(center[1])
    if not mask[r, c]:
        raise ValueError(f"pixel ({r}, {c}) is not masked as noisy")
    h, w = mask.shape
    cap = max(r, h - 1 - r, c, w - 1 - c)
    if max_half_width is not None:
        cap = min(cap, max_half_width)
    hw = _min_half_width(mask, r, c, cap)
    if hw < 0:
        raise UnrestorableImageError(r, c)
    return _make_record(mask.shape, r, c, hw)


def interpolate_noisy_pixels(
    img: np.ndarray, mask: np.ndarray, cfg: RestorationConfig | None = None
) -> tuple[np.ndarray, list[WindowRecord]]:
    """Stage 2: estimate every masked pixel by window RBF interpolation.

    Returns the new float64 image and the window records for stage 3. Clean
    pixels are copied through untouched; estimates only ever read clean
    pixels of the input image.
    """
    cfg = cfg or RestorationConfig()
    arr = np.ascontiguousarray(img, dtype=np.float64)
    m = np.ascontiguousarray(mask, dtype=np.bool_)
    if arr.shape != m.shape:
        raise ValueError(f"mask shape {m.shape} does not match image shape {arr.shape}")
    max_hw = cfg.max_half_width if cfg.max_half_width is not None else 0
    out, rows, cols, hws, _, bad_r, bad_c = _interpolate_kernel(
        arr, m, float(cfg.epsilon_coefficient), int(max_hw)
    )
    if bad_r >= 0:
        raise UnrestorableImageError(int(bad_r), int(bad_c))
    records = [
        _make_record(arr.shape, r, c, hw) for r, c, hw in zip(rows, cols, hws)
    ]
    return out, records


def smooth_noisy_pixels(
    img: np.ndarray,
    mask: np.ndarray,
    records: list[WindowRecord],
    cfg: RestorationConfig | None = None,
) -> np.ndarray:
    """Stage 3a: re-smooth recorded pixels over their windows.

    Each masked pixel becomes the exp(-alpha*r)-weighted average of every
    pixel in its recorded window (itself included, weight 1), all values read
    from the stage-2 image.
    """
    cfg = cfg or RestorationConfig()
    arr = np.ascontiguousarray(img, dtype=np.float64)
    if len(records) != int(np.count_nonzero(mask)):
        raise ValueError("window records do not cover the masked pixels")
    rows, cols, hws = _records_to_arrays(records)
    return _smooth_kernel(arr, rows, cols, hws, float(cfg.alpha))


def replace_outliers(
    img: np.ndarray,
    mask: np.ndarray,
    records: list[WindowRecord],
    cfg: RestorationConfig | None = None,
) -> np.ndarray:
    """Stage 3b: median-replace recorded pixels outside the mean +/- k*sigma band.

    Statistics use all pixels of the recorded window (population sigma). The
    median (lower-middle for even counts) is only swapped in when it lies
    inside the band itself.
    """
    cfg = cfg or RestorationConfig()
    arr = np.ascontiguousarray(img, dtype=np.float64)
    if len(records) != int(np.count_nonzero(mask)):
        raise ValueError("window records do not cover the masked pixels")
    rows, cols, hws = _records_to_arrays(records)
    return _outlier_kernel(arr, rows, cols, hws, float(cfg.outlier_sigma))


def restore(img: np.ndarray, cfg: RestorationConfig | None = None) -> np.ndarray:
    """Run the full pipeline on an 8-bit image and return the 8-bit result.

    Detection, interpolation, then (unless smoothing is disabled) smoothing
    and outlier replacement. An image whose pixels are all 0/255 is
    unrestorable.
    """
    cfg = cfg or RestorationConfig()
    arr = np.asarray(img)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D grayscale image, got shape {arr.shape}")
    mask = detect(arr)
    work, records = interpolate_noisy_pixels(arr.astype(np.float64), mask, cfg)
    if cfg.smoothing_enabled:
        work = smooth_noisy_pixels(work, mask, records, cfg)
        work = replace_outliers(work, mask, records, cfg)
    return quantize(work)
