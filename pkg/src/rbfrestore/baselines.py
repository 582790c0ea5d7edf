"""Median-filter baselines used as comparison anchors in benchmarks.

Windows are clipped at the image border (no padding); the median of an even
number of values is the lower-middle order statistic, so results are fully
deterministic.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _window_median(img, r, c, hw):
    h, w = img.shape
    r0 = max(0, r - hw)
    r1 = min(h - 1, r + hw)
    c0 = max(0, c - hw)
    c1 = min(w - 1, c + hw)
    m = (r1 - r0 + 1) * (c1 - c0 + 1)
    buf = np.empty(m, img.dtype)
    t = 0
    for i in range(r0, r1 + 1):
        for j in range(c0, c1 + 1):
            buf[t] = img[i, j]
            t += 1
    buf.sort()
    return buf[(m - 1) // 2]


@njit(cache=True)
def _median3x3_kernel(img):
    h, w = img.shape
    out = np.empty_like(img)
    for r in range(h):
        for c in range(w):
            out[r, c] = _window_median(img, r, c, 1)
    return out


@njit(cache=True)
def _adaptive_median_kernel(img, max_hw):
    h, w = img.shape
    out = img.copy()
    for r in range(h):
        for c in range(w):
            z = img[r, c]
            if z != 0 and z != 255:
                continue  # non-impulse centers are kept as-is
            med = z
            for hw in range(1, max_hw + 1):
                med = _window_median(img, r, c, hw)
                if med != 0 and med != 255:
                    break
            out[r, c] = med
    return out


def median3x3(img: np.ndarray) -> np.ndarray:
    """Plain 3x3 median filter over the clipped neighborhood of every pixel."""
    arr = np.ascontiguousarray(img)
    return _median3x3_kernel(arr)


def adaptive_median(img: np.ndarray, s_max: int = 7) -> np.ndarray:
    """Adaptive median filter for salt-and-pepper impulses.

    Only pixels at the impulse extremes (0 or 255) are candidates. The window
    grows from 3x3 by steps of 2 while its median is itself an extreme; the
    center is replaced by the first non-extreme median found, or by the
    window median at s_max when the growth is exhausted.
    """
    if s_max < 3 or s_max % 2 == 0:
        raise ValueError(f"s_max must be odd and >= 3: {s_max}")
    arr = np.ascontiguousarray(img)
    return _adaptive_median_kernel(arr, (s_max - 1) // 2)
