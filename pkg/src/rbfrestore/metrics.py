"""Image quality metrics: MSE, PSNR, and SSIM.

All metrics compare 8-bit (quantized) images of equal size. PSNR is reported
in dB against a 255 peak and is +inf for identical images. SSIM defaults to
the windowed form: local statistics under an 11x11 Gaussian window (sigma
1.5), valid window positions only, averaged over the image. A single
whole-image evaluation of the same formula is available as mode="global".
"""

from __future__ import annotations

import numpy as np
from scipy.signal import convolve2d

PEAK = 255.0
_K1 = 0.01
_K2 = 0.03
_C1 = (_K1 * PEAK) ** 2
_C2 = (_K2 * PEAK) ** 2
_SSIM_WIN = 11
_SSIM_SIGMA = 1.5


def _as_pair(reference, test):
    a = np.asarray(reference, dtype=np.float64)
    b = np.asarray(test, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"image shapes differ: {a.shape} vs {b.shape}")
    if a.ndim != 2:
        raise ValueError(f"expected 2-D grayscale images, got shape {a.shape}")
    return a, b


def mse(reference: np.ndarray, test: np.ndarray) -> float:
    """Mean squared intensity difference."""
    a, b = _as_pair(reference, test)
    return float(np.mean((a - b) ** 2))


def psnr(reference: np.ndarray, test: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB; +inf for identical images."""
    err = mse(reference, test)
    if err == 0.0:
        return float("inf")
    return float(10.0 * np.log10(PEAK**2 / err))


def _gaussian_kernel(size: int, sigma: float) -> np.ndarray:
    c = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    g = np.exp(-(c**2) / (2.0 * sigma * sigma))
    k = np.outer(g, g)
    return k / k.sum()


def ssim(reference: np.ndarray, test: np.ndarray, mode: str = "windowed") -> float:
    """Structural similarity index in [-1, 1]; 1 for identical images.

    mode="windowed" (default) averages the local index over all valid 11x11
    Gaussian-weighted window positions. mode="global" evaluates the formula
    once with whole-image statistics.
    """
    a, b = _as_pair(reference, test)
    if mode == "global":
        mu_x, mu_y = a.mean(), b.mean()
        var_x = a.var()
        var_y = b.var()
        cov = float(np.mean((a - mu_x) * (b - mu_y)))
        return float(
            ((2 * mu_x * mu_y + _C1) * (2 * cov + _C2))
            / ((mu_x**2 + mu_y**2 + _C1) * (var_x + var_y + _C2))
        )
    if mode != "windowed":
        raise ValueError(f"unknown ssim mode: {mode!r}")
    if min(a.shape) < _SSIM_WIN:
        raise ValueError(f"image {a.shape} smaller than the {_SSIM_WIN}x{_SSIM_WIN} ssim window")
    k = _gaussian_kernel(_SSIM_WIN, _SSIM_SIGMA)
    mu_x = convolve2d(a, k, mode="valid")
    mu_y = convolve2d(b, k, mode="valid")
    var_x = convolve2d(a * a, k, mode="valid") - mu_x**2
    var_y = convolve2d(b * b, k, mode="valid") - mu_y**2
    cov = convolve2d(a * b, k, mode="valid") - mu_x * mu_y
    num = (2 * mu_x * mu_y + _C1) * (2 * cov + _C2)
    den = (mu_x**2 + mu_y**2 + _C1) * (var_x + var_y + _C2)
    return float(np.mean(num / den))
