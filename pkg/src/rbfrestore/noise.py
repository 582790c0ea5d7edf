"""Salt-and-pepper corruption and impulse detection.

The noise model: each pixel independently becomes 255 (salt) with probability
p, 0 (pepper) with probability q, and keeps its value with probability
1 - (p + q). Detection flags every pixel whose value is exactly 0 or 255,
which also catches native extremes in the clean image -- that false-positive
behavior is part of the model and is deliberately kept.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SALT = 255
PEPPER = 0


@dataclass(frozen=True)
class NoiseParams:
    """Salt probability p, pepper probability q, and a 64-bit seed."""

    p: float
    q: float
    seed: int = 0

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError(f"probabilities must be non-negative: p={self.p}, q={self.q}")
        if self.p + self.q > 1.0:
            raise ValueError(f"p + q must not exceed 1: p={self.p}, q={self.q}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must fit in 64 bits: {self.seed}")

    @classmethod
    def from_density(cls, density_pct: float, seed: int = 0) -> "NoiseParams":
        """Symmetric split for a 'D% density' corruption: p = q = D/200."""
        if not 0 < density_pct <= 100:
            raise ValueError(f"density must be in (0, 100]: {density_pct}")
        return cls(p=density_pct / 200.0, q=density_pct / 200.0, seed=seed)


def _uniform_field(shape: tuple[int, int], seed: int) -> np.ndarray:
    # Philox (counter-based) raw output is fixed by its key, so the field is
    # reproducible across platforms and numpy versions. One double per pixel,
    # consumed in row-major order.
    raw = np.random.Philox(key=np.uint64(seed)).random_raw(shape[0] * shape[1])
    return ((raw >> np.uint64(11)) * 2.0**-53).reshape(shape)


def inject(img: np.ndarray, params: NoiseParams) -> np.ndarray:
    """Corrupt an image with salt-and-pepper noise, deterministically per seed."""
    arr = np.asarray(img)
    u = _uniform_field(arr.shape, params.seed)
    out = arr.copy()
    out[u < params.p] = SALT
    out[(u >= params.p) & (u < params.p + params.q)] = PEPPER
    return out


def detect(img: np.ndarray) -> np.ndarray:
    """Boolean mask of impulse pixels: intensity exactly 0 or 255."""
    arr = np.asarray(img)
    return (arr == PEPPER) | (arr == SALT)
