import os
from pathlib import Path

import numpy as np
import pytest
from scipy.ndimage import gaussian_filter


def synthetic_image(shape=(64, 64), seed=0, smooth=3.0):
    """Deterministic smooth test image with values in [20, 235].

    Staying off 0/255 keeps the impulse detector exact on injected noise.
    """
    rng = np.random.default_rng(seed)
    field = gaussian_filter(rng.normal(size=shape), smooth)
    lo, hi = field.min(), field.max()
    return np.round(20 + (field - lo) / (hi - lo) * 215).astype(np.uint8)


def random_image(shape, rng, lo=1, hi=255):
    """Uniform random image; default range avoids native impulse extremes."""
    return rng.integers(lo, hi, size=shape).astype(np.uint8)


GOLDHILL_HELP = (
    "goldhill.pgm (the classic 512x512 8-bit test image) not found. "
    "Place it at <repo>/data/goldhill.pgm or point RBFRESTORE_DATA_DIR at a "
    "directory containing it; see README for provenance and conversion notes."
)


def _find_goldhill():
    candidates = []
    env = os.environ.get("RBFRESTORE_DATA_DIR")
    if env:
        candidates.append(Path(env) / "goldhill.pgm")
    root = Path(__file__).resolve().parent.parent
    candidates.append(root / "data" / "goldhill.pgm")
    candidates.append(Path(__file__).resolve().parent / "data" / "goldhill.pgm")
    for p in candidates:
        if p.is_file():
            return p
    return None


@pytest.fixture(scope="session")
def goldhill():
    path = _find_goldhill()
    if path is None:
        pytest.skip(GOLDHILL_HELP)
    from rbfrestore import load_pgm

    img = load_pgm(path)
    if img.shape != (512, 512):
        pytest.skip(f"{path} is {img.shape}, expected 512x512")
    return img


@pytest.fixture(scope="session", autouse=True)
def _warm_numba():
    # compile the jitted kernels once so timing-sensitive tests are not
    # measuring compilation
    from rbfrestore import restore
    from rbfrestore.baselines import adaptive_median, median3x3

    img = np.full((12, 12), 100, np.uint8)
    img[5, 5] = 255
    img[7, 2] = 0
    restore(img)
    median3x3(img)
    adaptive_median(img, 5)
