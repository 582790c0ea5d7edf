"""Benchmark sweeps over (image, density, seed, method) and CSV reporting.

For every tuple the image is corrupted with p = q = density/200, restored
with the requested method, and scored against the clean original. Rows are
emitted in canonical order (image, method, density, seed) followed by one
mean row per (image, method, density) group with "mean" in the seed column.
Everything except the runtime column is deterministic for a fixed spec.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baselines import adaptive_median, median3x3
from .image_io import load_pgm
from .metrics import mse, psnr, ssim
from .noise import NoiseParams, inject
from .pipeline import RestorationConfig, UnrestorableImageError, restore

CSV_HEADER = ("image", "method", "density_pct", "seed", "mse", "psnr_db", "ssim", "runtime_s")

DEFAULT_DENSITIES = (10, 20, 30, 40, 50, 60, 70, 80, 90, 95)
DEFAULT_SEEDS = (0, 1, 2, 3, 4)
METHODS = ("pm", "pm-ws", "med", "amf")


@dataclass
class BenchmarkSpec:
    """One benchmark sweep: which images, densities, seeds, and methods to run."""

    images: list[str]
    densities: list[float] = field(default_factory=lambda: list(DEFAULT_DENSITIES))
    seeds: list[int] = field(default_factory=lambda: list(DEFAULT_SEEDS))
    methods: list[str] = field(default_factory=lambda: ["pm", "pm-ws", "med", "amf"])
    output: str | None = None
    alpha: float = 1.0
    epsilon_coefficient: float = 0.8
    max_half_width: int | None = None
    amf_max_side: int = 7

    def __post_init__(self):
        if not self.images:
            raise ValueError("benchmark needs at least one image")
        if not self.seeds:
            raise ValueError("benchmark needs at least one seed")
        if not self.methods:
            raise ValueError("benchmark needs at least one method")
        for d in self.densities:
            if not 0 < d <= 100:
                raise ValueError(f"density must be in (0, 100]: {d}")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}; expected one of {METHODS}")


@dataclass
class ResultRow:
    image: str
    method: str
    density_pct: float
    seed: int | str
    mse: float
    psnr_db: float
    ssim: float
    runtime_s: float


def apply_method(method: str, noisy: np.ndarray, spec: BenchmarkSpec) -> np.ndarray:
    """Run one restoration method on a corrupted image."""
    if method == "pm" or method == "pm-ws":
        cfg = RestorationConfig(
            alpha=spec.alpha,
            epsilon_coefficient=spec.epsilon_coefficient,
            smoothing_enabled=(method == "pm"),
            max_half_width=spec.max_half_width,
        )
        return restore(noisy, cfg)
    if method == "med":
        return median3x3(noisy)
    if method == "amf":
        return adaptive_median(noisy, spec.amf_max_side)
    raise ValueError(f"unknown method {method!r}")


def _image_id(path: str) -> str:
    return Path(path).stem


def run_benchmark(spec: BenchmarkSpec) -> list[ResultRow]:
    """Run the sweep and return all rows, mean rows included.

    An unrestorable tuple becomes a row with NaN metrics rather than an
    aborted run. If spec.output is set the CSV is also written there.
    """
    images = {_image_id(p): load_pgm(p) for p in spec.images}
    rows: list[ResultRow] = []
    for image_id in sorted(images):
        clean = images[image_id]
        for method in sorted(spec.methods):
            for density in sorted(spec.densities):
                group: list[ResultRow] = []
                for seed in sorted(spec.seeds):
                    noisy = inject(clean, NoiseParams.from_density(density, seed=seed))
                    t0 = time.perf_counter()
                    try:
                        restored = apply_method(method, noisy, spec)
                        elapsed = time.perf_counter() - t0
                        row = ResultRow(
                            image_id, method, density, seed,
                            mse(clean, restored), psnr(clean, restored),
                            ssim(clean, restored), elapsed,
                        )
                    except UnrestorableImageError:
                        elapsed = time.perf_counter() - t0
                        nan = float("nan")
                        row = ResultRow(image_id, method, density, seed, nan, nan, nan, elapsed)
                    group.append(row)
                rows.extend(group)
                rows.append(
                    ResultRow(
                        image_id, method, density, "mean",
                        float(np.mean([r.mse for r in group])),
                        float(np.mean([r.psnr_db for r in group])),
                        float(np.mean([r.ssim for r in group])),
                        float(np.mean([r.runtime_s for r in group])),
                    )
                )
    if spec.output:
        with open(spec.output, "w", newline="") as fh:
            write_csv(rows, fh)
    return rows


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def write_csv(rows: list[ResultRow], sink) -> None:
    """Write rows with the fixed schema; floats carry 6 significant digits."""
    writer = csv.writer(sink)
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow(
            (r.image, r.method, _fmt(r.density_pct), r.seed,
             _fmt(r.mse), _fmt(r.psnr_db), _fmt(r.ssim), _fmt(r.runtime_s))
        )


def csv_text(rows: list[ResultRow]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def parse_spec_file(path) -> BenchmarkSpec:
    """Read a benchmark spec from key=value lines.

    Recognized keys: images, densities, seeds, methods (comma-separated),
    output, alpha, epsilon_coefficient, max_half_width, amf_max_side.
    Blank lines and lines starting with '#' are ignored.
    """
    kv: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        kv[key.strip()] = value.strip()
    if "images" not in kv:
        raise ValueError(f"{path}: spec file must set images=")
    kwargs: dict = {"images": [s.strip() for s in kv.pop("images").split(",") if s.strip()]}
    if "densities" in kv:
        kwargs["densities"] = [float(s) for s in kv.pop("densities").split(",") if s.strip()]
    if "seeds" in kv:
        kwargs["seeds"] = [int(s) for s in kv.pop("seeds").split(",") if s.strip()]
    if "methods" in kv:
        kwargs["methods"] = [s.strip() for s in kv.pop("methods").split(",") if s.strip()]
    if "output" in kv:
        kwargs["output"] = kv.pop("output")
    if "alpha" in kv:
        kwargs["alpha"] = float(kv.pop("alpha"))
    if "epsilon_coefficient" in kv:
        kwargs["epsilon_coefficient"] = float(kv.pop("epsilon_coefficient"))
    if "max_half_width" in kv:
        kwargs["max_half_width"] = int(kv.pop("max_half_width"))
    if "amf_max_side" in kv:
        kwargs["amf_max_side"] = int(kv.pop("amf_max_side"))
    if kv:
        raise ValueError(f"{path}: unknown spec keys {sorted(kv)}")
    return BenchmarkSpec(**kwargs)
