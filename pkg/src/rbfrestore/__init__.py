"""Salt-and-pepper image restoration by adaptive-window RBF interpolation."""

from .baselines import adaptive_median, median3x3
from .bench import BenchmarkSpec, ResultRow, run_benchmark, write_csv
from .image_io import PgmParseError, load_pgm, quantize, read_pgm, save_pgm, write_pgm
from .metrics import mse, psnr, ssim
from .noise import NoiseParams, detect, inject
from .pipeline import (
    RestorationConfig,
    UnrestorableImageError,
    WindowRecord,
    find_window,
    interpolate_noisy_pixels,
    replace_outliers,
    restore,
    smooth_noisy_pixels,
)
from .rbf import (
    SolveFailure,
    assemble_matrix,
    estimate_intensity,
    inverse_quadric,
    shape_parameter,
    solve_coefficients,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkSpec",
    "NoiseParams",
    "PgmParseError",
    "ResultRow",
    "RestorationConfig",
    "SolveFailure",
    "UnrestorableImageError",
    "WindowRecord",
    "adaptive_median",
    "assemble_matrix",
    "detect",
    "estimate_intensity",
    "find_window",
    "inject",
    "interpolate_noisy_pixels",
    "inverse_quadric",
    "load_pgm",
    "median3x3",
    "mse",
    "psnr",
    "quantize",
    "read_pgm",
    "replace_outliers",
    "restore",
    "run_benchmark",
    "save_pgm",
    "shape_parameter",
    "smooth_noisy_pixels",
    "solve_coefficients",
    "ssim",
    "write_csv",
    "write_pgm",
]
