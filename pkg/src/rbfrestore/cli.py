"""Command-line interface: inject noise, restore images, score, and benchmark.

Exit codes: 0 success, 1 usage error, 2 I/O or file-format error,
3 numerical / unrestorable-image error.
"""

from __future__ import annotations

import argparse
import sys

from .baselines import adaptive_median, median3x3
from .bench import BenchmarkSpec, csv_text, parse_spec_file, run_benchmark
from .image_io import PgmParseError, load_pgm, save_pgm
from .metrics import mse, psnr, ssim
from .noise import NoiseParams, inject
from .pipeline import RestorationConfig, UnrestorableImageError, restore
from .rbf import SolveFailure

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; this tool reserves 2 for I/O.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rbfrestore", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_inject = sub.add_parser("inject", parents=[], help="corrupt a PGM with salt-and-pepper noise")
    p_inject.add_argument("input", help="clean input .pgm")
    p_inject.add_argument("output", help="corrupted output .pgm")
    p_inject.add_argument("--density", type=float, help="noise density in percent (p = q = D/200)")
    p_inject.add_argument("--p", type=float, help="salt probability (overrides --density)")
    p_inject.add_argument("--q", type=float, help="pepper probability (overrides --density)")
    p_inject.add_argument("--seed", type=int, default=0)

    p_restore = sub.add_parser("restore", help="restore a corrupted PGM")
    p_restore.add_argument("input", help="corrupted input .pgm")
    p_restore.add_argument("output", help="restored output .pgm")
    p_restore.add_argument("--method", choices=["pm", "pm-ws", "med", "amf"], default="pm")
    p_restore.add_argument("--alpha", type=float, default=1.0, help="smoothing decay rate")
    p_restore.add_argument("--epsilon-coeff", type=float, default=0.8,
                           help="shape-parameter coefficient")
    p_restore.add_argument("--max-window", type=int, default=None,
                           help="max window side (odd); also the adaptive-median cap")

    p_metrics = sub.add_parser("metrics", help="print MSE/PSNR/SSIM of test vs reference")
    p_metrics.add_argument("reference", help="clean reference .pgm")
    p_metrics.add_argument("test", help="image to score .pgm")
    p_metrics.add_argument("--ssim-mode", choices=["windowed", "global"], default="windowed")

    p_bench = sub.add_parser("bench", help="run a benchmark sweep and emit CSV")
    p_bench.add_argument("--spec", help="key=value spec file (see README)")
    p_bench.add_argument("--images", nargs="+", default=None, help="input .pgm files")
    p_bench.add_argument("--densities", nargs="+", type=float, default=None)
    p_bench.add_argument("--seeds", nargs="+", type=int, default=None)
    p_bench.add_argument("--methods", nargs="+", default=None,
                         choices=["pm", "pm-ws", "med", "amf"])
    p_bench.add_argument("--output", default=None, help="CSV path (default: stdout)")
    p_bench.add_argument("--alpha", type=float, default=None)
    p_bench.add_argument("--epsilon-coeff", type=float, default=None)
    p_bench.add_argument("--amf-max-side", type=int, default=None)
    return parser


def _cmd_inject(args) -> int:
    if args.p is not None or args.q is not None:
        if args.p is None or args.q is None:
            print("inject: --p and --q must be given together", file=sys.stderr)
            return EXIT_USAGE
        params = NoiseParams(p=args.p, q=args.q, seed=args.seed)
    elif args.density is not None:
        params = NoiseParams.from_density(args.density, seed=args.seed)
    else:
        print("inject: need --density or --p/--q", file=sys.stderr)
        return EXIT_USAGE
    save_pgm(args.output, inject(load_pgm(args.input), params))
    return EXIT_OK


def _cmd_restore(args) -> int:
    img = load_pgm(args.input)
    if args.max_window is not None and (args.max_window < 3 or args.max_window % 2 == 0):
        print("restore: --max-window must be odd and >= 3", file=sys.stderr)
        return EXIT_USAGE
    if args.method in ("pm", "pm-ws"):
        cfg = RestorationConfig(
            alpha=args.alpha,
            epsilon_coefficient=args.epsilon_coeff,
            smoothing_enabled=(args.method == "pm"),
            max_half_width=(args.max_window - 1) // 2 if args.max_window else None,
        )
        out = restore(img, cfg)
    elif args.method == "med":
        out = median3x3(img)
    else:
        out = adaptive_median(img, args.max_window or 7)
    save_pgm(args.output, out)
    return EXIT_OK


def _cmd_metrics(args) -> int:
    ref = load_pgm(args.reference)
    test = load_pgm(args.test)
    print(f"mse={mse(ref, test):.6g}")
    print(f"psnr_db={psnr(ref, test):.6g}")
    print(f"ssim={ssim(ref, test, mode=args.ssim_mode):.6g}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    if args.spec:
        spec = parse_spec_file(args.spec)
    elif args.images:
        spec = BenchmarkSpec(images=args.images)
    else:
        print("bench: need --spec or --images", file=sys.stderr)
        return EXIT_USAGE
    for attr, value in (
        ("images", args.images if args.spec else None),
        ("densities", args.densities),
        ("seeds", args.seeds),
        ("methods", args.methods),
        ("output", args.output),
        ("alpha", args.alpha),
        ("epsilon_coefficient", args.epsilon_coeff),
        ("amf_max_side", args.amf_max_side),
    ):
        if value is not None:
            setattr(spec, attr, value)
    spec.__post_init__()
    rows = run_benchmark(spec)
    if not spec.output:
        sys.stdout.write(csv_text(rows))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "inject": _cmd_inject,
        "restore": _cmd_restore,
        "metrics": _cmd_metrics,
        "bench": _cmd_bench,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, PgmParseError) as exc:
        # bad parameters or malformed files
        if isinstance(exc, PgmParseError):
            print(f"rbfrestore: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"rbfrestore: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"rbfrestore: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UnrestorableImageError, SolveFailure) as exc:
        print(f"rbfrestore: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
