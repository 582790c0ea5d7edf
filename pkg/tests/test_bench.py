import numpy as np
import pytest

from conftest import synthetic_image
from rbfrestore.bench import (
    CSV_HEADER,
    BenchmarkSpec,
    csv_text,
    parse_spec_file,
    run_benchmark,
)
from rbfrestore.cli import main
from rbfrestore.image_io import load_pgm, save_pgm


@pytest.fixture()
def small_pgm(tmp_path):
    path = tmp_path / "synth.pgm"
    save_pgm(path, synthetic_image((48, 48), seed=13))
    return path


def _strip_runtime(text: str) -> str:
    lines = []
    for line in text.strip().splitlines():
        lines.append(",".join(line.split(",")[:-1]))
    return "\n".join(lines)


def test_csv_schema_and_order(small_pgm):
    spec = BenchmarkSpec(
        images=[str(small_pgm)], densities=[30, 10], seeds=[1, 0], methods=["med", "pm"]
    )
    rows = run_benchmark(spec)
    text = csv_text(rows)
    header = text.splitlines()[0]
    assert header == ",".join(CSV_HEADER)
    # canonical order: method, then density, then seeds with a mean row after each group
    keys = [(r.method, r.density_pct, r.seed) for r in rows]
    assert keys == [
        ("med", 10, 0), ("med", 10, 1), ("med", 10, "mean"),
        ("med", 30, 0), ("med", 30, 1), ("med", 30, "mean"),
        ("pm", 10, 0), ("pm", 10, 1), ("pm", 10, "mean"),
        ("pm", 30, 0), ("pm", 30, 1), ("pm", 30, "mean"),
    ]


def test_every_tuple_once_and_mean_rows_exact(small_pgm):
    spec = BenchmarkSpec(
        images=[str(small_pgm)], densities=[20, 50], seeds=[0, 1, 2], methods=["pm", "amf"]
    )
    rows = run_benchmark(spec)
    seed_rows = [r for r in rows if r.seed != "mean"]
    assert len(seed_rows) == len({(r.image, r.method, r.density_pct, r.seed) for r in seed_rows})
    assert len(seed_rows) == 2 * 2 * 3
    for mean_row in (r for r in rows if r.seed == "mean"):
        members = [
            r
            for r in seed_rows
            if (r.image, r.method, r.density_pct)
            == (mean_row.image, mean_row.method, mean_row.density_pct)
        ]
        assert len(members) == 3
        for attr in ("mse", "psnr_db", "ssim", "runtime_s"):
            want = float(np.mean([getattr(r, attr) for r in members]))
            got = getattr(mean_row, attr)
            assert got == pytest.approx(want, abs=1e-9)


def test_benchmark_deterministic_modulo_runtime(small_pgm):
    spec = BenchmarkSpec(
        images=[str(small_pgm)], densities=[40], seeds=[0, 1], methods=["pm", "pm-ws"]
    )
    first = csv_text(run_benchmark(spec))
    second = csv_text(run_benchmark(spec))
    assert _strip_runtime(first) == _strip_runtime(second)


def test_near_zero_density_yields_inf_psnr(tmp_path):
    path = tmp_path / "gray.pgm"
    save_pgm(path, np.full((32, 32), 128, np.uint8))
    spec = BenchmarkSpec(images=[str(path)], densities=[0.0001], seeds=[0, 1, 2], methods=["pm"])
    rows = run_benchmark(spec)
    text = csv_text(rows)
    assert "inf" in text
    assert all(r.psnr_db == float("inf") for r in rows if r.seed != "mean")


def test_unrestorable_tuple_becomes_nan_row(tmp_path):
    path = tmp_path / "white.pgm"
    save_pgm(path, np.full((16, 16), 255, np.uint8))  # detector flags everything
    spec = BenchmarkSpec(images=[str(path)], densities=[10], seeds=[0], methods=["pm"])
    rows = run_benchmark(spec)
    assert np.isnan(rows[0].psnr_db)
    assert "nan" in csv_text(rows)


def test_spec_validation():
    with pytest.raises(ValueError):
        BenchmarkSpec(images=[])
    with pytest.raises(ValueError):
        BenchmarkSpec(images=["x.pgm"], densities=[0])
    with pytest.raises(ValueError):
        BenchmarkSpec(images=["x.pgm"], methods=["nope"])
    with pytest.raises(ValueError):
        BenchmarkSpec(images=["x.pgm"], seeds=[])


def test_parse_spec_file(tmp_path):
    spec_path = tmp_path / "bench.spec"
    spec_path.write_text(
        "# comment\n"
        "images=a.pgm, b.pgm\n"
        "densities=10,50\n"
        "seeds=0,1\n"
        "methods=pm,med\n"
        "alpha=2.0\n"
        "amf_max_side=9\n"
    )
    spec = parse_spec_file(spec_path)
    assert spec.images == ["a.pgm", "b.pgm"]
    assert spec.densities == [10.0, 50.0]
    assert spec.seeds == [0, 1]
    assert spec.methods == ["pm", "med"]
    assert spec.alpha == 2.0
    assert spec.amf_max_side == 9


def test_parse_spec_file_rejects_unknown_keys(tmp_path):
    spec_path = tmp_path / "bad.spec"
    spec_path.write_text("images=a.pgm\nturbo=yes\n")
    with pytest.raises(ValueError, match="turbo"):
        parse_spec_file(spec_path)


# ---------------------------------------------------------------- CLI


def test_cli_inject_restore_metrics_round_trip(tmp_path, capsys):
    clean = tmp_path / "clean.pgm"
    noisy = tmp_path / "noisy.pgm"
    restored = tmp_path / "restored.pgm"
    save_pgm(clean, synthetic_image((48, 48), seed=14))

    assert main(["inject", str(clean), str(noisy), "--density", "40", "--seed", "0"]) == 0
    assert main(["restore", str(noisy), str(restored), "--method", "pm"]) == 0
    assert main(["metrics", str(clean), str(restored)]) == 0
    out = capsys.readouterr().out
    assert "psnr_db=" in out and "ssim=" in out and "mse=" in out

    img = load_pgm(restored)
    assert img.shape == (48, 48)


def test_cli_bench_writes_csv(tmp_path):
    clean = tmp_path / "clean.pgm"
    save_pgm(clean, synthetic_image((48, 48), seed=15))
    out_csv = tmp_path / "report.csv"
    rc = main(
        ["bench", "--images", str(clean), "--densities", "30", "--seeds", "0", "1",
         "--methods", "pm", "med", "--output", str(out_csv)]
    )
    assert rc == 0
    lines = out_csv.read_text().strip().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 1 + 2 * 3  # 2 methods x (2 seeds + mean)


def test_cli_bench_spec_file(tmp_path, capsys):
    clean = tmp_path / "clean.pgm"
    save_pgm(clean, synthetic_image((48, 48), seed=16))
    spec_path = tmp_path / "bench.spec"
    spec_path.write_text(f"images={clean}\ndensities=20\nseeds=0\nmethods=med\n")
    assert main(["bench", "--spec", str(spec_path)]) == 0
    out = capsys.readouterr().out
    assert out.startswith(",".join(CSV_HEADER))


def test_cli_usage_errors_exit_1(tmp_path, capsys):
    clean = tmp_path / "clean.pgm"
    save_pgm(clean, synthetic_image((24, 24), seed=17))
    assert main(["inject", str(clean), str(tmp_path / "o.pgm")]) == 1  # no density
    assert main(["bench"]) == 1  # no images or spec
    with pytest.raises(SystemExit) as exc:
        main(["restore", str(clean), str(tmp_path / "o.pgm"), "--method", "bogus"])
    assert exc.value.code == 1
    capsys.readouterr()


def test_cli_io_errors_exit_2(tmp_path, capsys):
    missing = tmp_path / "missing.pgm"
    assert main(["metrics", str(missing), str(missing)]) == 2
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"JUNK")
    assert main(["restore", str(bad), str(tmp_path / "o.pgm")]) == 2
    capsys.readouterr()


def test_cli_unrestorable_exits_3(tmp_path, capsys):
    white = tmp_path / "white.pgm"
    save_pgm(white, np.full((8, 8), 255, np.uint8))
    assert main(["restore", str(white), str(tmp_path / "o.pgm"), "--method", "pm"]) == 3
    capsys.readouterr()
