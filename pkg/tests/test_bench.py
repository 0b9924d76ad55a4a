import csv
import io

import numpy as np
import pytest

from graphrdh.bench import (
    CSV_COLUMNS,
    SweepConfig,
    SweepRow,
    capacity_profile,
    error_histogram,
    lcg_bits,
    rhombus_gaps,
    run_sweep,
    summarize_sweep,
    sweep_csv,
)
from graphrdh.config import PredictorParams
from graphrdh.exceptions import RdhConfigurationError
from graphrdh.image import GrayImage, save_pgm
from graphrdh.layers import LayerPlan
from graphrdh.predictors import make_predictor


@pytest.fixture
def sweep_yaml():
    return """
images:
  - cover.pgm
capacities: [0, 120]
predictors: [rhombus, quad]
output: result.csv
seed: 3
record_timing: false
params:
  window: 7
"""


@pytest.fixture
def sweep_config(sweep_yaml, cover_file):
    return SweepConfig.from_yaml(sweep_yaml, cover_file.parent)


def read_csv(path):
    lines = path.read_text().splitlines()
    return lines[0], list(csv.reader(lines[1:]))


def test_lcg_bits_deterministic():
    assert lcg_bits(5, 100) == lcg_bits(5, 100)
    assert lcg_bits(5, 100) != lcg_bits(6, 100)
    assert lcg_bits(5, 20) == lcg_bits(5, 100)[:20]
    assert set(lcg_bits(1, 1000)) == {0, 1}
    assert lcg_bits(1, 0) == []


def test_lcg_bits_first_values():
    # state 1013904223 for seed 0, most significant bit 0
    assert lcg_bits(0, 1) == [0]
    assert lcg_bits(0, 2)[1] == (1664525 * 1013904223 + 1013904223) % (1 << 32) >> 31


def test_sweep_config_from_yaml(sweep_config, cover_file):
    assert sweep_config.capacities == [0, 120]
    assert sweep_config.predictors == ["rhombus", "quad"]
    assert sweep_config.seed == 3
    assert sweep_config.record_timing is False
    assert sweep_config.params == PredictorParams(window=7)
    assert sweep_config.image_paths() == [cover_file]
    assert sweep_config.output_path() == cover_file.parent / "result.csv"


def test_sweep_config_load(tmp_path, sweep_yaml):
    path = tmp_path / "sweep.yml"
    path.write_text(sweep_yaml)
    cfg = SweepConfig.load(path)
    assert cfg.base_path == tmp_path
    assert cfg.image_paths() == [tmp_path / "cover.pgm"]


def test_sweep_config_defaults():
    cfg = SweepConfig.from_dict({"images": ["a.pgm"], "capacities": [10]})
    assert cfg.predictors == ["quad"]
    assert cfg.workers == 1
    assert cfg.output_path() is None


def test_sweep_config_tasks(sweep_config):
    tasks = sweep_config.tasks()
    assert [(t.predictor, t.capacity_bits) for t in tasks] == [
        ("rhombus", 0),
        ("rhombus", 120),
        ("quad", 0),
        ("quad", 120),
    ]
    assert all(t.seed == 3 for t in tasks)


@pytest.mark.parametrize(
    "d",
    [
        {"capacities": [100, 50]},
        {"capacities": [100, 100]},
        {"capacities": [-1]},
        {"predictors": []},
        {"predictors": ["quad", "wavelet"]},
        {"workers": 0},
        {"capacities": ["many"]},
        {"params": {"gamma": -1}},
        {"unknown": 1},
    ],
)
def test_sweep_config_invalid(d):
    with pytest.raises(RdhConfigurationError):
        SweepConfig.from_dict({"images": ["a.pgm"], **d})


@pytest.mark.parametrize("config", ["- a\n- b", "images: [a.pgm\n"])
def test_sweep_config_invalid_yaml(config):
    with pytest.raises(RdhConfigurationError):
        SweepConfig.from_yaml(config)


def test_sweep_row_to_csv():
    row = SweepRow("a.pgm", "quad", 100, 55.123456, (0.01, 0.02, 0.03, 0.04), 1.5, True)
    assert row.to_csv() == [
        "a.pgm",
        "quad",
        "100",
        "55.1235",
        "0.01",
        "0.02",
        "0.03",
        "0.04",
        "1.500",
        "true",
    ]
    assert row.to_csv(record_timing=False)[8] == "0.000"


def test_failed_sweep_row_to_csv():
    row = SweepRow("a.pgm", "gtv", 100, error="RdhCapacityUnreachableError")
    fields = row.to_csv()
    assert fields[3] == "RdhCapacityUnreachableError"
    assert fields[4:8] == ["", "", "", ""]
    assert fields[9] == "false"


def test_empty_sweep_csv():
    assert sweep_csv([], seed=7) == "# seed=7\n" + ",".join(CSV_COLUMNS) + "\n"


def test_empty_capacities(tmp_path, cover_file):
    cfg = SweepConfig([str(cover_file)], [], ["quad"])
    out = tmp_path / "empty.csv"
    assert run_sweep(cfg, out) == []
    seed_line, rows = read_csv(out)
    assert seed_line == "# seed=1"
    assert rows == [list(CSV_COLUMNS)]


def test_run_sweep(sweep_config, cover_file):
    rows = run_sweep(sweep_config)
    assert [(r.predictor, r.capacity_bits) for r in rows] == [
        ("rhombus", 0),
        ("rhombus", 120),
        ("quad", 0),
        ("quad", 120),
    ]
    assert all(r.ok for r in rows)
    assert all(r.psnr_db >= 48.1308 for r in rows)
    assert all(len(r.taus) == 4 for r in rows)

    seed_line, csv_rows = read_csv(cover_file.parent / "result.csv")
    assert seed_line == "# seed=3"
    assert csv_rows[0] == list(CSV_COLUMNS)
    assert [r[0] for r in csv_rows[1:]] == ["cover.pgm"] * 4
    assert all(r[8] == "0.000" and r[9] == "true" for r in csv_rows[1:])


def test_run_sweep_deterministic(sweep_config, tmp_path):
    first, second = tmp_path / "first.csv", tmp_path / "second.csv"
    run_sweep(sweep_config, first)
    run_sweep(sweep_config, second)
    assert first.read_text() == second.read_text()


def test_run_sweep_workers(sweep_config, tmp_path):
    serial = run_sweep(sweep_config, tmp_path / "serial.csv")
    sweep_config.workers = 2
    parallel = run_sweep(sweep_config, tmp_path / "parallel.csv")
    assert [(r.psnr_db, r.taus) for r in parallel] == [(r.psnr_db, r.taus) for r in serial]
    assert (tmp_path / "parallel.csv").read_text() == (tmp_path / "serial.csv").read_text()


def test_run_sweep_failed_rows(tmp_path, cover_file):
    cfg = SweepConfig(
        [str(tmp_path / "missing.pgm"), str(cover_file)],
        [100, 100000],
        ["rhombus"],
        params=PredictorParams(window=7),
    )
    with pytest.warns(UserWarning, match="failed"):
        rows = run_sweep(cfg, tmp_path / "out.csv")
    assert [r.ok for r in rows] == [False, False, True, False]
    assert rows[3].error == "RdhCapacityUnreachableError"
    _, csv_rows = read_csv(tmp_path / "out.csv")
    assert csv_rows[4][3] == "RdhCapacityUnreachableError"


def test_rhombus_gaps():
    rows = [
        SweepRow("a.pgm", "rhombus", 100, 50.0, ok=True),
        SweepRow("a.pgm", "quad", 100, 51.5, ok=True),
        SweepRow("a.pgm", "gtv", 100, error="RdhCapacityUnreachableError"),
        SweepRow("a.pgm", "quad", 200, 49.0, ok=True),
    ]
    assert rhombus_gaps(rows) == {("a.pgm", 100, "quad"): pytest.approx(1.5)}
    summary = summarize_sweep(rows)
    assert "a.pgm quad 100: 51.5000 dB" in summary
    assert "a.pgm gtv 100: failed (RdhCapacityUnreachableError)" in summary
    assert "a.pgm 100 quad: +1.5000 dB" in summary


def test_summary_without_baseline():
    summary = summarize_sweep([SweepRow("a.pgm", "quad", 100, 51.5, ok=True)])
    assert "rhombus" not in summary


@pytest.fixture
def profile_setup(smooth_image, fast_params):
    layer = LayerPlan(1, smooth_image.height, smooth_image.width)
    return smooth_image, layer, make_predictor("quad", fast_params)


def test_capacity_profile(profile_setup):
    image, layer, predictor = profile_setup
    points = capacity_profile(image, layer, predictor, codes=range(0, 501, 50))
    assert [p.tau_code for p in points] == list(range(0, 501, 50))
    assert points[0].gate_pixels == 0
    assert points[-1].gate_pixels == len(layer)
    for a, b in zip(points, points[1:]):
        assert a.gate_pixels <= b.gate_pixels
        assert a.embeddable_pixels <= b.embeddable_pixels
    assert all(p.embeddable_pixels <= p.gate_pixels for p in points)
    assert points[-1].tau == 5.0


def test_capacity_profile_without_codes(profile_setup):
    assert capacity_profile(*profile_setup, codes=[]) == []


def test_error_histogram(profile_setup):
    image, layer, predictor = profile_setup
    histogram = error_histogram(image, layer, predictor, 5.0)
    assert sum(histogram.values()) == len(layer)
    assert list(histogram) == sorted(histogram)
    point = capacity_profile(image, layer, predictor, codes=[500])[0]
    assert histogram.get(0, 0) + histogram.get(-1, 0) == point.embeddable_pixels


def test_sweep_csv_parses():
    rows = [SweepRow("a.pgm", "quad", 10, 60.0, (0.01,) * 4, 0.25, True)]
    parsed = list(csv.reader(io.StringIO(sweep_csv(rows, seed=1))))
    assert parsed[0] == ["# seed=1"]
    assert parsed[2][3] == "60.0000"


@pytest.fixture
def flat_checker_cover(tmp_path):
    """Flat left half, 100/140 checkerboard right half."""
    pixels = np.full((24, 96), 128, dtype=np.uint8)
    rr, cc = np.meshgrid(np.arange(24), np.arange(48, 96), indexing="ij")
    pixels[:, 48:] = np.where((rr + cc) % 2 == 0, 100, 140)
    path = tmp_path / "checker.pgm"
    save_pgm(GrayImage(pixels), path)
    return path


def test_sweep_psnr_monotone_and_quad_over_rhombus(flat_checker_cover, tmp_path):
    cfg = SweepConfig(
        [str(flat_checker_cover)],
        [50, 250, 500],
        ["rhombus", "quad"],
        params=PredictorParams(window=7),
    )
    rows = run_sweep(cfg, tmp_path / "checker.csv")
    assert all(r.ok for r in rows)
    psnr = {p: [r.psnr_db for r in rows if r.predictor == p] for p in cfg.predictors}
    for values in psnr.values():
        assert all(a >= b for a, b in zip(values, values[1:]))
        assert all(v >= 48.1308 for v in values)
    assert all(q >= r for q, r in zip(psnr["quad"], psnr["rhombus"]))
    assert all(gap > 0 for gap in rhombus_gaps(rows).values())
