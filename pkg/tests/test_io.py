import io

import numpy as np
import pytest

from evp import (
    RandomSource,
    bias_variance_mse_report,
    comparison_report,
    evp_curve,
    evp_curve_all,
    read_curve,
    read_report,
    read_scores,
    write_curve,
    write_report,
)
from evp.io import COMPARISON_COLUMNS, SIMULATION_COLUMNS, ScoreParseError


def test_read_plain_lines():
    pool = read_scores(io.StringIO("0.41\n0.39\n\n0.44\n"))
    assert pool.scores.tolist() == [0.39, 0.41, 0.44]


def test_read_csv_with_header(tmp_path):
    path = tmp_path / "scores.csv"
    path.write_text("trial,score\n1,0.5\n2,0.25\n")
    assert read_scores(path).scores.tolist() == [0.25, 0.5]
    assert read_scores(str(path), fmt="csv").scores.tolist() == [0.25, 0.5]


def test_read_csv_score_column_anywhere():
    pool = read_scores(io.StringIO("Score,seed\n0.7,1\n0.6,2\n"))
    assert pool.scores.tolist() == [0.6, 0.7]


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("abc\n", "line 1"),
        ("0.5\n0.6\nx\n", "line 3"),
        ("0.5\nnan\n", "line 2"),
        ("", "no scores"),
        ("\n\n", "no scores"),
        ("trial,acc\n1,0.5\n", "no 'score' column"),
        ("trial,score\n", "no score rows"),
        ("trial,score\n1,inf\n", "line 2"),
    ],
)
def test_read_errors(text, fragment):
    with pytest.raises(ScoreParseError, match=fragment):
        read_scores(io.StringIO(text))


def test_read_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_scores(tmp_path / "absent.txt")


def test_curve_csv_rows_and_header():
    one = write_curve(evp_curve("u", [0.5]), "csv").decode().splitlines()
    assert one == ["n,estimator,mean,variance", "1,u,0.5,0"]
    many = write_curve(evp_curve_all([1, 2, 3, 4]), "csv").decode().splitlines()
    assert len(many) == 13
    assert many[4] == "4,u,4,0"


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_curve_round_trip(fmt):
    rng = np.random.default_rng(0)
    for _ in range(10):
        curves = evp_curve_all(rng.normal(0.6, 0.1, rng.integers(1, 30)))
        data = write_curve(curves, fmt)
        parsed = read_curve(data, fmt)
        assert write_curve(parsed, fmt) == data
        for a, b in zip(curves, parsed):
            assert a.kind is b.kind and a.B == b.B
            assert np.array_equal(a.means, b.means)
            assert np.array_equal(a.variances, b.variances)


def test_curve_deterministic_bytes():
    pool = [0.1, 0.3, 0.2]
    assert write_curve(evp_curve_all(pool)) == write_curve(evp_curve_all(list(reversed(pool))))


def test_seventeen_significant_digits():
    line = write_curve(evp_curve("v", [0.1, 0.2, 0.7]), "csv").decode().splitlines()[2]
    mean = line.split(",")[2]
    assert float(mean) == evp_curve("v", [0.1, 0.2, 0.7]).means[1]
    assert len(mean.replace("0.", "", 1).lstrip("0")) <= 17


@pytest.fixture(scope="module")
def sim_report():
    bag = np.random.default_rng(1).normal(0.6, 0.07, 400)
    return bias_variance_mse_report(bag, 6, 50, 200, RandomSource(2))


@pytest.fixture(scope="module")
def cmp_report():
    rng = np.random.default_rng(3)
    return comparison_report(rng.normal(0.62, 0.05, 30), rng.normal(0.6, 0.05, 30),
                             range(4, 8), 300, RandomSource(4))


def test_simulation_columns(sim_report):
    lines = write_report(sim_report, "csv").decode().splitlines()
    assert lines[0] == ",".join(SIMULATION_COLUMNS)
    assert len(lines) == 1 + 3 * 6
    assert lines[1].startswith("1,u,")


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_simulation_round_trip(sim_report, fmt):
    data = write_report(sim_report, fmt)
    parsed = read_report(data, fmt)
    assert write_report(parsed, fmt) == data
    for f in ("mean", "bias", "variance", "mse", "stderr"):
        assert np.array_equal(getattr(parsed, f), getattr(sim_report, f))
    if fmt == "json":
        assert np.array_equal(parsed.truth, sim_report.truth)
        assert parsed.trials == 50


def test_comparison_columns(cmp_report):
    lines = write_report(cmp_report, "csv").decode().splitlines()
    assert lines[0] == ",".join(COMPARISON_COLUMNS)
    assert len(lines) == 1 + 4 * 3
    assert lines[1].startswith("4,u,")
    assert lines[1].endswith(",300")


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_comparison_round_trip(cmp_report, fmt):
    data = write_report(cmp_report, fmt)
    parsed = read_report(data, fmt)
    assert write_report(parsed, fmt) == data
    assert parsed.rates == cmp_report.rates
    if fmt == "json":
        assert parsed.truth == cmp_report.truth


def test_empty_comparison_is_header_only():
    rep = comparison_report([1.0, 2.0], [0.0, 1.0], [], 10, RandomSource(0))
    data = write_report(rep, "csv")
    assert data == (",".join(COMPARISON_COLUMNS) + "\n").encode()
    assert write_report(read_report(data, "csv"), "csv") == data


def test_unknown_format_and_type():
    with pytest.raises(ValueError):
        write_curve(evp_curve("u", [1.0]), "xml")
    with pytest.raises(TypeError):
        write_report(object(), "csv")
    with pytest.raises(ValueError):
        read_report(b"a,b\n1,2\n", "csv")
