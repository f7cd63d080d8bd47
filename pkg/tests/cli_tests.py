import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from ratfit import testfns
from ratfit.cli import build_parser, main
from ratfit.common import write_points
from ratfit.models import load_model


def _sample(function: str = "f8", M: int = 2, N: int = 2, out: str = "samples.csv") -> int:
    return main(["sample", "--function", function, "--M", str(M), "--N", str(N), "--out", out])


def test_sample(tmp_path: Path):
    assert _sample() == 0

    df = pd.read_csv("samples.csv")
    assert list(df.columns) == ["x1", "x2", "f"]
    assert len(df) == 24


def test_sample_without_values(tmp_path: Path):
    assert main(["sample", "--dim", "3", "--strategy", "lhs", "--M", "1", "--N", "1", "--out", "points.csv"]) == 0

    df = pd.read_csv("points.csv")
    assert list(df.columns) == ["x1", "x2", "x3"]
    assert len(df) == 16


@pytest.mark.parametrize(
    ("argv", "exit_code"),
    [
        (["sample", "--out", "x.csv"], 2),
        (["sample", "--function", "f99", "--out", "x.csv"], 10),
        (["sample", "--function", "f8", "--domain", "0:1,0:1", "--out", "x.csv"], 2),
        (["sample", "--domain", "0:1,0:1", "--dim", "3", "--out", "x.csv"], 2),
        (["sample", "--domain", "1:0", "--out", "x.csv"], 3),
    ],
)
def test_sample_errors(tmp_path: Path, argv, exit_code):
    assert main(argv) == exit_code


@pytest.mark.parametrize("method", ["poly", "ra", "ra-dr", "ra-sip"])
def test_fit_and_eval(tmp_path: Path, method):
    assert _sample("f13", 3, 2) == 0
    assert main(["fit", "--method", method, "--in", "samples.csv", "--function", "f13", "--M", "3", "--N", "2", "--out", "model.json", "--report", "report.json"]) == 0

    assert json.loads(Path("report.json").read_text(encoding="utf8"))["method"] == method

    points = np.random.default_rng(0).uniform(-1, 1, (20, 2))
    write_points("points.csv", points)
    assert main(["eval", "--model", "model.json", "--in", "points.csv", "--out", "values.csv"]) == 0

    df = pd.read_csv("values.csv")
    assert list(df.columns) == ["x1", "x2", "r"]
    if method != "poly":
        np.testing.assert_allclose(df["r"], testfns.get("f13")(points), rtol=1e-6, atol=1e-8)


def test_fit_reports_to_stderr(tmp_path: Path, capsys):
    _sample()

    assert main(["fit", "--method", "ra", "--in", "samples.csv", "--M", "2", "--N", "2", "--out", "model.json"]) == 0

    assert '"method": "ra"' in capsys.readouterr().err


def test_fit_with_noise(tmp_path: Path):
    _sample()

    assert main(["fit", "--method", "ra-dr", "--in", "samples.csv", "--function", "f8", "--M", "2", "--N", "2", "--epsilon", "1e-3", "--out", "model.json", "--report", "report.json"]) == 0

    report = json.loads(Path("report.json").read_text(encoding="utf8"))
    assert report["reduced_from"] == [2, 2]


@pytest.mark.parametrize(
    ("argv", "exit_code"),
    [
        (["--in", "missing.csv"], 3),
        (["--in", "samples.csv", "--M", "4", "--N", "4"], 6),
        (["--in", "samples.csv", "--tau", "0"], 2),
    ],
)
def test_fit_errors(tmp_path: Path, argv, exit_code):
    _sample()

    assert main(["fit", "--method", "ra", "--out", "model.json", *argv]) == exit_code


def test_fit_without_convergence_still_writes_the_model(tmp_path: Path):
    _sample("f13", 3, 2)
    Path("ratfit.yml").write_text("max_iterations: 1\nmultistart_cap: 50\n", encoding="utf8")

    argv = ["fit", "--method", "ra-sip", "--config", "ratfit.yml", "--in", "samples.csv", "--function", "f13", "--M", "3", "--N", "2"]
    assert main([*argv, "--out", "model.json", "--report", "report.json"]) == 9

    report = json.loads(Path("report.json").read_text(encoding="utf8"))
    assert report["converged"] is False
    assert report["sip_iterations"] == 1
    assert Path("model.json").exists()


def test_eval_matches_the_model_bitwise(tmp_path: Path):
    _sample("f13", 3, 2)
    main(["fit", "--method", "ra", "--in", "samples.csv", "--function", "f13", "--M", "3", "--N", "2", "--out", "model.json", "--report", "report.json"])
    points = np.random.default_rng(3).uniform(-1, 1, (100, 2))
    write_points("points.csv", points)

    assert main(["eval", "--model", "model.json", "--in", "points.csv", "--out", "values.csv"]) == 0

    df = pd.read_csv("values.csv", float_precision="round_trip")
    np.testing.assert_array_equal(df[["x1", "x2"]].to_numpy(), points)
    np.testing.assert_array_equal(df["r"].to_numpy(), load_model("model.json")(points))


def test_eval_errors(tmp_path: Path):
    _sample()
    main(["fit", "--method", "ra", "--in", "samples.csv", "--M", "2", "--N", "2", "--out", "model.json", "--report", "report.json"])
    write_points("points3.csv", np.zeros((2, 3)))

    assert main(["eval", "--model", "model.json", "--in", "points3.csv", "--out", "values.csv"]) == 3
    assert main(["eval", "--model", "nowhere.json", "--in", "points3.csv", "--out", "values.csv"]) == 11


def test_bench(tmp_path: Path):
    argv = ["bench", "--functions", "f8,f22", "--methods", "ra,ra-dr", "--seeds", "0", "--M", "2", "--N", "2", "--out", "bench.csv"]

    assert main(argv) == 0

    assert len(pd.read_csv("bench.csv")) == 4
    assert len(pd.read_csv("bench.summary.csv")) == 4


@pytest.mark.parametrize(
    ("argv", "exit_code"),
    [
        (["--functions", "f8", "--methods", "spline"], 2),
        (["--functions", "f99"], 10),
        (["--functions", "f8", "--seeds", "one"], 2),
    ],
)
def test_bench_errors(tmp_path: Path, argv, exit_code):
    assert main(["bench", "--out", "bench.csv", *argv]) == exit_code


def test_lcurve(tmp_path: Path, capsys):
    _sample()

    assert main(["lcurve", "--in", "samples.csv", "--function", "f8", "--M", "2", "--N", "2", "--sigmas", "1e-3,1e-2,1e-1,1", "--out", "curve.csv"]) == 0

    assert "corner sigma = " in capsys.readouterr().out
    curve = pd.read_csv("curve.csv")
    assert list(curve.columns) == ["sigma", "residual_norm", "coefficient_norm", "corner"]
    assert curve["corner"].sum() == 1


def test_lcurve_needs_three_sigmas(tmp_path: Path):
    _sample()

    assert main(["lcurve", "--in", "samples.csv", "--sigmas", "1e-3,1e-2", "--out", "curve.csv"]) == 12


def test_config_file(tmp_path: Path):
    _sample()
    Path("ratfit.yml").write_text("tau: -1\n", encoding="utf8")

    assert main(["fit", "--method", "ra", "--config", "ratfit.yml", "--in", "samples.csv", "--M", "2", "--N", "2", "--out", "model.json"]) == 2


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
