import json
import logging
from pathlib import Path

import numpy as np
import pytest
from ratfit import Box, FitReport
from ratfit.common import capture_all_exceptions, parse_list, point_columns, read_points, read_samples, save_json, to_json, write_points
from ratfit.exceptions import ConfigurationError, DomainError, UnknownFunctionError


def test_capture_all_exceptions_passes_results():
    @capture_all_exceptions
    def command():
        return 4

    @capture_all_exceptions
    def quiet():
        return None

    assert command() == 4
    assert quiet() == 0


def test_capture_all_exceptions_uses_the_exit_code(caplog):
    @capture_all_exceptions
    def command():
        raise UnknownFunctionError("Unknown test function 'f99'")

    with caplog.at_level(logging.ERROR):
        assert command() == 10

    assert "UnknownFunctionError: Unknown test function 'f99'" in caplog.text


def test_capture_all_exceptions_unexpected(caplog):
    @capture_all_exceptions
    def command():
        raise KeyError("boom")

    with caplog.at_level(logging.ERROR):
        assert command() == 1

    assert "An unexpected exception happened" in caplog.text


def test_to_json():
    report = FitReport(method="ra-dr", singular_values=[2.0, 1.0], reduced_from=(5, 5), wall_times={"svd": 0.5})

    data = json.loads(to_json(report))

    assert data["method"] == "ra-dr"
    assert data["reduced_from"] == [5, 5]
    assert data["singular_values"] == [2.0, 1.0]
    assert data["wall_times"] == {"svd": 0.5}
    assert data["sip_iterations"] is None


def test_save_json(tmp_path: Path):
    filename = save_json(FitReport(method="poly"), "report.json")

    assert json.loads(filename.read_text(encoding="utf8"))["method"] == "poly"


def test_point_columns():
    assert point_columns(3) == ["x1", "x2", "x3"]


def test_write_and_read_samples(tmp_path: Path):
    points = np.array([[0.1, -0.2], [1 / 3, 0.7]])
    values = np.array([np.pi, -1e-300])

    write_points("samples.csv", points, values)

    assert Path("samples.csv").read_text(encoding="utf8").splitlines()[0] == "x1,x2,f"

    sut = read_samples("samples.csv", Box.unit(2))
    np.testing.assert_array_equal(sut.points, points)
    np.testing.assert_array_equal(sut.values, values)
    assert sut.domain == Box.unit(2)


def test_read_samples_uses_the_bounding_box(tmp_path: Path):
    write_points("samples.csv", np.array([[0.0, 5.0], [2.0, 3.0]]), np.array([1.0, 2.0]))

    sut = read_samples("samples.csv")

    assert sut.domain == Box(((0.0, 2.0), (3.0, 5.0)))


def test_read_points(tmp_path: Path):
    write_points("points.csv", np.array([[0.5], [0.25]]))

    np.testing.assert_array_equal(read_points("points.csv"), [[0.5], [0.25]])


@pytest.mark.parametrize(
    ("content", "message"),
    [
        ("a,b,f\n1,2,3\n", "has no x1..xn columns"),
        ("x1,x2\n1,2\n", "has no f column"),
        ("x1,f\nnan,2\n", "non-finite coordinates"),
        ("", "Cannot read"),
    ],
)
def test_read_samples_errors(tmp_path: Path, content, message):
    Path("bad.csv").write_text(content, encoding="utf8")

    with pytest.raises(DomainError, match=message):
        read_samples("bad.csv")


def test_read_missing_file(tmp_path: Path):
    with pytest.raises(DomainError, match="Cannot read"):
        read_points("missing.csv")


def test_parse_list():
    assert parse_list("f1, f7,") == ["f1", "f7"]
    assert parse_list("0,1e-6", float) == [0.0, 1e-6]
    assert parse_list("") == []
    assert parse_list(None) == []

    with pytest.raises(ConfigurationError, match="Cannot parse the list"):
        parse_list("1,two", int)
