from pathlib import Path

import pytest
from ratfit import EnvSettings, PathSettings
from ratfit.exceptions import ConfigurationError


@pytest.fixture(autouse=True)
def _set_default_envvars(monkeypatch):
    monkeypatch.setenv("RATFIT_ETA", "1e-10")
    monkeypatch.setenv("RATFIT_TAU", "2")
    monkeypatch.setenv("RATFIT_SEED", "42")
    monkeypatch.delenv("RATFIT_THREADS", raising=False)


def _create_settings_file(text: str) -> Path:
    file = Path("ratfit.yml")
    file.write_text(text, encoding="utf8")
    return file


def test_env_settings():
    sut = EnvSettings().validate()

    assert sut.eta == 1e-10
    assert sut.tau == 2.0
    assert sut.seed == 42
    assert sut.threads == 1
    assert sut.sigma == 0.0
    assert sut.multistart_cap == 100


@pytest.mark.parametrize(
    ("name", "value"),
    [
        ("RATFIT_ETA", "0"),
        ("RATFIT_TAU", "-1"),
        ("RATFIT_SIGMA", "-0.5"),
        ("RATFIT_THREADS", "0"),
        ("RATFIT_SEED", "seven"),
        ("RATFIT_MAX_ITERATIONS", "1.5"),
    ],
)
def test_env_settings_invalid(monkeypatch, name, value):
    monkeypatch.setenv(name, value)

    with pytest.raises(ConfigurationError, match="Please verify and correct these settings"):
        EnvSettings().validate()


def test_env_settings_empty_falls_back_to_the_default(monkeypatch):
    monkeypatch.setenv("RATFIT_TAU", " ")

    assert EnvSettings().validate().tau == 1.0


def test_path_settings(tmp_path):
    sut = PathSettings(
        _create_settings_file(
            """
            eta: 1e-8
            tau: 0.5
            threads: 4
            output_dir: results
            """
        )
    ).validate()

    assert sut.eta == 1e-8
    assert sut.tau == 0.5
    assert sut.threads == 4
    assert sut.seed == 0
    assert sut.other_info == {"output_dir": "results"}


def test_path_settings_threads_from_the_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("RATFIT_THREADS", "3")

    sut = PathSettings(_create_settings_file("threads: 4\n")).validate()

    assert sut.threads == 3


def test_path_settings_empty_file(tmp_path):
    sut = PathSettings(_create_settings_file("")).validate()

    assert sut.tau == 1.0
    assert sut.other_info == {}


@pytest.mark.parametrize(
    ("text", "message"),
    [
        ("- a\n- b\n", "should contain a mapping"),
        ("tau: [1, 2\n", "Cannot read settings"),
    ],
)
def test_path_settings_unreadable(tmp_path, text, message):
    with pytest.raises(ConfigurationError, match=message):
        PathSettings(_create_settings_file(text))


def test_path_settings_missing_file(tmp_path):
    with pytest.raises(ConfigurationError, match="Cannot read settings"):
        PathSettings(tmp_path / "missing.yml")


def test_path_settings_invalid_value(tmp_path):
    with pytest.raises(ConfigurationError, match=r"\['local_tol'\]"):
        PathSettings(_create_settings_file("local_tol: -1\n")).validate()


def test_configuration_error_exit_code():
    assert ConfigurationError.exit_code == 2
