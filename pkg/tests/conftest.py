import os
from pathlib import Path
from tempfile import TemporaryDirectory

import numpy as np
import pytest
from ratfit import Box, SampleSet
from ratfit import sampling, testfns
from ratfit.objects import DesignSpec


@pytest.fixture(scope="session", autouse=True)
def _setup_ratfit_for_tests() -> None:
    original_dir = Path.cwd()

    with TemporaryDirectory() as tmp_dir:  # Because models and csv files will be written
        os.chdir(tmp_dir)

        try:
            with pytest.MonkeyPatch.context() as monkeypatch:
                monkeypatch.setenv("RATFIT_THREADS", "1")
                monkeypatch.setenv("RATFIT_MULTISTART_CAP", "100")
                monkeypatch.setenv("RATFIT_FACE_TEST_POINTS", "400")
                monkeypatch.setenv("RATFIT_INTERIOR_TEST_POINTS", "1000")

                yield
        finally:
            os.chdir(original_dir)


@pytest.fixture()
def tmp_path(tmp_path) -> Path:
    original_dir = Path.cwd()
    try:
        os.chdir(tmp_path)
        yield tmp_path
    finally:
        os.chdir(original_dir)


@pytest.fixture()
def make_samples():
    """Samples of a catalog function on its own design, optionally with noise."""

    def _make(function: str, M: int, N: int, seed: int = 0, strategy: str = "dlhd", epsilon: float = 0.0) -> SampleSet:
        fn = testfns.get(function)
        points = sampling.design_points(strategy, fn.domain, M, N, seed)
        values = sampling.add_noise(fn(points), epsilon, seed)
        return SampleSet(points=points, values=values, domain=fn.domain)

    return _make


@pytest.fixture()
def random_samples():
    """Latin hypercube points in [-1, 1]^n with standard normal values."""

    def _make(n: int, K: int, seed: int = 0) -> SampleSet:
        domain = Box.unit(n)
        points = sampling.lhs(DesignSpec(domain=domain, K=K, seed=seed))
        values = np.random.default_rng(seed + 1000).standard_normal(K)
        return SampleSet(points=points, values=values, domain=domain)

    return _make
