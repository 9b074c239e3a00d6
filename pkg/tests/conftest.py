"""Shared fixtures: the reference background and small perturbed runs."""
from __future__ import annotations

import pytest

from axishock.config import RunConfig
from axishock.pipeline import run_2d, solve_background
from axishock.subsonic import prepare_inputs
from axishock.upstream import default_perturbation, march_supersonic

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def ref_config():
    return RunConfig()


@pytest.fixture(scope="session")
def ref_background(ref_config):
    return solve_background(ref_config)


@pytest.fixture(scope="session")
def zero_inputs(ref_background):
    """Solver inputs for sigma = 0 on a coarse grid."""
    data = default_perturbation(0.0)
    up = march_supersonic(data, ref_background, 64, 16)
    return prepare_inputs(ref_background, data, up, 32, 16)


@pytest.fixture(scope="session")
def small_run(ref_config, ref_background):
    """Converged sigma = 0.005 run on 64x32."""
    return run_2d(ref_config.replace(n1=64, n2=32), ref_background)


@pytest.fixture(scope="session")
def zero_run(ref_config, ref_background):
    return run_2d(ref_config.replace(n1=64, n2=32, sigma=0.0), ref_background)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
