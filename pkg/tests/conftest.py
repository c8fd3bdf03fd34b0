"""Shared, expensive fixtures: computed once per session."""

import time

import numpy as np
import pytest

from dualhop_meta.meta import gil_pelaez_ccdf
from dualhop_meta.network import default_config
from dualhop_meta.simulation import DEFAULT_X_GRID, run_threshold_sweep

THETAS = (0.1, 1.0, 10.0)
MC_REALIZATIONS = 100_000
MC_SEED = 20240611


@pytest.fixture(scope="session")
def gp_curves():
    """Exact curves on the 0.05:0.05:0.95 grid for each threshold."""
    return {
        th: np.array([gil_pelaez_ccdf(x, default_config(th)) for x in DEFAULT_X_GRID])
        for th in THETAS
    }


@pytest.fixture(scope="session")
def mc_sweep():
    """Coupled Monte Carlo runs sharing geometry across the three thresholds.

    Returns ``(sweep, seconds)``.
    """
    start = time.perf_counter()
    sweep = run_threshold_sweep(
        default_config(), THETAS, n_realizations=MC_REALIZATIONS, master_seed=MC_SEED
    )
    return sweep, time.perf_counter() - start


ACCEPTANCE_LINES = []


@pytest.fixture
def report(capsys):
    """Print one PASS/FAIL line per acceptance criterion, live and in the summary."""
    def emit(number, title, ok, detail):
        line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
        return ok
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
