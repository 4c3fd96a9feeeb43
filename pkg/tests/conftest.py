"""Shared fixtures: the expensive recursion runs are computed once per session."""

import pytest

from continuum_cascade.fronts import alpha_scan
from continuum_cascade.recursion import (
    Quadrature,
    RecursionConfig,
    front_clearance_xmax,
    run_recursion,
)


@pytest.fixture(scope="session")
def d01_n2000_run():
    """Trapezoid run at delta = 0.01 to n = 2000 with fronts at three levels."""
    config = RecursionConfig(delta=0.01, x_max=front_clearance_xmax(2000), n_max=2000)
    return run_recursion(
        config,
        snapshot_generations=(1, 20, 40, 60, 80, 100),
        front_levels=(0.25, 0.5, 0.75),
    )


@pytest.fixture(scope="session")
def d001_riemann_n400_trace():
    config = RecursionConfig(
        delta=0.001,
        x_max=front_clearance_xmax(400),
        n_max=400,
        quadrature=Quadrature.RIEMANN,
    )
    return run_recursion(config, front_levels=(0.5,)).front_traces[0]


@pytest.fixture(scope="session")
def d01_riemann_n400_trace():
    config = RecursionConfig(
        delta=0.01,
        x_max=front_clearance_xmax(400),
        n_max=400,
        quadrature=Quadrature.RIEMANN,
    )
    return run_recursion(config, front_levels=(0.5,)).front_traces[0]


@pytest.fixture(scope="session")
def d001_n200_probe_run():
    """Fine-grid run retaining the generations the limit-law probe needs."""
    config = RecursionConfig(delta=0.001, x_max=front_clearance_xmax(200), n_max=200)
    return run_recursion(config, snapshot_generations=(99, 149, 199))


@pytest.fixture(scope="session")
def recursion_oracle_x3():
    """P_n(x) for n = 0..15 on [0, 3] at delta = 0.001 (Monte Carlo oracle)."""
    config = RecursionConfig(delta=0.001, x_max=3.0, n_max=15)
    return run_recursion(config, snapshot_generations=range(16))


@pytest.fixture(scope="session")
def d01_riemann_n100_run():
    """Riemann run with every generation retained, for the alpha probe."""
    config = RecursionConfig(
        delta=0.01,
        x_max=front_clearance_xmax(100),
        n_max=100,
        quadrature=Quadrature.RIEMANN,
    )
    return run_recursion(config, snapshot_generations=range(1, 100))


@pytest.fixture(scope="session")
def alpha_scan_results():
    return alpha_scan([0.02, 0.01, 0.005, 0.001], n_max=100)
