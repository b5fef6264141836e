"""Shared fixtures: the expensive windowed-integral sets are computed once
per session and reused by the superposition and acceptance tests."""

import pytest

from udwsim import DetectorParams, TrajectoryScenario, compute_wightman_integrals

# one line per acceptance criterion, echoed after the test summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

# kappa sigma = 0.05, sigma omega = 4, beta = 0.2: the probability-map regime
REF_PARAMS = DetectorParams(omega=80.0, lambda_coupling=0.01, sigma=0.05)


@pytest.fixture(scope="session")
def parallel_unit_sep_integrals():
    """Windowed Wightman integrals for Parallel branches at kappa L = 1."""
    sc = TrajectoryScenario("Parallel", kappa1=1.0, L=1.0)
    return sc, compute_wightman_integrals(sc, REF_PARAMS)


@pytest.fixture(scope="session")
def differing_integrals():
    """Windowed integrals for asymmetric branches (kappa2 = kappa1 / 2)."""
    sc = TrajectoryScenario("Differing", kappa1=1.0, kappa2=0.5)
    par = DetectorParams(omega=2.0, lambda_coupling=0.01, sigma=1.0)
    return sc, par, compute_wightman_integrals(sc, par)
