"""Regularized Wightman functions: worked values, symmetries, factorizations.

Frozen reference numbers were computed from the unfactored interval
expression 1/(4 pi^2 [(dx - i eps u)^2 - (dt - i eps u_t)^2]) evaluated
independently of the factored implementations under test.
"""

import math

import numpy as np
import pytest

from udwsim import (
    Regulator,
    TrajectoryScenario,
    denominator_factors,
    scenario_correlator,
    wightman_antiparallel_cross,
    wightman_differing_cross,
    wightman_local,
    wightman_parallel_cross,
    wightman_schlicht,
    wightman_thermal_cross,
    wightman_thermal_local,
)
from udwsim.quadrature import sign_change_roots

PI2_4 = 4.0 * math.pi**2
PI2_16 = 16.0 * math.pi**2


def test_regulator_validation():
    with pytest.raises(ValueError):
        Regulator(0.0)
    with pytest.raises(ValueError):
        Regulator(-1e-3)
    with pytest.raises(ValueError):
        Regulator(math.inf)
    assert Regulator(1e-3).epsilon == 1e-3


def test_coincidence_value():
    # W(s=0) = +1/(16 pi^2 eps^2), independent of kappa
    w = wightman_local(1.0, 0.0, 1e-2)
    assert complex(w) == pytest.approx(63.32573977646111 + 0.0j, rel=1e-12)
    w = wightman_local(7.0, 0.0, Regulator(1e-2))
    assert complex(w) == pytest.approx(63.32573977646111 + 0.0j, rel=1e-12)
    assert complex(w).real == pytest.approx(1.0 / (PI2_16 * 1e-4), rel=1e-13)


def test_local_value_at_finite_separation():
    # s = 1, kappa = 1, eps = 1e-3: dominated by -1/(16 pi^2 sinh^2(1/2))
    w = complex(wightman_local(1.0, 1.0, 1e-3))
    ideal = -1.0 / (PI2_16 * math.sinh(0.5) ** 2)
    assert w.real == pytest.approx(ideal, rel=5e-5)
    assert w.imag < 0  # positive-frequency prescription for s > 0


def test_parallel_cross_worked_value():
    # p = s = 0, L = 1, eps = 0.01: W = 1/(4 pi^2 (L^2 + 4 eps^2))
    w = complex(wightman_parallel_cross(1.0, 1.0, 0.0, 0.0, 1e-2, "12"))
    assert w == pytest.approx(0.025320167843447067 + 0.0j, rel=1e-12)
    assert w.real == pytest.approx(1.0 / (PI2_4 * (1.0 + 4e-4)), rel=1e-13)
    # direction swap is a symmetry at the closest-approach point
    w21 = complex(wightman_parallel_cross(1.0, 1.0, 0.0, 0.0, 1e-2, "21"))
    assert w21 == pytest.approx(w, rel=1e-12)


def test_antiparallel_coincident_apex():
    # L = 0, tau1 = tau2 = 0: branches touch; coincidence value
    w = complex(wightman_antiparallel_cross(1.0, 0.0, 0.0, 0.0, 1e-3))
    assert w == pytest.approx(6332.573977646111 + 0.0j, rel=1e-12)


def test_differing_cross_worked_value():
    # kappa values 1 and 1/2 at tau1 = tau2 = 0 sit a distance 1 apart
    w = complex(wightman_differing_cross(1.0, 0.5, 0.0, 0.0, 1e-2, "12"))
    assert w == pytest.approx(0.025320167843447067 + 0.0j, rel=1e-12)


def test_differing_reduces_to_local():
    # equal accelerations: cross correlator degenerates to the local one
    k = 1.3
    for t1, t2 in ((0.4, -0.2), (1.0, 0.9), (-2.0, 1.0)):
        wd = complex(wightman_differing_cross(k, k, t1, t2, 1e-3, "12"))
        wl = complex(wightman_local(k, t1 - t2, 1e-3))
        assert wd == pytest.approx(wl, rel=1e-10)


def test_thermal_cross_worked_value():
    # kappa = 1, L = 1, s' = 0: W -> kappa coth(kappa L / 2) / (8 pi^2 L)
    exact = 2.0 * (1.0 / math.tanh(0.5)) / PI2_16
    w0 = complex(wightman_thermal_cross(1.0, 1.0, 0.0, 1e-8))
    assert w0.real == pytest.approx(exact, rel=1e-9)
    w = complex(wightman_thermal_cross(1.0, 1.0, 0.0, 1e-2))
    assert w.real == pytest.approx(exact, rel=1e-3)
    assert abs(w.imag) < 1e-4
    assert exact == pytest.approx(0.027406790153359725, rel=1e-12)


def test_thermal_cross_needs_separation():
    with pytest.raises(ValueError):
        wightman_thermal_cross(1.0, 0.0, 0.5, 1e-3)


def test_thermal_local_is_small_separation_limit_of_cross():
    k, s, eps = 1.0, 0.3, 1e-3
    wl = complex(wightman_thermal_local(k, s, eps))
    wc = complex(wightman_thermal_cross(k, 1e-7, s, eps))
    assert wc == pytest.approx(wl, rel=1e-6)


def test_thermal_local_periodicity_in_imaginary_time():
    # KMS: W(s - i beta) = W(-s) with beta = 2 pi / kappa, eps -> 0
    k = 2.0
    beta = 2.0 * math.pi / k
    s = 0.7
    eps = 1e-9
    w_shift = complex(wightman_thermal_local(k, s - 1j * beta, eps))
    w_ref = complex(wightman_thermal_local(k, -s, eps))
    assert w_shift == pytest.approx(w_ref, rel=1e-6)


def test_direction_argument_validation():
    with pytest.raises(ValueError):
        wightman_parallel_cross(1.0, 1.0, 0.0, 0.0, 1e-3, "xy")
    with pytest.raises(ValueError):
        wightman_differing_cross(1.0, 0.5, 0.0, 0.0, 1e-3, 3)


def test_hyperbolic_argument_guard():
    with pytest.raises(ValueError, match="out of range"):
        wightman_local(1.0, 800.0, 1e-3)
    with pytest.raises(ValueError, match="out of range"):
        wightman_parallel_cross(1.0, 1.0, 800.0, 0.0, 1e-3, "12")


def test_cross_correlator_decay():
    # correlations die off once the branches recede many 1/kappa
    w = complex(wightman_parallel_cross(1.0, 0.5, 0.0, 30.0, 1e-3, "12"))
    assert abs(w) < 1e-12
    w = complex(wightman_antiparallel_cross(1.0, 0.5, 30.0, 0.0, 1e-3))
    assert abs(w) < 1e-12


def test_vectorized_over_time_arguments():
    s = np.linspace(-2.0, 2.0, 7)
    w = wightman_local(1.0, s, 1e-3)
    assert w.shape == (7,)
    w = wightman_parallel_cross(1.0, 1.0, s, s, 1e-3, "21")
    assert w.shape == (7,)


FAMILY_SCENARIOS = [
    TrajectoryScenario("Parallel", kappa1=1.0, L=0.7),
    TrajectoryScenario("AntiParallel", kappa1=1.2, L=0.4),
    TrajectoryScenario("AntiParallel", kappa1=1.0, L=-0.6),
    TrajectoryScenario("Differing", kappa1=1.0, kappa2=0.5),
    TrajectoryScenario("ThermalInertialPair", kappa1=1.0, L=2.0),
]


@pytest.mark.parametrize("sc", FAMILY_SCENARIOS, ids=lambda s: s.family + str(s.L))
def test_hermiticity_of_correlator_matrix(sc):
    # W^{ij}(t1, t2) = conj(W^{ji}(t2, t1)); eps belongs to the operator ordering
    eps = 1e-3
    taus = (-1.1, -0.3, 0.0, 0.8, 1.9)
    for i in (1, 2):
        for j in (1, 2):
            wij = scenario_correlator(sc, i, j)
            wji = scenario_correlator(sc, j, i)
            for t1 in taus:
                for t2 in taus:
                    a = complex(wij(t1, t2, eps))
                    b = complex(wji(t2, t1, eps))
                    assert a == pytest.approx(b.conjugate(), rel=1e-12)


@pytest.mark.parametrize("sc", FAMILY_SCENARIOS[:4], ids=lambda s: s.family + str(s.L))
def test_specialized_forms_match_generic_interval_expression(sc):
    # the factored family forms are exact rewrites of the event-built Q
    eps = 1e-3
    for i in (1, 2):
        for j in (1, 2):
            w = scenario_correlator(sc, i, j)
            for t1, t2 in ((0.0, 0.0), (0.5, -0.4), (-1.0, 1.3), (2.0, 1.9)):
                a = complex(w(t1, t2, eps))
                b = complex(wightman_schlicht(sc, i, j, t1, t2, eps))
                assert a == pytest.approx(b, rel=1e-9)


def test_schlicht_rejects_thermal_family():
    sc = TrajectoryScenario("ThermalInertialPair", kappa1=1.0, L=1.0)
    with pytest.raises(ValueError):
        wightman_schlicht(sc, 1, 2, 0.0, 0.0, 1e-3)


def test_regulator_cauchy_convergence():
    # pointwise values settle linearly in eps away from the lightcone
    sc = TrajectoryScenario("Parallel", kappa1=1.0, L=0.5)
    w = scenario_correlator(sc, 1, 2)
    vals = [complex(w(0.3, -0.2, e)) for e in (4e-3, 2e-3, 1e-3)]
    d1 = abs(vals[1] - vals[0])
    d2 = abs(vals[2] - vals[1])
    assert d2 / d1 <= 0.6


def test_denominator_factor_roots_match_null_geometry():
    # receiving branch 2 at tau = 0: W^{21}(0, -s) poles solve e^{-ks} = 1 - kL
    k, L = 1.0, 0.5
    sc = TrajectoryScenario("Parallel", kappa1=k, L=L)
    factors = denominator_factors(sc, 2, 1)
    assert len(factors) == 2
    s_star = -math.log(1.0 - k * L)

    roots = []
    for g in factors:
        roots += sign_change_roots(lambda s: g(np.zeros_like(s), -np.asarray(s)),
                                   1e-3, 10.0)
    assert len(roots) == 1
    assert roots[0] == pytest.approx(s_star, rel=1e-9)


def test_denominator_factors_reproduce_correlator():
    # W = -1/(4 pi^2 g1 g2) at eps -> 0, away from the factors' zeros
    cases = [
        (TrajectoryScenario("Parallel", kappa1=1.0, L=0.7), (1, 2)),
        (TrajectoryScenario("Parallel", kappa1=1.0, L=0.7), (2, 1)),
        (TrajectoryScenario("AntiParallel", kappa1=1.1, L=0.4), (1, 2)),
        (TrajectoryScenario("Differing", kappa1=1.0, kappa2=0.5), (1, 2)),
    ]
    for sc, (i, j) in cases:
        gs = denominator_factors(sc, i, j)
        assert len(gs) == 2
        w = scenario_correlator(sc, i, j)
        for t1, t2 in ((0.3, -0.2), (1.0, 0.5)):
            denom = float(gs[0](t1, t2)) * float(gs[1](t1, t2))
            approx = -1.0 / (PI2_4 * denom)
            assert complex(w(t1, t2, 1e-9)) == pytest.approx(approx, rel=1e-6)


def test_diagonal_has_no_denominator_factors():
    sc = TrajectoryScenario("Parallel", kappa1=1.0, L=0.7)
    assert denominator_factors(sc, 1, 1) == []
    assert denominator_factors(sc, 2, 2) == []
