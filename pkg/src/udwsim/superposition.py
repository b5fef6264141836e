"""Conditional detector state after measuring the trajectory control.

A detector travelling in an N-branch superposition of worldlines, with the
control measured in the state N^{-1/2} sum_i e^{-i phi_i}|c_i>, ends up (to
second order in the coupling) in a diagonal density matrix whose unnormalized
populations are built from two kinds of windowed Wightman integrals:

    full-plane   I_ij = iint d tau' d tau'' eta eta e^{-i omega (tau'-tau'')}
                        W^{ij}(tau', tau'')
    time-ordered T_i  = same integrand, restricted to tau'' <= tau' (i = j)

as

    p_excited = (lambda^2/N^2) sum_ij e^{i(phi_i - phi_j)} I_ji
    p_ground  = (1/N^2) sum_ij e^{i(phi_i - phi_j)} [1 - lambda^2 (T_i + conj T_j)]

The norm p_ground + p_excited is the probability of finding the control in
the measured superposition; dividing by it conditions the detector state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .closed_form import DetectorParams
from .kinematics import TrajectoryScenario
from .quadrature import epsilon_extrapolate
from .response import _defaults, halfplane_integrals_at_eps


@dataclass(frozen=True)
class ControlState:
    """N-branch control with measurement phases; the overall phase is gauge
    and is canonicalized to phases[0] = 0."""

    branch_count: int
    phases: tuple = ()

    def __post_init__(self):
        if self.branch_count < 1:
            raise ValueError("branch_count must be >= 1")
        phases = tuple(float(p) for p in self.phases)
        if not phases:
            phases = (0.0,) * self.branch_count
        if len(phases) != self.branch_count:
            raise ValueError("need one phase per branch")
        if any(not math.isfinite(p) for p in phases):
            raise ValueError("phases must be finite")
        phases = tuple(p - phases[0] for p in phases)
        object.__setattr__(self, "phases", phases)


@dataclass(frozen=True)
class WightmanIntegrals:
    """Extrapolated windowed integrals for one scenario and detector.

    full_grid[(i, j)] holds I_ij (conjugate-symmetric across the grid);
    time_ordered[i] holds T_i, whose imaginary part is meaningful only
    through branch differences (see compute_wightman_integrals).
    error_estimate bounds the regulator extrapolation of every such
    finite combination.
    """

    branch_count: int
    full_grid: dict
    time_ordered: dict
    error_estimate: float = 0.0

    def __post_init__(self):
        n = self.branch_count
        pairs = {(i, j) for i in range(1, n + 1) for j in range(1, n + 1)}
        if set(self.full_grid) != pairs or set(self.time_ordered) != set(range(1, n + 1)):
            raise ValueError("integral maps do not cover the branch grid")


@dataclass(frozen=True)
class DetectorDensityMatrix:
    """Diagonal (at this order) conditional detector state, unnormalized
    populations plus their sum and the conditioned excitation probability."""

    p_ground_unnormalized: float
    p_excited_unnormalized: float
    norm: float = field(init=False)
    p_excited_conditional: float = field(init=False)

    def __post_init__(self):
        norm = self.p_ground_unnormalized + self.p_excited_unnormalized
        object.__setattr__(self, "norm", norm)
        cond = self.p_excited_unnormalized / norm if norm > 0 else math.nan
        object.__setattr__(self, "p_excited_conditional", cond)


def compute_wightman_integrals(scenario: TrajectoryScenario, params: DetectorParams,
                               reg_schedule=None, quad=None) -> WightmanIntegrals:
    """Evaluate all I_ij and T_i by the response-layer quadrature engine.

    Only regulator-finite combinations are extrapolated to eps -> 0: the
    hermitian full-plane entries, the real parts of the time-ordered
    diagonal, and the branch differences of its imaginary parts. Im T_i
    carries a universal (branch-independent) coincidence divergence ~ 1/eps;
    it enters the density matrix only through T_i + conj(T_j), where that
    common piece cancels, so T_i is stored with the offset of the smallest
    regulator value and only differences should be trusted.
    """
    reg_schedule, quad = _defaults(scenario, reg_schedule, quad)
    n = scenario.branch_count
    per_eps = []
    for eps in reg_schedule.epsilons:
        blocks = halfplane_integrals_at_eps(scenario, params, eps, quad)
        per_eps.append((eps, blocks))
    full = {}
    worst = 0.0
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            # full-plane integral from the time-ordered half by hermiticity
            sym_limit, sym_err = epsilon_extrapolate(
                [(eps, blocks[(i, j)][0] + np.conj(blocks[(j, i)][0]))
                 for eps, blocks in per_eps],
                reg_schedule.extrapolation)
            worst = max(worst, sym_err)
            full[(i, j)] = complex(sym_limit)
    ordered = {}
    im_offset = per_eps[-1][1][(1, 1)][0].imag
    for i in range(1, n + 1):
        re_limit, re_err = epsilon_extrapolate(
            [(eps, blocks[(i, i)][0].real) for eps, blocks in per_eps],
            reg_schedule.extrapolation)
        im_diff, im_err = epsilon_extrapolate(
            [(eps, blocks[(i, i)][0].imag - blocks[(1, 1)][0].imag)
             for eps, blocks in per_eps],
            reg_schedule.extrapolation) if i > 1 else (0.0, 0.0)
        worst = max(worst, re_err, im_err)
        ordered[i] = complex(re_limit, im_offset + im_diff)
    return WightmanIntegrals(branch_count=n, full_grid=full, time_ordered=ordered,
                             error_estimate=float(worst))


def conditional_density_matrix(integrals: WightmanIntegrals, control: ControlState,
                               params: DetectorParams) -> DetectorDensityMatrix:
    """Assemble the unnormalized conditional populations for the given
    measurement phases."""
    n = control.branch_count
    if integrals.branch_count != n:
        raise ValueError(
            f"integrals cover {integrals.branch_count} branches, control has {n}")
    lam2 = params.lambda_coupling**2
    phases = control.phases
    excited = 0.0 + 0.0j
    ground = 0.0 + 0.0j
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            w = np.exp(1j * (phases[i - 1] - phases[j - 1]))
            excited += w * integrals.full_grid[(j, i)]
            ti = integrals.time_ordered[i]
            tj = integrals.time_ordered[j]
            ground += w * (1.0 - lam2 * (ti + np.conj(tj)))
    p_exc = lam2 / n**2 * excited.real
    p_gnd = ground.real / n**2
    return DetectorDensityMatrix(p_ground_unnormalized=p_gnd,
                                 p_excited_unnormalized=p_exc)


def conditional_norm(dm: DetectorDensityMatrix) -> float:
    """Probability of finding the control in the measured superposition."""
    return dm.norm


def phase_envelope(control: ControlState) -> float:
    """Zeroth-order (field-free) norm: N^{-2} |sum_i e^{i phi_i}|^2."""
    s = sum(np.exp(1j * p) for p in control.phases)
    return float(abs(s) ** 2) / control.branch_count**2


def visibility_scan(integrals: WightmanIntegrals, params: DetectorParams,
                    phase_grid) -> dict:
    """Scan the conditional norm over relative phase dphi for N = 2.

    The norm's O(1) dependence is the envelope (1 + cos dphi)/2; the field
    terms ride on top at order lambda^2. Returns the mean of the norm over
    the grid (about 1/2 on a full period) and the first-harmonic amplitude of
    the residual after subtracting the envelope, which is the lambda^2-order
    visibility degradation.
    """
    if integrals.branch_count != 2:
        raise ValueError("visibility scan is defined for N = 2")
    dphis = np.asarray(list(phase_grid), dtype=float)
    if dphis.size < 3:
        raise ValueError("need at least 3 phases to fit a first harmonic")
    norms = np.empty(dphis.size)
    resid = np.empty(dphis.size)
    for k, dphi in enumerate(dphis):
        control = ControlState(2, (0.0, float(dphi)))
        dm = conditional_density_matrix(integrals, control, params)
        norms[k] = dm.norm
        resid[k] = dm.norm - phase_envelope(control)
    # least-squares first-harmonic fit of the residual
    design = np.column_stack([np.ones_like(dphis), np.cos(dphis), np.sin(dphis)])
    coef, *_ = np.linalg.lstsq(design, resid, rcond=None)
    amplitude = float(math.hypot(coef[1], coef[2]))
    return {"mean": float(norms.mean()), "amplitude": amplitude}
