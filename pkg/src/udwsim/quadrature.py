"""Panel quadrature and regulator-extrapolation machinery.

The integrands here share one shape: smooth oscillatory factors times
correlators whose near-singular structure is pinned to known locations (the
coincidence point s = 0 and the real lightcone crossings of cross terms),
with peak width set by the regulator eps. Composite Gauss-Legendre panels on
a mesh that clusters geometrically around those points resolve this to
machine precision; a paired lower-order rule gives a per-panel error
estimate. scipy's QUADPACK wrappers fit badly (no vectorized complex
integrands, no seeded breakpoints), hence the small engine below.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq

_X15, _W15 = leggauss(15)
_X7, _W7 = leggauss(7)

EXTRAPOLATION_MODES = ("richardson_linear", "richardson_quadratic", "none")

# default regulator ladder, in units of 1/kappa
DEFAULT_EPS_LADDER = (1e-2, 5e-3, 2.5e-3)


@dataclass(frozen=True)
class QuadratureConfig:
    """Tunables for the oscillatory integrals.

    s_max is the truncation of semi-infinite rate integrals in absolute time
    units (default 40, i.e. 40/kappa at the natural kappa = 1; callers with
    other scales should use default_quadrature(scenario)).
    """

    s_max: float = 40.0
    abs_tol: float = 1e-11
    rel_tol: float = 1e-4
    max_subdivisions: int = 2
    oscillation_resolution: int = 8

    def __post_init__(self):
        if not (self.s_max > 0):
            raise ValueError("s_max must be positive")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.oscillation_resolution < 8:
            raise ValueError("oscillation_resolution must be >= 8")
        if self.max_subdivisions < 0:
            raise ValueError("max_subdivisions must be >= 0")


@dataclass(frozen=True)
class RegulatorSchedule:
    """Decreasing regulator ladder plus the extrapolation policy."""

    epsilons: tuple
    extrapolation: str = "richardson_linear"

    def __post_init__(self):
        object.__setattr__(self, "epsilons", tuple(float(e) for e in self.epsilons))
        if self.extrapolation not in EXTRAPOLATION_MODES:
            raise ValueError(f"unknown extrapolation mode {self.extrapolation!r}")
        eps = self.epsilons
        if any(e <= 0 for e in eps):
            raise ValueError("all epsilons must be positive")
        if self.extrapolation != "none":
            if len(eps) < 2:
                raise ValueError("extrapolating schedules need at least 2 epsilons")
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise ValueError("epsilons must be strictly decreasing")


def default_schedule(kappa_scale: float = 1.0, extrapolation: str = "richardson_linear") -> RegulatorSchedule:
    return RegulatorSchedule(tuple(e / kappa_scale for e in DEFAULT_EPS_LADDER), extrapolation)


def epsilon_extrapolate(estimates, mode: str = "richardson_linear"):
    """Extrapolate (eps, value) pairs to eps -> 0.

    Returns (limit, error_estimate) with error_estimate = |difference of the
    last two extrapolants|. Values may be complex. Non-monotone convergence
    across the last three points triggers a RuntimeWarning; the result is
    still returned.
    """
    if mode not in EXTRAPOLATION_MODES:
        raise ValueError(f"unknown extrapolation mode {mode!r}")
    pts = [(float(e), v) for e, v in estimates]
    if not pts:
        raise ValueError("no estimates to extrapolate")
    eps = [e for e, _ in pts]
    vals = [v for _, v in pts]
    if any(e <= 0 for e in eps):
        raise ValueError("epsilons must be positive")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("epsilons must be strictly decreasing")
    if mode != "none" and len(pts) < 2:
        raise ValueError("extrapolation needs at least 2 points")

    if len(vals) >= 3:
        d1 = vals[-2] - vals[-3]
        d2 = vals[-1] - vals[-2]
        if isinstance(d1, complex) or isinstance(d2, complex):
            non_monotone = abs(d2) > abs(d1) and abs(d1) > 0
        else:
            non_monotone = d1 * d2 < 0
        if non_monotone:
            warnings.warn(
                "regulator ladder values are not converging monotonically "
                "across the last three points; extrapolant may be unreliable",
                RuntimeWarning,
                stacklevel=2,
            )

    if mode == "none":
        limit = vals[-1]
        err = abs(vals[-1] - vals[-2]) if len(vals) >= 2 else math.inf
        return limit, err

    # successive pairwise linear extrapolants to eps = 0
    lin = [
        (vals[i + 1] * eps[i] - vals[i] * eps[i + 1]) / (eps[i] - eps[i + 1])
        for i in range(len(vals) - 1)
    ]
    if mode == "richardson_linear":
        limit = lin[-1]
        prev = lin[-2] if len(lin) >= 2 else vals[-1]
        return limit, abs(limit - prev)

    # richardson_quadratic: degree-2 polynomial through the last three points
    if len(pts) < 3:
        limit = lin[-1]
        return limit, abs(limit - vals[-1])
    e0, e1, e2 = eps[-3:]
    v0, v1, v2 = vals[-3:]
    # Lagrange basis evaluated at eps = 0
    l0 = (e1 * e2) / ((e0 - e1) * (e0 - e2))
    l1 = (e0 * e2) / ((e1 - e0) * (e1 - e2))
    l2 = (e0 * e1) / ((e2 - e0) * (e2 - e1))
    limit = v0 * l0 + v1 * l1 + v2 * l2
    return limit, abs(limit - lin[-1])


def cluster_mesh(a: float, b: float, clusters, scale: float, cap: float) -> np.ndarray:
    """Panel edges on [a, b]: geometric refinement (starting width `scale`,
    doubling) around each cluster point, width <= cap everywhere."""
    if not b > a:
        raise ValueError("empty interval")
    cap = min(cap, b - a)
    edges = {a, b}
    for c in clusters:
        if not a <= c <= b:
            continue
        edges.add(c)
        for sgn in (-1.0, 1.0):
            x, w = c, scale
            while True:
                x = x + sgn * w
                if x <= a or x >= b or w >= cap:
                    break
                edges.add(x)
                w *= 2.0
    e = sorted(edges)
    out = [e[0]]
    for x in e[1:]:
        while x - out[-1] > cap * 1.0001:
            out.append(out[-1] + cap)
        out.append(x)
    return np.asarray(out)


def refine_mesh(edges: np.ndarray, rounds: int = 1) -> np.ndarray:
    for _ in range(rounds):
        edges = np.sort(np.concatenate([edges, 0.5 * (edges[:-1] + edges[1:])]))
    return edges


def panel_integrate(f, edges: np.ndarray):
    """Composite GL-15 integral of a vectorized (complex) integrand over the
    panel mesh, with a GL-7 comparison error estimate. Panel contributions
    are accumulated with compensated summation."""
    a = edges[:-1]
    b = edges[1:]
    h = 0.5 * (b - a)
    m = 0.5 * (a + b)
    x15 = m[:, None] + h[:, None] * _X15[None, :]
    x7 = m[:, None] + h[:, None] * _X7[None, :]
    f15 = np.asarray(f(x15.ravel())).reshape(x15.shape)
    f7 = np.asarray(f(x7.ravel())).reshape(x7.shape)
    p15 = (f15 * _W15[None, :]).sum(axis=1) * h
    p7 = (f7 * _W7[None, :]).sum(axis=1) * h
    if np.iscomplexobj(p15):
        val = complex(math.fsum(p15.real), math.fsum(p15.imag))
    else:
        val = math.fsum(p15)
    err = math.fsum(np.abs(p15 - p7))
    return val, err


def sign_change_roots(g, lo: float, hi: float, n_scan: int = 257) -> list:
    """Real roots of a vectorized function g on [lo, hi] by sign-change scan
    plus brentq polish. Intended for the (at most one or two) lightcone
    crossings of cross-correlator denominator factors along a 1-D cut."""
    grid = np.linspace(lo, hi, n_scan)
    vals = np.asarray(g(grid), dtype=float)
    roots = []
    sgn = np.sign(vals)
    for k in range(n_scan - 1):
        if sgn[k] == 0.0:
            roots.append(float(grid[k]))
        elif sgn[k] * sgn[k + 1] < 0:
            roots.append(brentq(lambda x: float(g(np.asarray([x]))[0]),
                                grid[k], grid[k + 1], xtol=1e-13, rtol=1e-14))
    if sgn[-1] == 0.0:
        roots.append(float(grid[-1]))
    return roots
