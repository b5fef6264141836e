"""Saddle-point excitation probabilities for Gaussian switching.

Valid for switching widths short against the acceleration timescale
(kappa*sigma << 1); the numeric quadrature in response.py is the fallback
everywhere else. All probabilities carry the lambda^2 prefactor.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import SingularParameterError, ValidityError
from .validity import (ADVISORY_CONSTRAINTS, beta_parameter,
                       check_antiparallel_pole, check_beta_bound)

# lambda_coupling beyond this makes O(lambda^4) corrections non-negligible
_LAMBDA_WARN = 0.1
# beta -> pi blowup warning threshold
_BETA_WARN = 3.0
# below this kappa*sigma the kappa^2/sin^2(beta) term switches to its series
_KAPPA_SIGMA_SERIES = 1e-4


@dataclass(frozen=True)
class DetectorParams:
    """Detector gap, coupling, and Gaussian switching width."""

    omega: float
    lambda_coupling: float
    sigma: float

    def __post_init__(self):
        if not math.isfinite(self.omega):
            raise ValueError("omega must be finite")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError("sigma must be positive and finite")
        # lambda = 0 is the free-field limit, used by several identities
        if not (self.lambda_coupling >= 0 and math.isfinite(self.lambda_coupling)):
            raise ValueError("lambda_coupling must be non-negative and finite")
        if self.lambda_coupling > _LAMBDA_WARN:
            warnings.warn(
                f"lambda_coupling = {self.lambda_coupling:g} > {_LAMBDA_WARN}: "
                "leading-order perturbation theory is questionable",
                UserWarning,
                stacklevel=3,
            )


@dataclass(frozen=True)
class ClosedFormResult:
    probability: float
    residues_omitted: bool
    beta_values: tuple

    def __post_init__(self):
        if self.probability < 0:
            raise ValueError("closed-form probability must be non-negative")


def xi_prefactor(params: DetectorParams, kappa: float) -> float:
    """Gaussian-peak prefactor xi = (kappa sigma lambda)^2 e^{-sigma^2 omega^2} / 8 pi."""
    k, s, w, lam = kappa, params.sigma, params.omega, params.lambda_coupling
    return (k * s * lam) ** 2 * math.exp(-(s * w) ** 2) / (8.0 * math.pi)


def zeta_prefactor(params: DetectorParams, kappa: float) -> float:
    """Interference prefactor zeta = xi / 2."""
    return 0.5 * xi_prefactor(params, kappa)


def _require_valid(report):
    """Refuse on hard validity violations; advisory flags only warn."""
    blocking = [v for v in report.violated_constraints
                if v["name"] not in ADVISORY_CONSTRAINTS]
    if blocking:
        names = ", ".join(v["name"] for v in blocking)
        raise ValidityError(f"closed form outside its validity regime: {names}", report)
    for v in report.violated_constraints:
        warnings.warn(v["detail"], UserWarning, stacklevel=3)


def _checked_beta(params: DetectorParams, kappa: float) -> float:
    if not (kappa > 0 and math.isfinite(kappa)):
        raise ValueError(f"kappa must be positive and finite, got {kappa!r}")
    _require_valid(check_beta_bound(params, kappa))
    beta = beta_parameter(params, kappa)
    if math.sin(beta) == 0.0:
        raise SingularParameterError(f"sin(beta) = 0 at beta = {beta:g}")
    if beta > _BETA_WARN:
        warnings.warn(
            f"beta = {beta:g} approaches pi; closed form blows up as 1/sin^2(beta)",
            UserWarning,
            stacklevel=3,
        )
    return beta


def p_local(params: DetectorParams, kappa: float) -> ClosedFormResult:
    """Single uniformly accelerated detector:
    (kappa sigma lambda / 2)^2 e^{-sigma^2 omega^2} / (2 pi sin^2 beta)."""
    beta = _checked_beta(params, kappa)
    prob = xi_prefactor(params, kappa) / math.sin(beta) ** 2
    return ClosedFormResult(prob, residues_omitted=False, beta_values=(beta,))


def p_parallel(params: DetectorParams, kappa: float, L: float) -> ClosedFormResult:
    """Superposition of two parallel-accelerated branches at separation L."""
    beta = _checked_beta(params, kappa)
    loc = p_local(params, kappa).probability
    interference = zeta_prefactor(params, kappa) / (
        (kappa * L / 2.0) ** 2 + math.sin(beta) ** 2
    )
    return ClosedFormResult(0.5 * loc + interference,
                            residues_omitted=False, beta_values=(beta,))


def p_antiparallel(params: DetectorParams, kappa: float, L: float) -> ClosedFormResult:
    """Superposition of two antiparallel-accelerated branches; L may be negative
    and the result is asymmetric under L -> -L."""
    beta = _checked_beta(params, kappa)
    _require_valid(check_antiparallel_pole(params, kappa, L))
    loc = p_local(params, kappa).probability
    denom = math.sin(beta) ** 2 + (math.cos(beta) + kappa * L / 2.0 - 1.0) ** 2
    if denom == 0.0:
        raise SingularParameterError("antiparallel interference denominator vanished")
    interference = zeta_prefactor(params, kappa) / denom
    return ClosedFormResult(0.5 * loc + interference,
                            residues_omitted=False, beta_values=(beta,))


def _inverse_sin_sq_term(kappa: float, params: DetectorParams) -> float:
    """kappa^2 / sin^2(kappa sigma^2 omega), by series for tiny kappa*sigma."""
    sigma, omega = params.sigma, params.omega
    beta = beta_parameter(params, kappa)
    if kappa * sigma >= _KAPPA_SIGMA_SERIES:
        return kappa**2 / math.sin(beta) ** 2
    # kappa cancels: kappa^2/sin^2(beta) = (beta/sin beta)^2 / (sigma^2 omega)^2
    return (1.0 + beta**2 / 3.0) / (sigma**2 * omega) ** 2


def p_differing(params: DetectorParams, kappa1: float, kappa2: float) -> ClosedFormResult:
    """Superposition of two branches with differing accelerations sharing a
    horizon. Residue contributions of the saddle analysis are omitted
    (residues_omitted = True); they vanish identically at kappa1 = kappa2."""
    if not (kappa1 > 0 and kappa2 > 0):
        raise ValueError("both accelerations must be positive")
    b1 = _checked_beta(params, kappa1)
    b2 = _checked_beta(params, kappa2)
    sigma, lam = params.sigma, params.lambda_coupling
    bracket = _inverse_sin_sq_term(kappa1, params) + _inverse_sin_sq_term(kappa2, params)
    # interference denominator grouped to avoid cancellation at kappa1 ~ kappa2
    denom = (kappa1 - kappa2) ** 2 + 2.0 * kappa1 * kappa2 * (1.0 - math.cos(b1 + b2))
    if denom == 0.0:
        raise SingularParameterError("differing-acceleration interference denominator vanished")
    bracket += 8.0 * kappa1**2 * kappa2**2 / denom
    prob = (sigma * lam / 2.0) ** 2 * math.exp(-(sigma * params.omega) ** 2) / (8.0 * math.pi) * bracket
    return ClosedFormResult(prob, residues_omitted=True, beta_values=(b1, b2))
