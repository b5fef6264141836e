"""Command-line scenario runner.

Subcommands:
    run <config>      sweep the configured grids, write CSV (and JSON) files
    check <config>    validate a config and echo the resolved settings
    oracle planck     print the single-detector thermal rate reference
    limits <family>   evaluate the family's closed-form limit identities

Outputs are figure-ready CSVs: '#'-prefixed header lines record every
parameter, the normalization conventions, the regulator schedule and a
git-style content hash of the config, so a file is traceable to the exact
run that produced it. Bodies are byte-identical across repeated runs and
across --workers settings: every grid point is evaluated independently and
assembled in grid order by the single writer.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from .closed_form import (DetectorParams, p_antiparallel, p_differing, p_local,
                          p_parallel)
from .config import ScenarioConfig, validate_config
from .errors import (ConfigError, ConvergenceError, IndeterminateRatioError,
                     SingularParameterError, ValidityError)
from .kinematics import TrajectoryScenario
from .response import (excitation_probability_quadrature, kms_check, planck_rate,
                       transition_rate)
from .superposition import (ControlState, compute_wightman_integrals,
                            conditional_density_matrix, phase_envelope,
                            visibility_scan)

_COLUMNS = {
    "probability_map": ("L_over_sigma", "kappa_sigma2_omega", "P_over_lambda2",
                        "valid"),
    "rate_map": ("omega_over_kappa", "kappa_tau", "rate_over_lambda2",
                 "error_over_lambda2", "valid"),
    "kms_report": ("omega_over_kappa", "kappa_tau", "ratio", "expected",
                   "deviation", "satisfied", "valid"),
    "visibility_scan": ("delta_phi", "norm", "envelope", "residual", "valid"),
}

# per-point failures that turn into a NaN row with valid=0
_POINT_ERRORS = (ValidityError, SingularParameterError, ConvergenceError,
                 IndeterminateRatioError, ValueError)


def _config_sha1(text: str) -> str:
    blob = text.encode("utf-8")
    return hashlib.sha1(b"blob %d\x00" % len(blob) + blob).hexdigest()


def _unit_coupling(params: DetectorParams) -> DetectorParams:
    """lambda = 1 copy: P and rate are exactly quadratic in lambda at this
    order, so per-lambda^2 columns are evaluated at unit coupling."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return DetectorParams(omega=params.omega, lambda_coupling=1.0,
                              sigma=params.sigma)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if math.isnan(value):
        return "nan"
    return f"{value:.12g}"


_NAN = math.nan
_INVALID_ROW = {
    "probability_map": lambda a, b: (a, b, _NAN, 0),
    "rate_map": lambda a, b: (a, b, _NAN, _NAN, 0),
    "kms_report": lambda a, b: (a, b, _NAN, _NAN, _NAN, 0, 0),
}
_EVALUATORS = {}


def _eval_point(task):
    """Evaluate one grid point; returns the full CSV row as a tuple.

    Module-level so process pools can pickle it. Per-point validity or
    convergence failures become NaN values with the valid flag down.
    """
    kind, point, payload = task
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            return _EVALUATORS[kind](point, payload)
        except _POINT_ERRORS:
            return _INVALID_ROW[kind](*point)


def _eval_probability(point, payload):
    L_over_sigma, beta = point
    family, params, backend, reg, quad = payload
    sigma, omega = params.sigma, params.omega
    if omega <= 0 or beta <= 0:
        raise ValidityError("probability map needs omega > 0 and beta > 0")
    kappa = beta / (sigma**2 * omega)
    L = L_over_sigma * sigma
    if backend == "closed":
        fn = p_parallel if family == "Parallel" else p_antiparallel
        value = fn(params, kappa, L).probability
    else:
        scenario = TrajectoryScenario(family, kappa1=kappa, L=L)
        value = excitation_probability_quadrature(scenario, params, reg, quad).value
    return (L_over_sigma, beta, value, 1)


def _eval_rate(point, payload):
    omega_over_kappa, kappa_tau = point
    scenario, params, reg, quad = payload
    kappa = scenario.kappa1
    rate_params = DetectorParams(omega=omega_over_kappa * kappa,
                                 lambda_coupling=1.0, sigma=params.sigma)
    res = transition_rate(scenario, rate_params, kappa_tau / kappa, reg, quad)
    return (omega_over_kappa, kappa_tau, res.value, res.error_estimate, 1)


def _eval_kms(point, payload):
    omega_over_kappa, kappa_tau = point
    scenario, params, tol, reg, quad = payload
    kappa = scenario.kappa1
    tau = kappa_tau / kappa

    def rate_at(om):
        p = DetectorParams(omega=om, lambda_coupling=1.0, sigma=params.sigma)
        return transition_rate(scenario, p, tau, reg, quad)

    report = kms_check(rate_at, omega_over_kappa * kappa, kappa, tol)
    return (omega_over_kappa, kappa_tau, report.ratio, report.expected,
            report.deviation, 1 if report.satisfied else 0, 1)


_EVALUATORS.update({"probability_map": _eval_probability,
                    "rate_map": _eval_rate,
                    "kms_report": _eval_kms})


def _grid_tasks(kind, cfg: ScenarioConfig, scenario, payload):
    names = {"probability_map": ("L_over_sigma", "kappa_sigma2_omega"),
             "rate_map": ("omega_over_kappa", "kappa_tau"),
             "kms_report": ("omega_over_kappa", "kappa_tau")}[kind]
    outer, inner = (cfg.grids[n] for n in names)
    return [(kind, (a, b), payload) for a in outer for b in inner]


def _run_tasks(tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [_eval_point(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunk = max(1, len(tasks) // (4 * workers))
        return list(pool.map(_eval_point, tasks, chunksize=chunk))


def _header_lines(kind, cfg: ScenarioConfig, scenario, extra=()):
    sc, par, reg, quad = scenario, cfg.params, cfg.regulator, cfg.quadrature
    eps = ",".join(f"{e:g}" for e in reg.epsilons)
    return [
        f"udwsim output kind={kind}",
        f"config sha1={_config_sha1(cfg.source_text)}",
        f"scenario family={sc.family} kappa1={_fmt(sc.kappa1)} "
        f"kappa2={_fmt(sc.kappa2)} L={_fmt(sc.L)}",
        f"params omega={_fmt(par.omega)} lambda_coupling={_fmt(par.lambda_coupling)} "
        f"sigma={_fmt(par.sigma)}",
        "normalization: probability and rate columns are per lambda^2 "
        "(evaluated at unit coupling; exact at leading order); two-branch "
        "populations carry the control factor lambda^2/N^2 with N=2",
        f"regulator epsilons={eps} extrapolation={reg.extrapolation} "
        "(pointlike limit eps->0 taken after integration)",
        f"quadrature s_max={_fmt(quad.s_max)} abs_tol={_fmt(quad.abs_tol)} "
        f"rel_tol={_fmt(quad.rel_tol)} max_subdivisions={quad.max_subdivisions} "
        f"oscillation_resolution={quad.oscillation_resolution}",
        *extra,
        f"columns: {','.join(_COLUMNS[kind])}",
    ]


def _write_output(path: Path, header, rows, json_mirror: bool, kind):
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {h}" for h in header]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    if json_mirror:
        doc = {"kind": kind, "header": list(header),
               "columns": list(_COLUMNS[kind]),
               "rows": [[None if (isinstance(v, float) and math.isnan(v)) else v
                         for v in row] for row in rows]}
        path.with_suffix(".json").write_text(
            json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def _scenario_variants(out, cfg: ScenarioConfig):
    """(suffix, scenario) pairs: one per swept separation or ratio value."""
    base = cfg.scenario
    if out.kappa_L:
        return [(f"_kL{v:g}", replace(base, L=v / base.kappa1)) for v in out.kappa_L]
    if out.kappa_ratio:
        return [(f"_k2r{v:g}", replace(base, kappa2=v * base.kappa1))
                for v in out.kappa_ratio]
    return [("", base)]


def _suffixed(path: str, suffix: str) -> Path:
    p = Path(path)
    return p if not suffix else p.with_name(p.stem + suffix + p.suffix)


def run_scenario(cfg: ScenarioConfig, out_dir: str = ".", workers: int = 1) -> int:
    """Produce every configured output file; returns a process exit code."""
    base = Path(out_dir)
    if not cfg.outputs:
        print("nothing to do: config declares no outputs")
        return 0
    for out in cfg.outputs:
        for suffix, scenario in _scenario_variants(out, cfg):
            path = base / _suffixed(out.path, suffix)
            unit = _unit_coupling(cfg.params)
            if out.kind == "probability_map":
                payload = (scenario.family, unit, out.backend,
                           cfg.regulator, cfg.quadrature)
                tasks = _grid_tasks(out.kind, cfg, scenario, payload)
                extra = (f"backend={out.backend}",
                         "kappa derived per point: kappa = "
                         "kappa_sigma2_omega / (sigma^2 omega); L = L_over_sigma * sigma")
            elif out.kind == "rate_map":
                payload = (scenario, unit, cfg.regulator, cfg.quadrature)
                tasks = _grid_tasks(out.kind, cfg, scenario, payload)
                extra = ("rate normalization: single-branch stationary limit is "
                         "the thermal value omega/(2 pi (e^{2 pi omega/kappa}-1))",)
            elif out.kind == "kms_report":
                payload = (scenario, unit, out.tolerance, cfg.regulator,
                           cfg.quadrature)
                tasks = _grid_tasks(out.kind, cfg, scenario, payload)
                extra = (f"kms tolerance={_fmt(out.tolerance)} "
                         "(detailed balance rate(omega)/rate(-omega) vs "
                         "e^{-2 pi omega/kappa})",)
            else:
                rows, extra = _visibility_rows(cfg, scenario)
                _write_output(path, _header_lines(out.kind, cfg, scenario, extra),
                              rows, out.json_mirror, out.kind)
                print(f"wrote {path} ({len(rows)} rows)")
                continue
            rows = _run_tasks(tasks, workers)
            _write_output(path, _header_lines(out.kind, cfg, scenario, extra),
                          rows, out.json_mirror, out.kind)
            print(f"wrote {path} ({len(rows)} rows)")
    return 0


def _visibility_rows(cfg: ScenarioConfig, scenario):
    grid = cfg.grids["delta_phi"]
    integrals = compute_wightman_integrals(scenario, cfg.params,
                                           cfg.regulator, cfg.quadrature)
    rows = []
    for dphi in grid:
        control = ControlState(2, (0.0, dphi))
        dm = conditional_density_matrix(integrals, control, cfg.params)
        env = phase_envelope(control)
        rows.append((dphi, dm.norm, env, dm.norm - env, 1))
    summary = visibility_scan(integrals, cfg.params, grid)
    extra = (f"visibility mean={_fmt(summary['mean'])} "
             f"amplitude={_fmt(summary['amplitude'])} "
             f"(first harmonic of the residual after subtracting the "
             f"(1+cos)/2 envelope)",
             f"integral error estimate={_fmt(integrals.error_estimate)}")
    return rows, extra


# ---------------------------------------------------------------------------
# closed-form limit identities (the `limits` subcommand)


def _limit_identities(family: str):
    """(name, lhs, rhs) triples probing the family's algebraic limits at
    reference parameters kappa = 1, sigma = 0.05, beta = 0.2."""
    kappa, sigma, beta = 1.0, 0.05, 0.2
    params = DetectorParams(omega=beta / (kappa * sigma**2),
                            lambda_coupling=0.01, sigma=sigma)
    loc = p_local(params, kappa).probability
    far = 1e6 * sigma
    if family == "SingleAccel":
        xi = (kappa * sigma * params.lambda_coupling) ** 2 * math.exp(
            -(sigma * params.omega) ** 2) / (8.0 * math.pi)
        return params, [("p_local equals xi / sin^2(beta)",
                         loc, xi / math.sin(beta) ** 2)]
    if family == "Parallel":
        return params, [
            ("coincident branches reduce to one detector",
             p_parallel(params, kappa, 0.0).probability, loc),
            ("far separation halves the local probability",
             p_parallel(params, kappa, far).probability, 0.5 * loc),
        ]
    if family == "AntiParallel":
        zeta = (kappa * sigma * params.lambda_coupling) ** 2 * math.exp(
            -(sigma * params.omega) ** 2) / (16.0 * math.pi)
        return params, [
            ("L = 0 value: loc/2 + zeta/(2(1 - cos beta))",
             p_antiparallel(params, kappa, 0.0).probability,
             0.5 * loc + zeta / (2.0 * (1.0 - math.cos(beta)))),
            ("far separation halves the local probability",
             p_antiparallel(params, kappa, far).probability, 0.5 * loc),
        ]
    if family == "Differing":
        kappa2 = 2.0  # second reference acceleration, beta2 = 0.4 < pi
        tiny = 1e-9
        loc2 = p_local(params, kappa2).probability
        lam, omega = params.lambda_coupling, params.omega
        residual = (lam / (2.0 * sigma * omega)) ** 2 * math.exp(
            -(sigma * omega) ** 2) / (8.0 * math.pi)
        return params, [
            ("equal accelerations reduce to one detector",
             p_differing(params, kappa, kappa).probability, loc),
            ("vanishing first acceleration: loc(kappa2)/4 + inertial residue",
             p_differing(params, tiny, kappa2).probability,
             0.25 * loc2 + residual),
        ]
    raise ValueError(f"no closed-form identities for family {family!r}")


def _cmd_limits(args) -> int:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        params, identities = _limit_identities(args.family)
    print(f"closed-form limit identities for {args.family} "
          f"(omega={params.omega:g}, sigma={params.sigma:g}, "
          f"lambda={params.lambda_coupling:g})")
    ok = True
    for name, lhs, rhs in identities:
        rel = abs(lhs - rhs) / abs(rhs) if rhs != 0 else abs(lhs)
        good = rel <= 1e-10
        ok = ok and good
        print(f"  {'PASS' if good else 'FAIL'} {name}: "
              f"lhs={lhs:.12e} rhs={rhs:.12e} rel={rel:.2e}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument parsing


def _load_config(args) -> ScenarioConfig:
    text = Path(args.config).read_text(encoding="utf-8")
    cfg = validate_config(text)
    if getattr(args, "quad_tol", None) is not None:
        cfg = replace(cfg, quadrature=replace(cfg.quadrature, rel_tol=args.quad_tol))
    if getattr(args, "eps_ladder", None):
        eps = tuple(float(v) for v in args.eps_ladder.split(","))
        cfg = replace(cfg, regulator=replace(cfg.regulator, epsilons=eps))
    return cfg


def _print_config_errors(exc: ConfigError) -> int:
    for err in exc.errors:
        print(f"error: {err}", file=sys.stderr)
    return 2


def _cmd_run(args) -> int:
    try:
        cfg = _load_config(args)
    except ConfigError as exc:
        return _print_config_errors(exc)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return run_scenario(cfg, out_dir=args.out_dir, workers=args.workers)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _cmd_check(args) -> int:
    try:
        cfg = _load_config(args)
    except ConfigError as exc:
        return _print_config_errors(exc)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sc, par = cfg.scenario, cfg.params
    print("ok")
    print(f"scenario: family={sc.family} kappa1={sc.kappa1:g} "
          f"kappa2={sc.kappa2:g} L={sc.L:g}")
    print(f"params: omega={par.omega:g} lambda_coupling={par.lambda_coupling:g} "
          f"sigma={par.sigma:g}")
    for name in sorted(cfg.grids):
        vals = cfg.grids[name]
        print(f"grid {name}: {len(vals)} points in "
              f"[{min(vals):g}, {max(vals):g}]")
    print(f"regulator: epsilons={','.join(f'{e:g}' for e in cfg.regulator.epsilons)} "
          f"extrapolation={cfg.regulator.extrapolation}")
    q = cfg.quadrature
    print(f"quadrature: s_max={q.s_max:g} abs_tol={q.abs_tol:g} rel_tol={q.rel_tol:g} "
          f"max_subdivisions={q.max_subdivisions} "
          f"oscillation_resolution={q.oscillation_resolution}")
    if cfg.outputs:
        for out in cfg.outputs:
            detail = f" backend={out.backend}" if out.kind == "probability_map" else ""
            print(f"output: kind={out.kind} path={out.path}{detail}")
    else:
        print("output: none configured")
    return 0


def _cmd_oracle(args) -> int:
    if args.reference != "planck":
        print(f"error: unknown oracle {args.reference!r}", file=sys.stderr)
        return 2
    try:
        value = planck_rate(args.kappa, args.omega)
    except (ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"{value:.17g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="udwsim",
        description="Detector response for superposed uniformly accelerated "
                    "trajectories: parameter sweeps to figure-ready CSV.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("config", help="path to a YAML scenario config")
        p.add_argument("--quad-tol", type=float, default=None,
                       help="override quadrature relative tolerance")
        p.add_argument("--eps-ladder", default=None,
                       help="comma-separated regulator values, e.g. 1e-2,5e-3,2.5e-3")

    p_run = sub.add_parser("run", help="execute a scenario config")
    add_common(p_run)
    p_run.add_argument("--workers", type=int, default=1,
                       help="process-pool size for grid points (default 1)")
    p_run.add_argument("--out-dir", default=".",
                       help="directory output paths are resolved against")
    p_run.set_defaults(handler=_cmd_run)

    p_check = sub.add_parser("check", help="validate a config and echo it")
    add_common(p_check)
    p_check.set_defaults(handler=_cmd_check)

    p_oracle = sub.add_parser("oracle", help="print a reference value")
    p_oracle.add_argument("reference", choices=["planck"],
                          help="which reference to evaluate")
    p_oracle.add_argument("--omega", type=float, required=True,
                          help="detector gap")
    p_oracle.add_argument("--kappa", type=float, required=True,
                          help="proper acceleration")
    p_oracle.set_defaults(handler=_cmd_oracle)

    p_limits = sub.add_parser("limits",
                              help="evaluate closed-form limit identities")
    p_limits.add_argument("family", choices=["SingleAccel", "Parallel",
                                             "AntiParallel", "Differing"])
    p_limits.set_defaults(handler=_cmd_limits)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
