"""Command-line front end.

Subcommands:

* ``curvature-check`` - sampled R >= k certification on a model space;
* ``su21`` - the full homogeneous-example suite at one (t, k);
* ``scan`` - feasibility grid over (t, k), CSV output;
* ``geodesic {warped-lightlike,warped-timelike,euler-arnold,riccati}`` -
  trajectory runs with closed-form comparison metrics.

Exit codes: 0 pass, 1 usage or domain error, 2 verification failure.
Reports are JSON with a fixed key order (or flat key,value CSV); grids and
trajectories are CSV, trajectories preceded by a single ``#``-prefixed JSON
header line.  A run is fully determined by its flags (including --seed):
repeated runs write byte-identical files regardless of --workers.

Space grammar for --space:

    hyperbolic(2) | sphere(2) | flat_torus(2) | euclidean(3) | minkowski(1,2)
    product:<base>*<fiber>
    warped:<base>*<fiber>:alpha=<busemann | sqrtk*busemann | const>

The default worker count comes from the SEMIGEO_WORKERS environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import su21 as alg
from .charts import CurvatureReport, check_r_ge_k
from .errors import SemigeoError, UnsupportedSpaceError
from .geodesics import (
    IntegratorConfig,
    ODESystem,
    Trajectory,
    breakdown_run,
    euler_arnold_integrate,
    incompleteness_space,
    integrate,
    riccati_experiment,
)
from .spaces import build_space, parse_space


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad usage; the documented contract
    # reserves 2 for verification failures, so route usage errors to 1.
    def error(self, message):
        raise _UsageError(message)


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("SEMIGEO_WORKERS", "1")))
    except ValueError:
        return 1


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _render_report(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        lines = ["key,value"]

        def walk(prefix: str, obj) -> None:
            if isinstance(obj, dict):
                for key, val in obj.items():
                    walk(f"{prefix}{key}." if isinstance(val, dict) else f"{prefix}{key}", val)
            else:
                plain = isinstance(obj, (int, float, str)) and not isinstance(obj, bool)
                lines.append(f"{prefix},{obj if plain else json.dumps(obj)}")

        walk("", payload)
        return "\n".join(lines) + "\n"
    raise _UsageError(f"unknown format {fmt!r}")


def _trajectory_csv(traj: Trajectory, header: dict) -> str:
    lines = ["# " + json.dumps(header, separators=(",", ":"))]
    ncols = traj.states.shape[1]
    lines.append("t," + ",".join(f"y{i}" for i in range(ncols)))
    for t, row in zip(traj.times, traj.states):
        lines.append(repr(float(t)) + "," + ",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def _witness_payload(report: CurvatureReport) -> dict | None:
    if report.witness is None:
        return None
    w = report.witness
    return {
        "base_point": [float(v) for v in w.base_point],
        "u": [float(v) for v in w.u],
        "v": [float(v) for v in w.v],
    }


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise _UsageError(f"expected a rational number, got {text!r}") from exc


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _validate_common(args) -> None:
    if args.seed < 0:
        raise _UsageError("--seed must be a nonnegative integer")
    if getattr(args, "tol", 0.0) < 0:
        raise _UsageError("--tol must be nonnegative")
    if getattr(args, "workers", 1) < 1:
        raise _UsageError("--workers must be at least 1")


def cmd_curvature_check(args) -> int:
    _validate_common(args)
    if args.samples < 1:
        raise _UsageError("--samples must be at least 1")
    try:
        space = parse_space(args.space, k=args.k)
        chart = build_space(space)
    except UnsupportedSpaceError as exc:
        raise _UsageError(str(exc)) from exc
    report = check_r_ge_k(
        chart,
        args.k,
        args.samples,
        tol=args.tol,
        seed=args.seed,
        workers=args.workers,
    )
    payload = {
        "command": "curvature-check",
        "space": args.space,
        "k": float(args.k),
        "requested_samples": int(args.samples),
        "evaluated_pairs": int(report.samples),
        "tol": float(report.tol),
        "seed": int(report.seed),
        "min_margin": float(report.min_margin),
        "passed": bool(report.passed),
        "witness": _witness_payload(report),
    }
    _emit(_render_report(payload, args.format), args.out)
    return 0 if report.passed else 2


def _exact_pairs(count: int, seed: int):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        coords = []
        for _i in range(16):
            num = int(rng.integers(-9, 10))
            den = int(rng.integers(1, 10))
            coords.append(Fraction(num, den))
        coords[0] = Fraction(0)
        coords[8] = Fraction(0)
        yield (
            alg.AlgebraElement(tuple(coords[:8])),
            alg.AlgebraElement(tuple(coords[8:])),
        )


def _su21_exact_checks(n_pairs: int, seed: int) -> dict:
    allowed = {
        (0, 0): set(),
        (0, 1): {1, 2, 3},
        (0, 2): {4, 5, 6, 7},
        (1, 1): {1, 2, 3},
        (1, 2): {4, 5, 6, 7},
        (2, 2): {0, 1, 2, 3},
    }
    containment = True
    for i in range(8):
        for j in range(i, 8):
            br = alg.bracket(alg.basis_element(i), alg.basis_element(j))
            key = tuple(sorted((alg.block_of(i), alg.block_of(j))))
            ok = all(c == 0 or idx in allowed[key] for idx, c in enumerate(br.coords))
            containment = containment and ok

    jacobi = True
    for i in range(8):
        for j in range(8):
            for k in range(8):
                x, y, z = (alg.basis_element(w) for w in (i, j, k))
                total = (
                    alg.bracket(x, alg.bracket(y, z))
                    + alg.bracket(y, alg.bracket(z, x))
                    + alg.bracket(z, alg.bracket(x, y))
                )
                jacobi = jacobi and total.is_zero()

    ad_invariance = True
    for i in range(8):
        for j in range(8):
            for k in range(8):
                z, x, y = (alg.basis_element(w) for w in (i, j, k))
                val = alg.form_B(alg.bracket(z, x), y) + alg.form_B(x, alg.bracket(z, y))
                ad_invariance = ad_invariance and val == 0

    det_identity = all(
        alg.det_identity_check(x, y) == 0 for x, y in _exact_pairs(n_pairs, seed)
    )
    form_equivalence = all(
        alg.curvature_quartic(x, y, alg.ModelParams(Fraction(-1, 2), Fraction(1, 10)))
        == alg.curvature_quartic_first_form(
            x, y, alg.ModelParams(Fraction(-1, 2), Fraction(1, 10))
        )
        for x, y in _exact_pairs(min(n_pairs, 100), seed + 1)
    )
    return {
        "bracket_containments": containment,
        "jacobi_identity": jacobi,
        "ad_invariance": ad_invariance,
        "determinant_identity": det_identity,
        "curvature_form_equivalence": form_equivalence,
    }


def cmd_su21(args) -> int:
    _validate_common(args)
    if args.samples < 1:
        raise _UsageError("--samples must be at least 1")
    params = alg.ModelParams(args.t, args.k)  # DomainError -> exit 1
    exact = _su21_exact_checks(min(args.samples, 1000) or 100, args.seed)
    res = alg.feasible(params)
    margins, scales = alg.sample_margins(float(args.t), float(args.k), args.samples, args.seed)
    margin_ok = bool(np.all(margins >= -args.tol * scales))
    interval = alg.feasible_k_interval(float(args.t))
    payload = {
        "command": "su21",
        "t": float(args.t),
        "k": float(args.k),
        "samples": int(args.samples),
        "seed": int(args.seed),
        "tol": float(args.tol),
        "exact_checks": exact,
        "feasibility": {
            "ineq1": res.ineq1,
            "ineq2": res.ineq2,
            "ineq3": res.ineq3,
            "ineq4": res.ineq4,
            "overall": res.overall,
        },
        "eta": alg.eta(float(args.t)),
        "feasible_k_interval": None if interval is None else list(interval),
        "sampled_min_margin": float(margins.min()),
        "sampled_margin_passed": margin_ok,
    }
    _emit(_render_report(payload, args.format), args.out)
    passed = all(exact.values()) and res.overall and margin_ok
    return 0 if passed else 2


def _grid(lo: Fraction, hi: Fraction, step: Fraction) -> list[Fraction]:
    if step <= 0:
        raise _UsageError("grid step must be positive")
    values = []
    v = lo
    while v <= hi:
        values.append(v)
        v += step
    return values


def cmd_scan(args) -> int:
    _validate_common(args)
    if args.samples < 0:
        raise _UsageError("--samples must be nonnegative")
    t_values = _grid(args.t_min, args.t_max, args.t_step)
    k_values = _grid(args.k_min, args.k_max, args.k_step)
    t_values = [t for t in t_values if t > -1]
    if not t_values or not k_values:
        raise _UsageError("empty scan grid")
    grid = alg.scan_region(
        t_values, k_values, sample_count=args.samples, seed=args.seed, workers=args.workers
    )
    _emit(grid.to_csv(), args.out)
    feas_t = grid.feasible_t_values()
    if feas_t:
        print(
            f"feasible cells at {len(feas_t)} t-values in "
            f"[{feas_t[0]!r}, {feas_t[-1]!r}]",
            file=sys.stderr if args.out is None else sys.stdout,
        )
    else:
        print("no feasible cells", file=sys.stderr if args.out is None else sys.stdout)
    return 0


def _geo_config(args) -> IntegratorConfig:
    return IntegratorConfig(rtol=args.rtol, atol=args.atol)


def cmd_geodesic(args) -> int:
    _validate_common(args)
    if args.mode in ("warped-lightlike", "warped-timelike"):
        kind = args.mode.split("-", 1)[1]
        default_c1 = 1.0 if kind == "lightlike" else 0.5
        c1 = default_c1 if args.c1 is None else args.c1
        spec = incompleteness_space(args.l, args.m, args.k)
        run = breakdown_run(spec, kind, args.k, c1, args.c2, _geo_config(args))
        header = {
            "command": f"geodesic {args.mode}",
            "l": args.l,
            "m": args.m,
            "k": float(args.k),
            "c1": run.c1,
            "c2": run.c2,
            "rtol": args.rtol,
            "atol": args.atol,
            "predicted_breakdown": run.predicted_breakdown,
            "observed_breakdown": run.observed_breakdown,
            "relative_error": run.relative_error,
            "status": run.status_kind,
        }
        _emit(_trajectory_csv(run.trajectory, header), args.out)
        ok = run.relative_error is not None and run.relative_error <= 1e-2
        return 0 if ok else 2

    if args.mode == "euler-arnold":
        params = alg.ModelParams(args.t, args.k if args.k is not None else Fraction(1, 10))
        gamma0 = (
            alg.parse_element(args.gamma0)
            if args.gamma0
            else alg.basis_element("e2") + alg.basis_element("f1")
        )
        if gamma0.coords[0] != 0:
            raise _UsageError("gamma0 must have zero e1 coordinate")
        v1 = alg.project(gamma0, 1)
        v2 = alg.project(gamma0, 2)
        traj, rep = euler_arnold_integrate(v1, v2, params, args.u_max, _geo_config(args))
        header = {
            "command": "geodesic euler-arnold",
            "t": float(args.t),
            "u_max": float(args.u_max),
            "gamma0": alg.serialize_element(gamma0),
            "rtol": args.rtol,
            "atol": args.atol,
            "gamma1_drift": rep.gamma1_drift,
            "bnorm_drift": rep.bnorm_drift,
            "closed_form_max_dev": rep.closed_form_max_dev,
            "status": rep.status_kind,
        }
        _emit(_trajectory_csv(traj, header), args.out)
        ok = rep.status_kind == "completed" and rep.gamma1_drift <= 1e-8
        return 0 if ok else 2

    if args.mode == "riccati":
        report = riccati_experiment(args.k, [args.h0], args.t_max)
        run = report.runs[0]
        # Re-run forward to emit the trajectory itself.
        system = ODESystem(1, lambda t, y: np.array([args.k - y[0] * y[0]]), "h' = k - h^2")
        cfg = IntegratorConfig(blowup_threshold=1e8)
        traj = integrate(system, [args.h0], (0.0, args.t_max), cfg)
        header = {
            "command": "geodesic riccati",
            "k": float(args.k),
            "h0": run.h0,
            "t_max": float(args.t_max),
            "rtol": cfg.rtol,
            "atol": cfg.atol,
            "sup_abs_forward": run.sup_abs_forward,
            "sup_abs_backward": run.sup_abs_backward,
            "forward_status": run.forward_status,
            "backward_status": run.backward_status,
            "bounded": run.bounded,
            "expectation_met": run.expectation_met,
        }
        _emit(_trajectory_csv(traj, header), args.out)
        return 0 if run.expectation_met else 2

    raise _UsageError(f"unknown geodesic mode {args.mode!r}")


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="semigeo", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_workers=True):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if with_workers:
            p.add_argument("--workers", type=int, default=_default_workers())

    p = sub.add_parser("curvature-check", help="sampled R >= k certification")
    p.add_argument("--space", required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--tol", type=float, default=1e-9)
    common(p)
    p.set_defaults(func=cmd_curvature_check)

    p = sub.add_parser("su21", help="homogeneous-example suite at one (t, k)")
    p.add_argument("--t", type=_frac, required=True)
    p.add_argument("--k", type=_frac, required=True)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--tol", type=float, default=1e-9)
    common(p, with_workers=False)
    p.set_defaults(func=cmd_su21)

    p = sub.add_parser("scan", help="feasibility grid over (t, k)")
    p.add_argument("--t-min", type=_frac, default=Fraction("-0.99"))
    p.add_argument("--t-max", type=_frac, default=Fraction("-0.10"))
    p.add_argument("--t-step", type=_frac, default=Fraction("0.01"))
    p.add_argument("--k-min", type=_frac, default=Fraction("0.01"))
    p.add_argument("--k-max", type=_frac, default=Fraction("0.50"))
    p.add_argument("--k-step", type=_frac, default=Fraction("0.01"))
    p.add_argument("--samples", type=int, default=0, help="curvature samples per cell")
    common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("geodesic", help="trajectory runs with comparison metrics")
    p.add_argument("mode", choices=("warped-lightlike", "warped-timelike", "euler-arnold", "riccati"))
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--t", type=_frac, default=Fraction("-0.8"))
    p.add_argument("--l", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--c1", type=float, default=None)
    p.add_argument("--c2", type=float, default=0.0)
    p.add_argument("--h0", type=float, default=0.0)
    p.add_argument("--u-max", type=float, default=100.0)
    p.add_argument("--t-max", type=float, default=50.0)
    p.add_argument("--gamma0", default=None, help="8 comma-separated rationals")
    p.add_argument("--rtol", type=float, default=1e-9)
    p.add_argument("--atol", type=float, default=1e-12)
    common(p, with_workers=False)
    p.set_defaults(func=cmd_geodesic)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"semigeo: error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"semigeo: error: {exc}", file=sys.stderr)
        return 1
    except SemigeoError as exc:
        print(f"semigeo: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
