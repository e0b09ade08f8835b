"""Command-line front end: ``emgr {verify,profile,stress,self-energy,farfield,horizon}``.

Exit codes: 0 success, 1 failed check or non-converged quadrature,
2 configuration error.  Tables go to stdout or, with ``--out``, to a file
written atomically (temporary file in the same directory, then rename).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .checks import CHECKS, CheckConfig, report, run_suite
from .errors import DivergencePath, DomainError, NoConvergence, SingularMetric
from .fields import VacuumModel, charge_density, cumulative_charge, dielectric_fields, farfield_kn
from .metrics import ChargeProfile, Family, MetricSpec, ParticleParams, build_metric, horizon_scan, lapse
from .quadrature import divergence_probe, self_energy
from .stress import closed_T00_kn, closed_T_static, stress_from_metric
from .tensor import CoordPoint

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

PROFILE_COLUMNS = ("r", "f_classic", "f_regularized", "epsilon", "rho", "q_cum")
STRESS_COLUMNS = ("r", "T00", "T11", "T22", "T33", "T00_closed_form", "rel_err")
STRESS_COLUMNS_KN = ("r", "theta", "T00", "T11", "T22", "T33", "T00_closed_form", "rel_err")
SELF_ENERGY_COLUMNS = ("metric", "profile", "beta", "alpha", "W", "error_estimate", "evaluations", "converged")
DIVERGENCE_COLUMNS = ("r_min", "W")
FARFIELD_COLUMNS = ("r", "theta", "E_r", "E_theta", "B_r", "B_theta")
HORIZON_COLUMNS = ("root",)
REPORT_COLUMNS = ("name", "paper_eq", "expected", "actual", "tolerance", "pass")

DEFAULT_GRIDS = {
    "profile": "0.01:100:200",
    "stress": "0.01:100:41",
    "farfield": "1e-8:1e-6:5",
    "horizon": "0.001:1000:1000",
}


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def parse_grid(text: str) -> np.ndarray:
    """``MIN:MAX:N`` -> N log-spaced points (N = 1 gives MIN alone)."""
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise ConfigError(f"grid must look like MIN:MAX:N, got {text!r}") from None
    if n < 1:
        raise ConfigError("grid needs at least one point")
    if not (0 < lo <= hi and math.isfinite(hi)):
        raise ConfigError("grid bounds must satisfy 0 < MIN <= MAX")
    if n == 1:
        return np.array([lo])
    return np.geomspace(lo, hi, n)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if x is None:
        return ""
    return str(x)


def _json_value(x):
    if isinstance(x, np.generic):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


def render(columns, rows, fmt: str, meta=None) -> str:
    """Serialize a table; ``meta`` becomes a leading ``#`` note (CSV) or top-level keys (JSON)."""
    meta = meta or {}
    if fmt == "json":
        doc = dict((k, _json_value(v)) for k, v in meta.items())
        doc["columns"] = list(columns)
        doc["rows"] = [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows]
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    for k, v in meta.items():
        buf.write(f"# {k}: {v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    target = os.path.abspath(out)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), prefix=".emgr-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _spec(args) -> MetricSpec:
    return MetricSpec.scaled(args.metric, args.profile, args.beta, _alpha(args))


def _alpha(args) -> float:
    return args.alpha if args.metric == Family.KERR_NEWMAN.value else 0.0


def _grid(args):
    return parse_grid(args.grid or DEFAULT_GRIDS[args.command])


# commands ---------------------------------------------------------------------


def cmd_verify(args):
    cfg = CheckConfig(args.metric, args.profile, args.beta, args.alpha, args.tol, args.seed)
    names = None if not args.check else args.check
    try:
        records = run_suite(cfg, names)
    except KeyError as exc:
        raise ConfigError(f"{exc.args[0]}; available: {', '.join(CHECKS)}") from None
    rep = report(records)
    if (args.format or "json") == "json":
        text = json.dumps(rep, indent=2) + "\n"
    else:
        rows = [[c[k] for k in REPORT_COLUMNS] for c in rep["checks"]]
        text = render(REPORT_COLUMNS, rows, "csv")
    return text, EXIT_OK if rep["summary"]["passed"] == rep["summary"]["total"] else EXIT_FAIL


def cmd_profile(args):
    r = _grid(args)
    model = VacuumModel()
    f_cl = lapse(MetricSpec.scaled("static", "classic", args.beta), r)
    f_reg = lapse(MetricSpec.scaled("static", "regularized", args.beta), r)
    eps, _, _ = dielectric_fields(model, r)
    rho = charge_density(model, r)
    tol = 1e-13 if args.tol is None else args.tol
    q = [cumulative_charge(model, x, tol).value for x in r]
    rows = list(zip(r, f_cl, f_reg, eps, rho, q))
    meta = {"units": "r in r0; rho in e/r0^3; q_cum in e; f at beta=" + _fmt(args.beta)}
    return render(PROFILE_COLUMNS, rows, args.format or "csv", meta), EXIT_OK


def cmd_stress(args):
    spec = _spec(args)
    r = _grid(args)
    metric = build_metric(spec)
    if spec.family is Family.KERR_NEWMAN:
        th = np.full_like(r, args.theta)
        comps = stress_from_metric(metric, CoordPoint(0.0, r, th)).components
        closed = closed_T00_kn(spec, r, th)
        cols = STRESS_COLUMNS_KN
    else:
        th = None
        comps = stress_from_metric(metric, CoordPoint(0.0, r, 0.5 * math.pi)).components
        closed = closed_T_static(spec, r).components[0, 0]
        cols = STRESS_COLUMNS
    rel = np.abs(comps[0, 0] - closed) / np.abs(closed)
    rows = []
    for i in range(r.size):
        diag = [comps[k, k][i] for k in range(4)]
        lead = [r[i]] if th is None else [r[i], th[i]]
        rows.append(lead + diag + [closed[i], rel[i]])
    meta = {"units": "geometrized, r0 = 1", "metric": spec.family.value, "profile": spec.profile.value,
            "beta": args.beta, "alpha": _alpha(args)}
    return render(cols, rows, args.format or "csv", meta), EXIT_OK


def cmd_self_energy(args):
    spec = _spec(args)
    fmt = args.format or "csv"
    if spec.profile is ChargeProfile.CLASSIC:
        cuts = (np.geomspace(1e-6, 1e-3, 7) if spec.family is Family.STATIC
                else np.geomspace(1e-2, 1e-1, 5))
        rep = divergence_probe(spec, cuts)
        meta = {"units": "W in m c^2, r_min in r0", "exponent": rep.exponent,
                "coefficient": rep.coefficient, "residual": rep.residual, "divergent": rep.divergent}
        return render(DIVERGENCE_COLUMNS, list(zip(rep.cutoffs, rep.values)), fmt, meta), EXIT_OK
    tol = args.tol if args.tol is not None else (1e-10 if spec.family is Family.KERR_NEWMAN else 1e-12)
    res = self_energy(spec, tol)
    row = [spec.family.value, spec.profile.value, args.beta, _alpha(args), res.value,
           res.error_estimate, res.evaluations, res.converged]
    return render(SELF_ENERGY_COLUMNS, [row], fmt, {"units": "W in m c^2"}), EXIT_OK


def cmd_farfield(args):
    r = _grid(args)
    s = farfield_kn(ParticleParams.electron(), r, args.theta)
    rows = [[r[i], args.theta, s.E_r[i], s.E_theta[i], s.B_r[i], s.B_theta[i]] for i in range(r.size)]
    meta = {"units": "Gaussian; r in cm, fields in statvolt/cm and gauss", "mu": s.mu}
    return render(FARFIELD_COLUMNS, rows, args.format or "csv", meta), EXIT_OK


def cmd_horizon(args):
    spec = _spec(args)
    text = args.grid or DEFAULT_GRIDS["horizon"]
    grid = parse_grid(text)
    per_decade = int(text.split(":")[2])
    if grid[0] == grid[-1]:
        raise ConfigError("horizon scan needs MIN < MAX")
    roots = horizon_scan(spec, (grid[0], grid[-1]), points_per_decade=per_decade)
    meta = {"units": "r in r0", "metric": spec.family.value, "profile": spec.profile.value,
            "beta": args.beta, "alpha": _alpha(args)}
    return render(HORIZON_COLUMNS, [[x] for x in roots], args.format or "csv", meta), EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "profile": cmd_profile,
    "stress": cmd_stress,
    "self-energy": cmd_self_energy,
    "farfield": cmd_farfield,
    "horizon": cmd_horizon,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--metric", choices=[f.value for f in Family], default="static")
    common.add_argument("--profile", choices=[p.value for p in ChargeProfile], default="regularized")
    common.add_argument("--beta", type=float, default=1.0, help="2M/r0")
    common.add_argument("--alpha", type=float, default=1.0, help="a/r0 (Kerr-Newman only)")
    common.add_argument("--tol", type=float, default=None, help="quadrature tolerance")
    common.add_argument("--grid", default=None, help="MIN:MAX:N, log spaced")
    common.add_argument("--theta", type=float, default=0.5 * math.pi, help="polar angle (stress, farfield)")
    common.add_argument("--format", choices=["csv", "json"], default=None)
    common.add_argument("--out", default=None, help="output file (written atomically)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--check", action="append", default=None, help="run only this check (repeatable)")

    parser = _Parser(prog="emgr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"emgr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.tol is not None and not args.tol > 0:
            raise ConfigError("--tol must be positive")
        text, code = COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"emgr: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, SingularMetric, DivergencePath) as exc:
        print(f"emgr: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoConvergence as exc:
        print(f"emgr: {exc}", file=sys.stderr)
        return EXIT_FAIL
    try:
        emit(text, args.out)
    except OSError as exc:
        print(f"emgr: error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return code


if __name__ == "__main__":
    sys.exit(main())
