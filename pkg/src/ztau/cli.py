"""Batch command-line front end.

Reads series and index sets from JSON files, dispatches to the library, and
emits deterministic JSON reports (CSV for tables and matrices).  Every module
error surfaces as a machine-readable code in the report and a nonzero exit.

Report schema: {"command": ..., "config": {...}, "result": ..., "errors": []}.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from . import bohr, poisson, szego
from .config import RunConfig, load_config
from .errors import ParseError, ZtauError
from .multiindex import MultiIndex, ordinal, tau_float
from .series import (
    FourierSeries,
    cesaro_mean,
    evaluate,
    kronecker_point,
)

# ---------------------------------------------------------------------------
# JSON schemas
# ---------------------------------------------------------------------------

def series_to_json(f: FourierSeries) -> dict:
    return {
        "terms": [
            {"index": n.dense(), "re": a.real, "im": a.imag}
            for n, a in f.sorted_items()
        ]
    }


def series_from_json(data) -> FourierSeries:
    if not isinstance(data, dict) or "terms" not in data:
        raise ParseError('series JSON must be an object with a "terms" array')
    terms = []
    for t in data["terms"]:
        try:
            idx = MultiIndex.from_dense(t["index"])
            terms.append((idx, complex(t.get("re", 0.0), t.get("im", 0.0))))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad series term {t!r}: {exc}") from exc
    return FourierSeries(terms)


def dirichlet_to_json(D: bohr.DirichletSeries) -> dict:
    return {
        "terms": [
            {"num": q.numerator, "den": q.denominator, "re": b.real, "im": b.imag}
            for q, b in D.sorted_items()
        ]
    }


def dirichlet_from_json(data) -> bohr.DirichletSeries:
    if not isinstance(data, dict) or "terms" not in data:
        raise ParseError('Dirichlet JSON must be an object with a "terms" array')
    terms = []
    for t in data["terms"]:
        try:
            q = Fraction(int(t["num"]), int(t.get("den", 1)))
            terms.append((q, complex(t.get("re", 0.0), t.get("im", 0.0))))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad Dirichlet term {t!r}: {exc}") from exc
    return bohr.DirichletSeries(terms)


def indices_from_json(data) -> list[MultiIndex]:
    if not isinstance(data, list):
        raise ParseError("support JSON must be an array of dense index arrays")
    try:
        return [MultiIndex.from_dense(row) for row in data]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad index entry: {exc}") from exc


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _complex_json(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


# ---------------------------------------------------------------------------
# Subcommand implementations: each returns (result_object, optional_csv_text)
# ---------------------------------------------------------------------------

def _parse_sigma(raw: str) -> float:
    if raw is None:
        raise ParseError("this command requires --sigma")
    if raw.strip().lower() in ("inf", "infinity", "+inf"):
        return math.inf
    try:
        return float(raw)
    except ValueError as exc:
        raise ParseError(f"--sigma expects a number or 'inf', got {raw!r}") from exc


def _require(args, name: str):
    val = getattr(args, name.lstrip("-").replace("-", "_"), None)
    if val is None:
        raise ParseError(f"this command requires --{name}")
    return val


def _cmd_order_sort(args, cfg: RunConfig):
    f = series_from_json(_load_json(_require(args, "input")))
    rows = []
    for n, a in f.sorted_items():
        q = ordinal(n)
        t = tau_float(n, cfg.precision_bits)
        rows.append(
            {
                "index": n.dense(),
                "ordinal": {"num": q.numerator, "den": q.denominator},
                "tau": t.value,
                "re": a.real,
                "im": a.imag,
            }
        )
    return {"terms": rows}, None


def _cmd_bohr(args, cfg: RunConfig):
    data = _load_json(_require(args, "input"))
    if args.inverse:
        D = dirichlet_from_json(data)
        return series_to_json(bohr.from_dirichlet(D, cfg.prime_bound)), None
    f = series_from_json(data)
    return dirichlet_to_json(bohr.to_dirichlet(f)), None


def _cmd_eval(args, cfg: RunConfig):
    f = series_from_json(_load_json(_require(args, "input")))
    sigma = _parse_sigma(args.sigma)
    t = args.t if args.t is not None else 0.0
    pt = kronecker_point(sigma, t, f.active_coords(), cfg.precision_bits)
    return _complex_json(evaluate(f, pt, cfg.precision_bits)), None


def _cmd_smooth(args, cfg: RunConfig):
    f = series_from_json(_load_json(_require(args, "input")))
    sigma = _parse_sigma(args.sigma)
    return series_to_json(poisson.smooth(f, sigma, cfg.precision_bits)), None


def _cmd_cesaro(args, cfg: RunConfig):
    f = series_from_json(_load_json(_require(args, "input")))
    x = _require(args, "t")
    return series_to_json(cesaro_mean(f, x, cfg.precision_bits)), None


def _cmd_szego(args, cfg: RunConfig):
    w = szego.Weight(series_from_json(_load_json(_require(args, "input"))))
    support = indices_from_json(_load_json(_require(args, "support")))
    mode = args.mode
    if args.table:
        chains = [support[:k] for k in range(len(support) + 1)]
        rows = szego.szego_gap_table(
            w, chains, mode, grid_points=cfg.grid_points, max_dims=cfg.max_dims
        )
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["section_size", "infimum", "geometric_mean", "gap"])
        for r in rows:
            writer.writerow([r.section_size, repr(r.infimum), repr(r.geometric_mean), repr(r.gap)])
        table = [
            {
                "section_size": r.section_size,
                "infimum": r.infimum,
                "geometric_mean": r.geometric_mean,
                "gap": r.gap,
            }
            for r in rows
        ]
        return {"table": table}, buf.getvalue()
    res = szego.szego_infimum(w, support, mode)
    gm = szego.geometric_mean(w, "grid", cfg.grid_points, cfg.max_dims)
    return {
        "value": res.value,
        "geometric_mean": gm,
        "gap": res.value - gm,
        "singular": res.singular,
        "minimizer": series_to_json(res.minimizer),
    }, None


def _cmd_outer(args, cfg: RunConfig):
    w = szego.Weight(series_from_json(_load_json(_require(args, "input"))))
    sigma0 = _parse_sigma(args.sigma) if args.sigma is not None else 2.0
    cond = szego.support_condition_check(
        w, cfg.grid_points, cfg.max_dims, cfg.tolerance
    )
    cond_json = {
        "holds": cond.holds,
        "violations": [n.dense() for n in cond.violations],
        "unresolved": [n.dense() for n in cond.unresolved],
        "tolerance": cond.tolerance,
        "grid": cond.grid_points,
    }
    g = szego.outer_factor(
        w,
        sigma0,
        grid_points=cfg.grid_points,
        max_dims=cfg.max_dims,
        support_tol=cfg.tolerance,
        term_budget=cfg.term_budget,
    )
    check = szego.outer_check(g, cfg.grid_points, cfg.max_dims, tol=cfg.tolerance)
    return {
        "factor": series_to_json(g),
        "support_condition": cond_json,
        "outer_check": {"is_outer": check.is_outer, "lhs": check.lhs, "rhs": check.rhs},
    }, None


def _cmd_ergodic(args, cfg: RunConfig):
    f = series_from_json(_load_json(_require(args, "input")))
    horizon = _require(args, "t")
    res = poisson.ergodic_average(f, horizon, precision_bits=cfg.precision_bits)
    return {"value": _complex_json(res.value), "closed_form": res.closed_form}, None


def _cmd_poisson_matrix(args, cfg: RunConfig):
    support = indices_from_json(_load_json(_require(args, "support")))
    sigma = _parse_sigma(args.sigma)
    pm = poisson.poisson_matrix(support, sigma, cfg.precision_bits)
    det_closed = poisson.poisson_matrix_det(support, sigma, cfg.precision_bits)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([str(n) for n in pm.indices])
    for row in pm.matrix:
        writer.writerow([repr(float(v)) for v in row])
    result = {
        "indices": [n.dense() for n in pm.indices],
        "sigma": sigma,
        "matrix": [[float(v) for v in row] for row in pm.matrix],
        "det_closed_form": det_closed,
        "det_numeric": pm.numeric_det(),
        "min_eigenvalue": pm.min_eigenvalue(),
    }
    return result, buf.getvalue() if args.table else None


def _cmd_cauchy_check(args, cfg: RunConfig):
    if args.q is None:
        raise ParseError("cauchy-check requires --q")
    try:
        q = Fraction(args.q)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"--q expects a rational like 2 or 3/2, got {args.q!r}") from exc
    if q <= 0:
        raise ParseError(f"--q must be positive, got {q}")
    sigma = _parse_sigma(args.sigma)
    tol = args.tol if args.tol is not None else cfg.tolerance
    u = math.log(q.numerator) - math.log(q.denominator)
    moment = poisson.cauchy_moment(u, sigma, t0=args.t or 0.0, tol=tol)
    target = float(q) ** (-sigma) * complex(
        math.cos(-u * (args.t or 0.0)), math.sin(-u * (args.t or 0.0))
    )
    return {
        "value": _complex_json(moment.value),
        "target": _complex_json(target),
        "abs_error": abs(moment.value - target),
        "tail_bound": moment.tail_bound,
    }, None


_COMMANDS = {
    "order-sort": _cmd_order_sort,
    "bohr": _cmd_bohr,
    "eval": _cmd_eval,
    "smooth": _cmd_smooth,
    "cesaro": _cmd_cesaro,
    "szego": _cmd_szego,
    "outer": _cmd_outer,
    "ergodic": _cmd_ergodic,
    "poisson-matrix": _cmd_poisson_matrix,
    "cauchy-check": _cmd_cauchy_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ztau",
        description="Prime-logarithm ordered series toolkit: Bohr transform, "
        "Poisson smoothing, Szego sections, outer factorization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "order-sort": "emit the terms of a series ascending in the exact order",
        "bohr": "map a series to its Dirichlet form (--inverse for the way back)",
        "eval": "evaluate a series at the point sigma + it of the half-plane",
        "smooth": "apply the smoothing multiplier at --sigma (inf collapses to the mean)",
        "cesaro": "Cesaro mean with cutoff --t",
        "szego": "finite-section infimum for a weight (--table for the gap table)",
        "outer": "outer factor of a weight at --sigma (default 2)",
        "ergodic": "flow average over [-t, t]",
        "poisson-matrix": "section matrix, closed-form and numeric determinant",
        "cauchy-check": "verify the half-plane moment against q^(-sigma)",
    }
    for name in _COMMANDS:
        p = sub.add_parser(name, help=descriptions[name])
        p.add_argument("--input", help="input series JSON path")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--sigma", help="radial parameter; accepts 'inf'")
        p.add_argument("--t", type=float, help="flow time / cutoff / averaging horizon")
        p.add_argument("--grid", type=int, help="grid points per dimension")
        p.add_argument("--support", help="JSON path with an array of dense indices")
        p.add_argument("--tol", type=float, help="tolerance override")
        p.add_argument("--table", action="store_true", help="emit CSV table output")
        p.add_argument("--config", help="JSON config file overriding defaults")
        if name == "bohr":
            p.add_argument("--inverse", action="store_true", help="Dirichlet -> series")
        if name == "szego":
            p.add_argument("--mode", choices=["zplus", "tau"], default="zplus")
        if name == "cauchy-check":
            p.add_argument("--q", help="positive rational frequency, e.g. 2 or 3/2")
    return parser


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    report = {"command": args.command, "config": None, "result": None, "errors": []}
    try:
        cfg = load_config(
            args.config,
            grid_points=args.grid,
            tolerance=args.tol,
        )
        report["config"] = cfg.as_dict()
        result, csv_text = _COMMANDS[args.command](args, cfg)
        report["result"] = result
    except ZtauError as exc:
        report["errors"].append({"code": exc.code, "message": str(exc), **_json_safe(exc.details)})
        _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.output)
        return 1
    except ValueError as exc:
        report["errors"].append({"code": "invalid_parameter", "message": str(exc)})
        _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.output)
        return 1
    if csv_text is not None:
        _emit(csv_text, args.output)
    else:
        _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.output)
    return 0


def _json_safe(details: dict) -> dict:
    out = {}
    for k, v in details.items():
        if isinstance(v, (list, tuple)):
            out[k] = [str(x) for x in v]
        elif isinstance(v, (int, float, str, bool)) or v is None:
            out[k] = v
        else:
            out[k] = str(v)
    return out


if __name__ == "__main__":
    sys.exit(main())
