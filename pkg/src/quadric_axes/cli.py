"""Command-line front end: ``quadric-axes {axes,verify,constructible,figure}``.

Exit codes: 0 success, 1 geometric degeneracy or failed verification,
2 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from . import confocal
from .chasles3d import chasles_axes, pipeline_tol
from .conjugate import ConjugateSystem, Ellipsoid, axes_oracle, check_conjugacy, random_system
from .errors import DegenerateError, InputError, QuadricAxesError
from .exactalg import edge_quartic_constructibility, quartic_constructibility, rat
from .exactalg.poly import Poly

EXIT_OK, EXIT_DEGENERATE, EXIT_INPUT = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    tol: float = 1e-8
    seed: int | None = None
    report: str | None = None
    svg: str | None = None
    extra: dict[str, Any] = field(default_factory=dict)


def to_jsonable(v):
    if isinstance(v, dict):
        return {str(k): to_jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [to_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return to_jsonable(v.tolist())
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if hasattr(v, "to_json"):
        return to_jsonable(v.to_json())
    if hasattr(v, "to_dict"):
        return to_jsonable(v.to_dict())
    return v


def make_report(command: str, inputs, results, residuals, trace) -> dict:
    return to_jsonable({"command": command, "inputs": inputs, "results": results,
                        "residuals": residuals, "trace": trace})


def parse_rows(text: str, n: int | None = None) -> list[list[float]]:
    """Whitespace-separated numbers, one semi-diameter per line; '#' starts a comment."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        want = n if n is not None else (len(rows[0][1]) if rows else len(parts))
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise InputError(f"line {lineno}: expected {want} numbers") from None
        if len(vals) != want or not all(math.isfinite(v) for v in vals):
            raise InputError(f"line {lineno}: expected {want} numbers")
        rows.append((lineno, vals))
    if not rows:
        raise InputError("empty input: no semi-diameters")
    dim = len(rows[0][1])
    if len(rows) != dim:
        raise InputError(f"expected {dim} semi-diameters, got {len(rows)}")
    return [r for _, r in rows]


def read_system(path: str, n: int | None = None) -> ConjugateSystem:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return ConjugateSystem.from_rows(parse_rows(text, n))


def _floats(spec: str, what: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(s) for s in spec.split(","))
    except ValueError:
        raise InputError(f"{what}: expected comma-separated numbers") from None
    return vals


def _emit(report: dict, path: str | None) -> None:
    text = json.dumps(report, indent=2)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# --------------------------------------------------------------------------


def cmd_axes(cfg: RunConfig) -> int:
    sys_ = read_system(cfg.input, 3)
    res, trace = chasles_axes(sys_, cfg.tol)
    ora = axes_oracle(sys_)
    metrics = res.compare(ora)
    results = {
        "chasles": {"directions": res.directions.T, "lengths": res.lengths, "provenance": res.provenance},
        "oracle": {"directions": ora.directions.T, "lengths": ora.lengths, "provenance": ora.provenance},
        "agreement": metrics,
        "degenerate": trace.degenerate,
        "branch": trace.branch,
    }
    residuals = {
        "frame_orthogonality": trace.frame.orthogonality,
        "diagonal_orthogonality": trace.diagonal_orthogonality,
        "intercept_spread": trace.intercept_spread,
        "cone_commutator": trace.cone_commutator,
        "edge_eq16": None if trace.edges is None else trace.edges.eq16_residuals,
        "edge_cones": None if trace.edges is None else trace.edges.cone_residuals,
    }
    _emit(make_report("axes", {"file": cfg.input, "rows": sys_.X.T, "tol": cfg.tol},
                      results, residuals, trace.to_dict()), cfg.report)
    return EXIT_OK


def _system_checks(sys_: ConjugateSystem, ell: Ellipsoid) -> dict[str, float]:
    X = sys_.X
    n = ell.n
    on = max(abs(float(np.sum(ell.to_canonical(X[:, i]) ** 2 / ell.squares)) - 1.0) for i in range(n))
    conj = max((abs(check_conjugacy(X[:, i], X[:, j], ell)) for i in range(n) for j in range(i + 1, n)),
               default=0.0)
    ssq = float(np.sum(ell.squares))
    vol = float(np.prod(ell.semi_axes))
    return {
        "on_surface": on,
        "conjugacy": conj,
        "sum_of_squares": abs(float(np.sum(X ** 2)) - ssq) / ssq,
        "volume": abs(abs(float(np.linalg.det(X))) - vol) / vol,
    }


def _confocal_checks(ell: Ellipsoid, p) -> dict[str, float]:
    t = confocal.lambda_roots(ell, p)
    x2, _ = confocal.recover_coordinates(t)
    lhs, rhs = confocal.norm_square_identity(t)
    orth = max((abs(confocal.orthogonality_residual(t, j, k))
                for j in range(ell.n) for k in range(ell.n) if j != k), default=0.0)
    return {
        "confocal_recovery": float(np.max(np.abs(x2 - p ** 2) / p ** 2)),
        "confocal_interlacing": 0.0 if t.interlacing_ok() else 1.0,
        "confocal_norm_identity": abs(lhs - rhs) / lhs,
        "confocal_orthogonality": orth,
    }


def cmd_verify(cfg: RunConfig) -> int:
    ex = cfg.extra
    ell = Ellipsoid(_floats(ex["ellipsoid"], "--ellipsoid")) if ex.get("ellipsoid") else None
    worst: dict[str, float] = {}

    def fold(d):
        for k, v in d.items():
            worst[k] = max(worst.get(k, 0.0), float(v))

    count = 0
    if cfg.input:
        sys_ = read_system(cfg.input)
        if ell is None:
            ora = axes_oracle(sys_)
            ell = Ellipsoid(ora.lengths, ora.directions)
        elif ell.n != sys_.n:
            raise InputError(f"--ellipsoid has {ell.n} semi-axes, system has {sys_.n}")
        fold(_system_checks(sys_, ell))
        count = 1
    else:
        if ell is None:
            raise InputError("verify needs an input file or --random N --ellipsoid a1,a2[,a3]")
        if ex.get("random") is None or ex["random"] < 1:
            raise InputError("--random must be a positive count")
        rng = np.random.default_rng(cfg.seed)
        for _ in range(ex["random"]):
            sys_, placed = random_system(ell, seed=int(rng.integers(2 ** 32)))
            fold(_system_checks(sys_, placed))
            if ell.strict:
                p = rng.uniform(-1.5, 1.5, ell.n) * np.asarray(ell.semi_axes)
                p[np.abs(p) < 1e-3] = 1e-3
                fold(_confocal_checks(Ellipsoid(ell.semi_axes), p))
            count += 1
    tol = cfg.tol
    limits = {k: (0.5 if k == "confocal_interlacing" else tol) for k in worst}
    ok = all(worst[k] <= limits[k] for k in worst)
    if cfg.report:
        _emit(make_report("verify", {"file": cfg.input, "ellipsoid": ell.semi_axes, "count": count,
                                     "seed": cfg.seed, "tol": tol},
                          {k: worst[k] <= limits[k] for k in worst}, worst, {}), cfg.report)
    print("check\tmax_residual\ttolerance\tstatus")
    for k in worst:
        print(f"{k}\t{worst[k]:.3e}\t{limits[k]:.1e}\t{'PASS' if worst[k] <= limits[k] else 'FAIL'}")
    return EXIT_OK if ok else EXIT_DEGENERATE


def cmd_constructible(cfg: RunConfig) -> int:
    ex = cfg.extra
    if ex.get("quartic"):
        cs = [rat(s) for s in ex["quartic"].split(",")]
        if len(cs) != 5:
            raise InputError("--quartic needs five coefficients c4,c3,c2,c1,c0")
        q = Poly.from_descending(cs)
        if q.degree != 4:
            raise InputError("--quartic: leading coefficient must be nonzero")
        rep = quartic_constructibility(q)
        inputs = {"quartic": [str(c) for c in cs]}
    else:
        missing = [k for k in ("a", "b", "x", "y", "zsq") if ex.get(k) is None]
        if missing:
            raise InputError("constructible needs --quartic or all of --a --b --x --y --zsq (missing: "
                             + ", ".join("--" + m for m in missing) + ")")
        vals = {k: rat(ex[k]) for k in ("a", "b", "x", "y", "zsq")}
        rep = edge_quartic_constructibility(vals["a"], vals["b"], vals["x"], vals["y"], vals["zsq"])
        inputs = {k: str(v) for k, v in vals.items()}
    _emit(make_report("constructible", inputs, {"verdict": rep.verdict, "method": rep.method},
                      {}, rep.to_json()), cfg.report)
    return EXIT_OK


def cmd_figure(cfg: RunConfig) -> int:
    from . import figures
    from .rytz2d import rytz_axes

    which = cfg.extra["which"]
    out = cfg.svg or f"{which}.svg"
    with open(cfg.input, encoding="utf-8") as fh:
        text = fh.read()
    rows = parse_rows(text)
    if len(rows[0]) == 2:
        if which != "rytz":
            raise InputError(f"--which {which} needs a 3D system")
        spec = figures.rytz_spec(rytz_axes(rows[0], rows[1]))
    else:
        sys_ = ConjugateSystem.from_rows(rows)
        res, trace = chasles_axes(sys_, cfg.tol)
        if which == "rytz":
            spec = figures.rytz_spec(trace.frame.rytz)
        elif which == "focal":
            spec = figures.focal_spec(trace)
        elif which == "projection":
            spec = figures.projection_spec(trace)
        else:
            spec = figures.axes_spec(trace, res.directions, res.lengths)
    figures.render(spec, out)
    print(out)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadric-axes",
                                description="Axes of an ellipsoid from conjugate semi-diameters.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("axes", help="axes by the focal-conic construction, checked against eigenvectors")
    a.add_argument("input", help="text file, one semi-diameter per line")
    a.add_argument("--json", dest="report", help="write the report here instead of stdout")

    v = sub.add_parser("verify", help="batch invariant checks (TSV on stdout)")
    v.add_argument("input", nargs="?", help="system file (optional with --random)")
    v.add_argument("--random", type=int, help="number of random systems")
    v.add_argument("--ellipsoid", help="semi-axes a1,a2[,a3] (decreasing)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json", dest="report", help="also write a JSON report")

    c = sub.add_parser("constructible", help="ruler-and-compass verdict for the edge quartic")
    for name in ("a", "b", "x", "y", "zsq"):
        c.add_argument(f"--{name}", help="exact rational p/q")
    c.add_argument("--quartic", help="c4,c3,c2,c1,c0 as exact rationals")
    c.add_argument("--json", dest="report", help="write the report here instead of stdout")

    f = sub.add_parser("figure", help="render a construction as SVG")
    f.add_argument("input")
    f.add_argument("--which", choices=["rytz", "focal", "projection", "axes"], default="axes")
    f.add_argument("--out", dest="svg", help="SVG path (default <which>.svg)")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    extra = {k: v for k, v in vars(args).items() if k not in ("command", "input", "report", "svg", "seed")}
    try:
        cfg = RunConfig(args.command, getattr(args, "input", None), pipeline_tol(),
                        getattr(args, "seed", None), getattr(args, "report", None),
                        getattr(args, "svg", None), extra)
        handler = {"axes": cmd_axes, "verify": cmd_verify,
                   "constructible": cmd_constructible, "figure": cmd_figure}[args.command]
        return handler(cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegenerateError as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except QuadricAxesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
