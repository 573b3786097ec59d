"""``tclab`` command line.

Exit codes: 0 success / verification passed, 1 verification failed, 2 usage or
input error.  ``--json`` output carries ``schema_version``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .algebra import RingSyntaxError, betti, parse_ring, validate
from .engine import bounds, explain
from .invariants import cup_length, zcl
from .linalg import Field
from .planner import PLANNER_NAMES, DomainError, NotCoveredError, planner_by_name
from .spaces import MissingRingError, SpaceSemanticError, SpaceSyntaxError, cohomology, normalize, parse, so_category
from .verifier import SCHEMA_VERSION, VerificationConfig, kernel_backend, verify

FIELDS_ENV = "TCLAB_FIELDS"
DEFAULT_FIELDS = "Q,Z2"


class UsageError(Exception):
    pass


def _fields(text: str | None):
    text = text or os.environ.get(FIELDS_ENV) or DEFAULT_FIELDS
    try:
        return tuple(Field.parse(t.strip()) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise UsageError(f"bad field list {text!r}: {exc}") from None


def _emit(obj):
    print(json.dumps(obj, indent=2, sort_keys=False))


def _caret(text: str, pos: int) -> str:
    return f"  {text}\n  {' ' * pos}^"


# -- invariants ---------------------------------------------------------------


def _ring_summary(expr, field):
    try:
        A = cohomology(expr, field)
    except MissingRingError as exc:
        return {"field": field.name, "error": str(exc)}
    return {"field": field.name, "betti": betti(A), "cup": cup_length(A), "zcl": zcl(A)}


def cmd_invariants(args) -> int:
    fields = _fields(args.fields)
    try:
        e = parse(args.expr)
        nf = normalize(e)
    except SpaceSyntaxError as exc:
        raise UsageError(f"{exc}\n{_caret(args.expr, exc.pos)}") from None
    except SpaceSemanticError as exc:
        raise UsageError(str(exc)) from None
    b = bounds(e, fields)
    rings = [_ring_summary(nf, f) for f in fields]
    if args.json:
        out = {"schema_version": SCHEMA_VERSION, **b.to_json(), "rings": rings}
        _emit(out)
        return 0
    print(f"expression   {b.expr}")
    print(f"normal form  {b.normal_form}")
    for r in rings:
        if "error" in r:
            print(f"  over {r['field']:<3} ring unavailable: {r['error']}")
        else:
            print(f"  over {r['field']:<3} betti={r['betti']}  cup={r['cup']}  zcl={r['zcl']}")
    print()
    print(explain(e, b))
    return 0


# -- ring ---------------------------------------------------------------------


def cmd_ring(args) -> int:
    try:
        A = parse_ring(args.text, Field.parse(args.field) if args.field else None)
    except RingSyntaxError as exc:
        raise UsageError(f"{exc}\n{_caret(args.text, exc.pos)}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = validate(A)
    cup, z = cup_length(A), zcl(A)
    out = {
        "schema_version": SCHEMA_VERSION,
        "ring": A.name,
        "field": A.field.name,
        "dimension": A.dim,
        "betti": betti(A),
        "basis": [{"label": lab, "degree": d} for lab, d in zip(A.labels, A.degrees)],
        "cup": cup,
        "zcl": z,
        "cat_lower_bound": cup + 1,
        "tc_lower_bound": z + 1,
        "valid": report.ok,
        "violations": report.violations,
    }
    if args.json:
        _emit(out)
    else:
        print(f"ring   {A.name} over {A.field.name}   dim {A.dim}   betti {out['betti']}")
        print("basis  " + ", ".join(f"{lab}:{d}" for lab, d in zip(A.labels, A.degrees)))
        print(f"cup = {cup}   zcl = {z}   cat >= {cup + 1}   TC >= {z + 1}")
        print("valid" if report.ok else "INVALID: " + "; ".join(report.violations))
    return 0 if report.ok else 1


# -- plan ---------------------------------------------------------------------


def parse_point(text: str) -> np.ndarray:
    """Comma-separated coordinates; a token ``<a>deg[:h...]`` expands to (cos a, sin a, h...)."""
    coords: list[float] = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            raise UsageError(f"empty coordinate in {text!r}")
        head, *heights = tok.split(":")
        try:
            if head.lower().endswith("deg"):
                a = math.radians(float(head[:-3]))
                coords += [math.cos(a), math.sin(a), *map(float, heights)]
            elif heights:
                raise ValueError
            else:
                coords.append(float(head))
        except ValueError:
            raise UsageError(f"bad coordinate {tok!r} in {text!r}") from None
    return np.array(coords)


def _planner(name: str):
    try:
        return planner_by_name(name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def cmd_plan(args) -> int:
    P = _planner(args.space)
    A, B = parse_point(args.start), parse_point(args.goal)
    for lab, x in (("start", A), ("goal", B)):
        if x.shape != (P.space.ambient,):
            raise UsageError(f"{lab} has {x.size} coordinates; {P.space.name} needs {P.space.ambient}")
    try:
        k, path = P.plan(A, B)
    except (DomainError, NotCoveredError) as exc:
        raise UsageError(str(exc)) from None
    samples = path.sample(args.resolution)
    out = {
        "schema_version": SCHEMA_VERSION,
        "space": P.name,
        "rule": k,
        "rule_domain": P.descriptions[k],
        "margins": [float(m) for m in P.margins(A, B)],
        "resolution": args.resolution,
        "samples": samples,
    }
    if P.space.has_collisions:
        X = np.array([s["point"] for s in samples])
        out["min_collision_margin"] = float(P.space.collision_margin(X).min())
    _emit(out)
    return 0


# -- verify -------------------------------------------------------------------


def cmd_verify(args) -> int:
    P = _planner(args.space)
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    cfg = VerificationConfig(samples=args.samples, seed=args.seed, time_steps=args.time_steps, workers=args.workers)
    t0 = time.perf_counter()
    report = verify(P, cfg)
    out = report.to_json()
    if args.timing:
        out["timing_seconds"] = time.perf_counter() - t0
        out["kernel_backend"] = kernel_backend()
    _emit(out)
    print(report.summary(), file=sys.stderr)
    return 0 if report.passed else 1


# -- catalog ------------------------------------------------------------------

_ATOMS = [
    ("S<m>", "sphere, m >= 1"),
    ("R^<n>", "Euclidean space (contractible)"),
    ("pt", "one point"),
    ("RP3 = SO3", "real projective 3-space, a Lie group"),
    ("T<k>", "k-torus, a Lie group (T1 = S1)"),
    ("SO<m>, 4 <= m <= 10", "Lie group; category from a trusted external table, no ring"),
    ("X x Y, wedge(X, Y, ...), (X)^k", "products, wedges, powers"),
    ("F(G x R^n, 2)", "ordered pairs of distinct points, G a Lie group atom"),
]

_RINGS = ["S<m>", "pt", "exterior(x:1, y:3)", "trunc(a:1, h=4)", "tensor(R1, R2)", "wedge(R1, R2)", "suffix @Q or @Z2"]

_PLANNERS = ["circle", "sphere:2", "sphere:3", "odd-sphere:3", "wedge:1", "wedge:2", "cylinder-config:1", "cylinder-config:2"]


def cmd_catalog(args) -> int:
    planners = []
    for name in _PLANNERS:
        P = planner_by_name(name)
        planners.append(P.describe() | {"rule_count": len(P)})
    out = {
        "schema_version": SCHEMA_VERSION,
        "space_grammar": [{"syntax": s, "meaning": m} for s, m in _ATOMS],
        "so_category": {f"SO{m}": so_category(m) for m in range(2, 11)},
        "ring_grammar": _RINGS,
        "planner_names": list(PLANNER_NAMES),
        "planners": planners,
        "default_fields": os.environ.get(FIELDS_ENV) or DEFAULT_FIELDS,
    }
    if args.json:
        _emit(out)
        return 0
    print("spaces:")
    for s, m in _ATOMS:
        print(f"  {s:<32} {m}")
    print("rings:  " + ", ".join(_RINGS))
    print("SO(m) category table: " + ", ".join(f"{k}={v}" for k, v in out["so_category"].items()))
    print("planners:")
    for p in planners:
        flag = "reserved" if p["reserved"] else "not reserved"
        print(f"  {p['planner']:<20} {p['rule_count']} rules, {flag}")
        for r in p["rules"]:
            print(f"      {r['index']}: {r['domain']}")
    return 0


# -- entry --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tclab", description="LS category and topological complexity toolkit")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="{invariants,ring,plan,verify,catalog}")

    p = sub.add_parser("invariants", help="bounds on cat, TC and TC^M of a space expression, with certificates")
    p.add_argument("expr", help='e.g. "F(S1 x R^2, 2)"')
    p.add_argument("--fields", help=f"comma-separated fields (default ${FIELDS_ENV} or {DEFAULT_FIELDS})")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("ring", help="cup-length and zero-divisor cup-length of a ring presentation")
    p.add_argument("text", help='e.g. "trunc(a:1, h=4) @Z2"')
    p.add_argument("--field", help="field when the text has no @ suffix (default Q)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_ring)

    p = sub.add_parser("plan", help="plan one motion; prints path JSON")
    p.add_argument("space", help=", ".join(PLANNER_NAMES))
    p.add_argument("start", help='coordinates, e.g. "0,0,1" or "0deg:-1,180deg:1"')
    p.add_argument("goal")
    p.add_argument("--resolution", type=int, default=32, help="number of time steps in the output")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("verify", help="statistically verify a planner; prints report JSON")
    p.add_argument("space", help=", ".join(PLANNER_NAMES))
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--time-steps", type=int, default=64)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="add wall-clock time to the report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", help="list supported spaces, rings and planners")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tclab {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
