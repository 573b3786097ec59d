"""Interval propagation for cat, TC and monoidal TC over space expressions.

Each node of a normalized expression carries three integer intervals.  Rules
only ever raise a lower end or lower an upper end, and every change is logged
as a :class:`Certificate`.  Rules run round-robin in a fixed order until no
interval moves, so certificate chains are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Sequence

from .invariants import cup_length, zcl
from .linalg import Field, Q, Z2
from .spaces import (
    GroupAtom,
    MissingRingError,
    Point,
    Product,
    SpaceExpr,
    Sphere,
    Wedge,
    cohomology,
    normalize,
    product,
    render,
    wedge,
)

__all__ = [
    "Interval",
    "Certificate",
    "InvariantBounds",
    "Rule",
    "RULES",
    "EngineError",
    "Engine",
    "bounds",
    "explain",
]

QUANTITIES = ("cat", "tc", "tcm")
_DISPLAY = {"cat": "cat", "tc": "TC", "tcm": "TC^M"}


class EngineError(RuntimeError):
    pass


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int | None  # None is unbounded

    @property
    def exact(self) -> bool:
        return self.hi is not None and self.lo == self.hi

    @property
    def value(self) -> int | None:
        return self.lo if self.exact else None

    def __str__(self):
        if self.exact:
            return f"{self.lo} (exact)"
        return f"[{self.lo}, {'inf' if self.hi is None else self.hi}]"

    def to_json(self):
        return {"lo": self.lo, "hi": self.hi, "exact": self.exact}


@dataclass(frozen=True)
class Certificate:
    rule: str
    node: str
    quantity: str
    side: str
    value: int
    anchor: str
    premises: tuple[tuple[str, object], ...]

    def __str__(self):
        rel = ">=" if self.side == "lo" else "<="
        prem = ", ".join(f"{k}={v}" for k, v in self.premises)
        return f"{self.rule:<4} {_DISPLAY[self.quantity]}({self.node}) {rel} {self.value}   [{self.anchor}]" + (
            f"  with {prem}" if prem else ""
        )

    def to_json(self):
        return {
            "rule": self.rule,
            "node": self.node,
            "quantity": self.quantity,
            "side": self.side,
            "value": self.value,
            "anchor": self.anchor,
            "premises": {k: v for k, v in self.premises},
        }


@dataclass(frozen=True)
class InvariantBounds:
    expr: str
    normal_form: str
    cat: Interval
    tc: Interval
    tcm: Interval | None  # suppressed unless the expression is already normal
    certificates: tuple[Certificate, ...] = dc_field(repr=False)
    fields: tuple[str, ...] = ()

    def to_json(self):
        return {
            "expr": self.expr,
            "normal_form": self.normal_form,
            "cat": self.cat.to_json(),
            "tc": self.tc.to_json(),
            "tcm": None if self.tcm is None else self.tcm.to_json(),
            "fields": list(self.fields),
            "certificates": [c.to_json() for c in self.certificates],
        }


# (quantity, side, value, premises)
Update = tuple[str, str, int, dict]


@dataclass(frozen=True)
class Rule:
    id: str
    anchor: str
    apply: Callable[["Engine", SpaceExpr], Iterable[Update]] = dc_field(repr=False)


# -- rules ------------------------------------------------------------------


def _r_registry(eng, node):
    if isinstance(node, GroupAtom) and node.cat_external is not None:
        c = node.cat_external
        yield "cat", "lo", c, {"registry": node.name}
        yield "cat", "hi", c, {"registry": node.name}


def _r1(eng, node):
    for f in eng.fields_with_ring(node):
        c = eng.cup(node, f)
        yield "cat", "lo", 1 + c, {f"cup_{f.name}": c}


def _r2(eng, node):
    for f in eng.fields_with_ring(node):
        z = eng.zcl(node, f)
        yield "tc", "lo", 1 + z, {f"zcl_{f.name}": z}


def _r3(eng, node):
    if isinstance(node, Product):
        his = [eng.get(c, "cat").hi for c in node.factors]
        if None not in his:
            prem = {f"cat({render(c)})": h for c, h in zip(node.factors, his)}
            yield "cat", "hi", sum(his) - (len(his) - 1), prem


def _r4(eng, node):
    if isinstance(node, Wedge):
        cats = [eng.get(c, "cat") for c in node.summands]
        yield "cat", "lo", max(i.lo for i in cats), {}
        if all(i.hi is not None for i in cats):
            prem = {f"cat({render(c)})": i.hi for c, i in zip(node.summands, cats)}
            yield "cat", "hi", max(i.hi for i in cats), prem


def _r5(eng, node):
    if isinstance(node, Sphere):
        yield "cat", "lo", 2, {}
        yield "cat", "hi", 2, {}
    elif isinstance(node, Point):
        for q in QUANTITIES:
            yield q, "lo", 1, {}
            yield q, "hi", 1, {}


def _r6(eng, node):
    c = eng.get(node, "cat").hi
    if c is not None:
        yield "tc", "hi", 2 * c - 1, {"cat": c}


def _r7(eng, node):
    if isinstance(node, GroupAtom) and node.lie:
        cat, tc = eng.get(node, "cat"), eng.get(node, "tc")
        yield "tc", "lo", cat.lo, {"cat.lo": cat.lo}
        if cat.hi is not None:
            yield "tc", "hi", cat.hi, {"cat.hi": cat.hi}
        if tc.hi is not None:
            yield "tcm", "hi", tc.hi, {"TC.hi": tc.hi}


def _r8(eng, node):
    if isinstance(node, Sphere):
        v = 2 if node.m % 2 else 3
        for q in ("tc", "tcm"):
            yield q, "lo", v, {"m": node.m}
            yield q, "hi", v, {"m": node.m}


def _r9(eng, node):
    cat, tc, tcm = (eng.get(node, q) for q in QUANTITIES)
    yield "tc", "lo", cat.lo, {"cat.lo": cat.lo}
    yield "tcm", "lo", tc.lo, {"TC.lo": tc.lo}
    yield "tc", "lo", tcm.lo - 1, {"TC^M.lo": tcm.lo}
    if tc.hi is not None:
        yield "cat", "hi", tc.hi, {"TC.hi": tc.hi}
        yield "tcm", "hi", tc.hi + 1, {"TC.hi": tc.hi}
    if tcm.hi is not None:
        yield "tc", "hi", tcm.hi, {"TC^M.hi": tcm.hi}


def _r10(eng, node):
    if not isinstance(node, Wedge):
        return
    X, Y = node.summands[0], wedge(*node.summands[1:])
    tx, ty = eng.get(X, "tc").value, eng.get(Y, "tc").value
    cxy = eng.get(product(X, Y), "cat").value
    if None in (tx, ty, cxy):
        return
    top = max(tx, ty, cxy)
    if top >= node.dim + 2:
        prem = {f"TC({render(X)})": tx, f"TC({render(Y)})": ty, f"cat({render(X)} x {render(Y)})": cxy}
        yield "tc", "lo", top, prem
        yield "tc", "hi", top, prem


def _r11(eng, node):
    if not isinstance(node, Wedge):
        return
    for k in reversed(range(len(node.summands))):
        S = node.summands[k]
        if not isinstance(S, Sphere):
            continue
        X = wedge(*(node.summands[:k] + node.summands[k + 1 :]))
        vals = {eng.get(X, q).value for q in QUANTITIES}
        if len(vals) != 1 or None in vals:
            continue
        c = vals.pop()
        cxs = eng.get(product(X, S), "cat").value
        if cxs != c + 1:
            continue
        prem = {f"cat=TC=TC^M({render(X)})": c, f"cat({render(X)} x {render(S)})": cxs}
        for q in ("tc", "tcm"):
            yield q, "lo", c + 1, prem
            yield q, "hi", c + 1, prem
        return


def _r12(eng, node):
    if not isinstance(node, Product):
        return
    tcs = [eng.get(c, "tc").value for c in node.factors]
    if None in tcs:
        return
    for f in eng.fields:
        try:
            sharp = all(t == 1 + eng.zcl(c, f) for c, t in zip(node.factors, tcs))
        except MissingRingError:
            continue
        if sharp:
            prem = {f"TC({render(c)})": t for c, t in zip(node.factors, tcs)}
            prem["field"] = f.name
            yield "tc", "hi", sum(tcs) - (len(tcs) - 1), prem
            return


def _r13(eng, node):
    parts = node.summands if isinstance(node, Wedge) else (node,)
    if all(isinstance(p, Sphere) for p in parts):
        v = 2 if len(parts) == 1 and parts[0].m % 2 else 3
        yield "tc", "lo", v, {"spheres": ",".join(render(p) for p in parts)}


def _r14(eng, node):
    yield "cat", "hi", node.dim + 1, {"dim": node.dim}


RULES: tuple[Rule, ...] = (
    Rule("EXT", "registry value for cat of SO(m)", _r_registry),
    Rule("R1", "cat(X) >= 1 + cup_K(X)", _r1),
    Rule("R2", "TC(X) >= 1 + zcl_K(X)", _r2),
    Rule("R3", "cat(X x Y) <= cat X + cat Y - 1", _r3),
    Rule("R4", "cat(X v Y) = max(cat X, cat Y)", _r4),
    Rule("R5", "cat(S^m) = 2, a point has all invariants 1", _r5),
    Rule("R6", "TC(X) <= 2 cat(X) - 1", _r6),
    Rule("R7", "connected Lie group: TC = cat and TC^M = TC", _r7),
    Rule("R8", "TC(S^m) = TC^M(S^m) = 2 for m odd, 3 for m even", _r8),
    Rule("R9", "cat <= TC <= TC^M <= TC + 1", _r9),
    Rule("R10", "TC(X v Y) = max(TC X, TC Y, cat(X x Y)) when that is >= dim + 2", _r10),
    Rule("R11", "TC(X v S^m) = TC^M(X v S^m) = TC(X) + 1 when cat=TC=TC^M on X and cat(X x S^m) = cat X + 1", _r11),
    Rule("R12", "TC(X x Y) <= TC X + TC Y - 1 when both are 1 + zcl_K over one field", _r12),
    Rule("R13", "wedge of spheres: TC = 2 for one odd sphere, 3 otherwise", _r13),
    Rule("R14", "cat(X) <= dim X + 1", _r14),
)


# -- engine -----------------------------------------------------------------


class Engine:
    def __init__(self, rules: Sequence[Rule] | None = None, fields: Sequence[Field] = (Q, Z2), max_rounds: int = 64):
        self.rules = tuple(RULES if rules is None else rules)
        self.fields = tuple(fields)
        self.max_rounds = max_rounds
        self._state: dict[SpaceExpr, dict[str, list]] = {}
        self.log: list[Certificate] = []

    def without(self, rule_id: str) -> "Engine":
        return Engine([r for r in self.rules if r.id != rule_id], self.fields, self.max_rounds)

    # ring access
    def fields_with_ring(self, node) -> list[Field]:
        out = []
        for f in self.fields:
            try:
                cohomology(node, f)
            except MissingRingError:
                continue
            out.append(f)
        return out

    def cup(self, node, f: Field) -> int:
        return cup_length(cohomology(node, f))

    def zcl(self, node, f: Field) -> int:
        return zcl(cohomology(node, f))

    # intervals
    def get(self, node: SpaceExpr, q: str) -> Interval:
        self.solve(node)
        lo, hi = self._state[node][q]
        return Interval(lo, hi)

    def _tighten(self, node, rule: Rule, q: str, side: str, value: int, premises: dict) -> bool:
        cur = self._state[node][q]
        if side == "lo":
            if value <= cur[0]:
                return False
            cur[0] = value
        else:
            if cur[1] is not None and value >= cur[1]:
                return False
            cur[1] = value
        self.log.append(
            Certificate(rule.id, render(node), q, side, value, rule.anchor, tuple(premises.items()))
        )
        if cur[1] is not None and cur[0] > cur[1]:
            raise EngineError(f"{rule.id} crossed bounds for {_DISPLAY[q]}({render(node)}): [{cur[0]}, {cur[1]}]")
        return True

    def solve(self, node: SpaceExpr) -> None:
        if node in self._state:
            return
        for c in node.children:
            self.solve(c)
        self._state[node] = {q: [1, None] for q in QUANTITIES}
        for _ in range(self.max_rounds):
            changed = False
            for rule in self.rules:
                for q, side, value, prem in list(rule.apply(self, node)):
                    changed |= self._tighten(node, rule, q, side, value, prem)
            if not changed:
                return
        raise EngineError(f"no fixpoint for {render(node)} after {self.max_rounds} rounds")


def bounds(e: SpaceExpr, fields: Sequence[Field] = (Q, Z2), engine: Engine | None = None) -> InvariantBounds:
    """Run the rule set to a fixpoint on the normal form of ``e``.

    TC^M is reported only when ``e`` is already in normal form, since monoidal
    TC is not known to be a homotopy invariant.
    """
    eng = engine if engine is not None else Engine(fields=fields)
    nf = normalize(e)
    start = len(eng.log)
    eng.solve(nf)
    return InvariantBounds(
        expr=render(e),
        normal_form=render(nf),
        cat=eng.get(nf, "cat"),
        tc=eng.get(nf, "tc"),
        tcm=eng.get(nf, "tcm") if nf == e else None,
        certificates=tuple(eng.log[start:]),
        fields=tuple(f.name for f in eng.fields),
    )


def explain(e: SpaceExpr, b: InvariantBounds) -> str:
    lines = []
    if b.normal_form != b.expr:
        lines.append(f"rewrite  {b.expr}  ~>  {b.normal_form}")
    lines.extend(str(c) for c in b.certificates)
    lines.append(f"cat  = {b.cat}")
    lines.append(f"TC   = {b.tc}")
    lines.append("TC^M = " + (str(b.tcm) if b.tcm is not None else "not reported (expression is not in normal form)"))
    return "\n".join(lines)
