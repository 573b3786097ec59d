"""Finite-dimensional graded-commutative algebras given by structure constants.

A :class:`GradedAlgebra` stores a homogeneous basis (index 0 is the unit) and
the full multiplication table on basis pairs.  Koszul signs are fixed when a
table is built; :meth:`GradedAlgebra.mul_vec` only ever reads the table.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .linalg import Field, FieldMismatchError, Q, Z2

__all__ = [
    "GradedAlgebra",
    "Element",
    "InconsistentPresentationError",
    "ValidationReport",
    "make_truncated_polynomial",
    "make_exterior",
    "make_sphere",
    "field_algebra",
    "tensor_product",
    "tensor_power",
    "tensor_index",
    "wedge_sum",
    "betti",
    "validate",
    "parse_ring",
]


class InconsistentPresentationError(ValueError):
    pass


Table = Mapping[tuple[int, int], Mapping[int, object]]


@dataclass(frozen=True, eq=False)
class GradedAlgebra:
    field: Field
    degrees: tuple[int, ...]
    labels: tuple[str, ...]
    table: Table = dc_field(repr=False)
    name: str = ""

    def __post_init__(self):
        if len(self.degrees) != len(self.labels):
            raise ValueError("degrees and labels differ in length")
        if not self.degrees or self.degrees[0] != 0:
            raise ValueError("basis must start with the degree-0 unit")
        if list(self.degrees) != sorted(self.degrees):
            raise ValueError("basis must be ordered by degree")

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @property
    def top_degree(self) -> int:
        return self.degrees[-1]

    def __repr__(self):
        return f"GradedAlgebra({self.name or '?'}, {self.field}, betti={betti(self)})"

    # -- elements ---------------------------------------------------------
    def basis_element(self, i: int) -> "Element":
        return Element(self, {i: self.field.one()})

    def by_label(self, label: str) -> "Element":
        return self.basis_element(self.labels.index(label))

    def unit(self) -> "Element":
        return self.basis_element(0)

    def zero(self) -> "Element":
        return Element(self, {})

    def element(self, coeffs: Mapping[int, object]) -> "Element":
        f = self.field
        return Element(self, {i: f.coerce(c) for i, c in coeffs.items() if f.coerce(c) != 0})

    def gens(self) -> list["Element"]:
        return [self.basis_element(i) for i in range(self.dim)]

    def mul_basis(self, i: int, j: int) -> Mapping[int, object]:
        return self.table.get((i, j), {})

    def mul_vec(self, u: Mapping[int, object], v: Mapping[int, object]) -> dict[int, object]:
        """Product of two sparse coefficient maps (raw field values)."""
        f = self.field
        out: dict[int, object] = {}
        for i, a in u.items():
            for j, b in v.items():
                prod = self.table.get((i, j))
                if not prod:
                    continue
                ab = f.mul(a, b)
                for k, c in prod.items():
                    out[k] = f.add(out.get(k, f.zero()), f.mul(ab, c))
        return {k: c for k, c in out.items() if c != 0}


@dataclass(frozen=True, eq=False)
class Element:
    parent: GradedAlgebra
    coeffs: Mapping[int, object]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", {k: c for k, c in self.coeffs.items() if c != 0})

    def _check(self, other: "Element"):
        if other.parent is not self.parent:
            raise ValueError("elements belong to different algebras")

    def __mul__(self, other):
        if isinstance(other, Element):
            self._check(other)
            return Element(self.parent, self.parent.mul_vec(self.coeffs, other.coeffs))
        f = self.parent.field
        s = f.coerce(other)
        return Element(self.parent, {k: f.mul(c, s) for k, c in self.coeffs.items()})

    def __rmul__(self, other):
        f = self.parent.field
        s = f.coerce(other)
        return Element(self.parent, {k: f.mul(s, c) for k, c in self.coeffs.items()})

    def __add__(self, other: "Element"):
        self._check(other)
        f = self.parent.field
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = f.add(out.get(k, f.zero()), c)
        return Element(self.parent, out)

    def __neg__(self):
        f = self.parent.field
        return Element(self.parent, {k: f.neg(c) for k, c in self.coeffs.items()})

    def __sub__(self, other: "Element"):
        return self + (-other)

    def __pow__(self, n: int):
        out = self.parent.unit()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.parent is other.parent and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degrees(self) -> set[int]:
        return {self.parent.degrees[k] for k in self.coeffs}

    def vector(self) -> list:
        f = self.parent.field
        v = [f.zero()] * self.parent.dim
        for k, c in self.coeffs.items():
            v[k] = c
        return v

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        one = self.parent.field.one()
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            lab = self.parent.labels[k]
            parts.append(lab if c == one else f"{c}*{lab}")
        return " + ".join(parts)


def _freeze(table: dict) -> dict:
    return {k: dict(v) for k, v in table.items() if v}


# ---------------------------------------------------------------------------
# constructors


def field_algebra(field: Field = Q) -> GradedAlgebra:
    """The ground field as an algebra: cohomology of a point."""
    return GradedAlgebra(field, (0,), ("1",), {(0, 0): {0: field.one()}}, "pt")


def make_truncated_polynomial(gen_degree: int, height: int, field: Field = Z2, name: str = "a") -> GradedAlgebra:
    """``K[x]/(x^height)`` with ``deg x = gen_degree``."""
    if gen_degree < 1:
        raise ValueError("generator degree must be positive")
    if height < 2:
        raise ValueError("height must be at least 2")
    if gen_degree % 2 == 1 and field.char != 2 and height > 2:
        raise InconsistentPresentationError(
            f"odd generator in characteristic {field.char} squares to zero; height {height} is impossible"
        )
    degrees = tuple(gen_degree * k for k in range(height))
    labels = tuple("1" if k == 0 else (name if k == 1 else f"{name}^{k}") for k in range(height))
    one = field.one()
    table = {(i, j): {i + j: one} for i in range(height) for j in range(height) if i + j < height}
    return GradedAlgebra(field, degrees, labels, _freeze(table), f"{name}[{gen_degree}]/({name}^{height})")


def make_sphere(m: int, field: Field = Q, name: str | None = None) -> GradedAlgebra:
    """H*(S^m) = K[x]/(x^2), deg x = m."""
    alg = make_truncated_polynomial(m, 2, field, name or f"x{m}")
    return GradedAlgebra(field, alg.degrees, alg.labels, alg.table, f"S{m}")


def make_exterior(generator_degrees: Sequence[int], field: Field = Q, names: Sequence[str] | None = None) -> GradedAlgebra:
    """Exterior algebra on odd-degree generators."""
    degs = list(generator_degrees)
    if any(d < 1 or d % 2 == 0 for d in degs):
        raise ValueError(f"exterior generators must have odd positive degree, got {degs}")
    n = len(degs)
    names = list(names) if names is not None else ([f"x{d}" for d in degs] if len(set(degs)) == n else [f"x{i}" for i in range(n)])
    subsets = [s for r in range(n + 1) for s in itertools.combinations(range(n), r)]
    subsets.sort(key=lambda s: (sum(degs[i] for i in s), len(s), s))
    index = {s: k for k, s in enumerate(subsets)}
    degrees = tuple(sum(degs[i] for i in s) for s in subsets)
    labels = tuple("".join(names[i] for i in s) or "1" for s in subsets)
    table = {}
    for s, t in itertools.product(subsets, repeat=2):
        if set(s) & set(t):
            continue
        inversions = sum(1 for a in s for b in t if a > b)
        merged = tuple(sorted(s + t))
        table[(index[s], index[t])] = {index[merged]: field.sign(inversions % 2 == 1)}
    return GradedAlgebra(field, degrees, labels, _freeze(table), f"Λ({','.join(names)})")


def tensor_index(A: GradedAlgebra, B: GradedAlgebra) -> list[tuple[int, int]]:
    """Basis order of ``tensor_product(A, B)`` as (index in A, index in B) pairs."""
    return _ordered_pairs(A.degrees, B.degrees)


def _ordered_pairs(da: Sequence[int], db: Sequence[int]) -> list[tuple[int, int]]:
    pairs = [(i, j) for i in range(len(da)) for j in range(len(db))]
    pairs.sort(key=lambda ij: (da[ij[0]] + db[ij[1]], ij[0], ij[1]))
    return pairs


def _pair_label(la: str, lb: str) -> str:
    return f"{la}⊗{lb}"


def tensor_product(A: GradedAlgebra, B: GradedAlgebra) -> GradedAlgebra:
    """Koszul-signed tensor product: (u⊗v)(u'⊗v') = (-1)^{|v||u'|} uu'⊗vv'."""
    if A.field != B.field:
        raise FieldMismatchError(f"{A.field} vs {B.field}")
    f = A.field
    pairs = _ordered_pairs(A.degrees, B.degrees)
    index = {p: k for k, p in enumerate(pairs)}
    degrees = tuple(A.degrees[i] + B.degrees[j] for i, j in pairs)
    labels = tuple(_pair_label(A.labels[i], B.labels[j]) for i, j in pairs)
    table = {}
    for (p, (i, j)), (q, (k, l)) in itertools.product(enumerate(pairs), repeat=2):
        left = A.mul_basis(i, k)
        if not left:
            continue
        right = B.mul_basis(j, l)
        if not right:
            continue
        sign = f.sign((B.degrees[j] * A.degrees[k]) % 2 == 1)
        out = {}
        for a, ca in left.items():
            for b, cb in right.items():
                out[index[(a, b)]] = f.mul(sign, f.mul(ca, cb))
        table[(p, q)] = out
    return GradedAlgebra(f, degrees, labels, _freeze(table), f"({A.name}⊗{B.name})")


def tensor_power(A: GradedAlgebra, k: int) -> GradedAlgebra:
    if k < 0:
        raise ValueError("negative tensor power")
    out = field_algebra(A.field)
    for _ in range(k):
        out = A if out.dim == 1 else tensor_product(out, A)
    return out


def wedge_sum(A: GradedAlgebra, B: GradedAlgebra) -> GradedAlgebra:
    """Reduced-cohomology direct sum: shared unit, cross products zero."""
    if A.field != B.field:
        raise FieldMismatchError(f"{A.field} vs {B.field}")
    f = A.field
    entries = [("A", i) for i in range(1, A.dim)] + [("B", j) for j in range(1, B.dim)]
    entries.sort(key=lambda e: ((A if e[0] == "A" else B).degrees[e[1]], e[0], e[1]))
    index = {e: k + 1 for k, e in enumerate(entries)}
    index[("A", 0)] = index[("B", 0)] = 0
    degrees = (0,) + tuple((A if s == "A" else B).degrees[i] for s, i in entries)
    a_labels = set(A.labels[1:])
    labels = ["1"]
    for s, i in entries:
        lab = (A if s == "A" else B).labels[i]
        if s == "B" and lab in a_labels:
            lab = lab + "'"
        labels.append(lab)
    table = {}
    for tag, alg in (("A", A), ("B", B)):
        for (i, j), prod in alg.table.items():
            table[(index[(tag, i)], index[(tag, j)])] = {index[(tag, k)]: c for k, c in prod.items()}
    return GradedAlgebra(f, degrees, tuple(labels), _freeze(table), f"({A.name}∨{B.name})")


def betti(A: GradedAlgebra) -> list[int]:
    out = [0] * (A.top_degree + 1)
    for d in A.degrees:
        out[d] += 1
    return out


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate(A: GradedAlgebra, limit: int = 20) -> ValidationReport:
    """Check degree additivity, unit law, graded commutativity and associativity."""
    f = A.field
    n = A.dim
    bad: list[str] = []
    lab = A.labels

    def note(msg):
        if len(bad) < limit:
            bad.append(msg)

    if A.degrees.count(0) != 1:
        note("more than one basis element in degree 0")
    for (i, j), prod in A.table.items():
        for k in prod:
            if A.degrees[k] != A.degrees[i] + A.degrees[j]:
                note(f"degree: {lab[i]}*{lab[j]} has a term {lab[k]} of degree {A.degrees[k]}")
    one = {0: f.one()}
    for i in range(n):
        e = {i: f.one()}
        if A.mul_vec(one, e) != e or A.mul_vec(e, one) != e:
            note(f"unit: 1*{lab[i]} or {lab[i]}*1 differs from {lab[i]}")
    for i in range(n):
        for j in range(i, n):
            ij = A.mul_vec({i: f.one()}, {j: f.one()})
            ji = A.mul_vec({j: f.one()}, {i: f.one()})
            s = f.sign((A.degrees[i] * A.degrees[j]) % 2 == 1)
            if ij != {k: c for k, c in ((k, f.mul(s, c)) for k, c in ji.items()) if c != 0}:
                note(f"commutativity: pair ({lab[i]}, {lab[j]})")
    for i, j, k in itertools.product(range(n), repeat=3):
        if A.degrees[i] + A.degrees[j] + A.degrees[k] > A.top_degree:
            continue
        ei, ej, ek = ({i: f.one()}, {j: f.one()}, {k: f.one()})
        if A.mul_vec(A.mul_vec(ei, ej), ek) != A.mul_vec(ei, A.mul_vec(ej, ek)):
            note(f"associativity: triple ({lab[i]}, {lab[j]}, {lab[k]})")
    return ValidationReport(bad)


# ---------------------------------------------------------------------------
# ring presentation grammar:  exterior(x:1, y:3) | trunc(a:1, h=4) | sphere(m)
#   | pt | tensor(R, R, ...) | wedge(R, R, ...), with an optional @Q / @Z2 suffix

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9']*)|(?P<op>[(),:=@^]))")


class RingSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise RingSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def parse_ring(text: str, field: Field | None = None) -> GradedAlgebra:
    """Parse a ring presentation; ``field`` is used when no ``@`` suffix is given."""
    body, _, suffix = text.rpartition("@") if "@" in text else (text, "", "")
    if suffix:
        field = Field.parse(suffix)
    field = field or Q
    toks = _tokens(body)
    i = 0

    def peek():
        return toks[i]

    def take(kind=None, value=None):
        nonlocal i
        t = toks[i]
        if (kind and t[0] != kind) or (value and t[1] != value):
            raise RingSyntaxError(f"expected {value or kind}, found {t[1]!r}", t[2])
        i += 1
        return t

    def ring():
        kind, val, pos = take("name")
        key = val.lower()
        if key == "pt":
            return field_algebra(field)
        if re.fullmatch(r"s\d+", key):
            return make_sphere(int(key[1:]), field)
        take("op", "(")
        if key in {"tensor", "wedge"}:
            parts = [ring()]
            while peek()[1] == ",":
                take("op", ",")
                parts.append(ring())
            take("op", ")")
            out = parts[0]
            for p in parts[1:]:
                out = tensor_product(out, p) if key == "tensor" else wedge_sum(out, p)
            return out
        if key == "sphere":
            m = int(take("num")[1])
            take("op", ")")
            return make_sphere(m, field)
        if key in {"exterior", "trunc"}:
            gens, height = [], None
            while True:
                name = take("name")[1]
                if peek()[1] == "=":
                    take("op", "=")
                    if name != "h":
                        raise RingSyntaxError(f"unknown option {name!r}", toks[i - 2][2])
                    height = int(take("num")[1])
                else:
                    take("op", ":")
                    gens.append((name, int(take("num")[1])))
                if peek()[1] == ",":
                    take("op", ",")
                    continue
                take("op", ")")
                break
            if key == "exterior":
                if height is not None:
                    raise RingSyntaxError("exterior takes no height", pos)
                return make_exterior([d for _, d in gens], field, [n for n, _ in gens])
            if len(gens) != 1 or height is None:
                raise RingSyntaxError("trunc needs one generator and h=<height>", pos)
            return make_truncated_polynomial(gens[0][1], height, field, gens[0][0])
        raise RingSyntaxError(f"unknown ring constructor {val!r}", pos)

    out = ring()
    if peek()[0] != "end":
        raise RingSyntaxError(f"trailing input {peek()[1]!r}", peek()[2])
    return out
