"""Space expressions: syntax tree, parser, homotopy normal form, cohomology.

Grammar (whitespace- and case-insensitive)::

    expr    := term (('x' | '*' | '×') term)*
    term    := primary ('^' INT)?
    primary := atom | 'wedge' '(' expr (',' expr)* ')' | 'F' '(' expr ',' '2' ')' | '(' expr ')'
    atom    := 'S'INT | 'R^'INT | 'RP3' | 'SO'INT | 'T'INT | 'pt'

``SO3`` is an alias of ``RP3``.  ``SOm`` for 4 <= m <= 10 is accepted with a
category value taken from a registry and no cohomology ring.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache, reduce

from .algebra import (
    GradedAlgebra,
    field_algebra,
    make_exterior,
    make_sphere,
    make_truncated_polynomial,
    tensor_product,
    wedge_sum,
)
from .linalg import Field

__all__ = [
    "SpaceExpr",
    "Sphere",
    "Euclidean",
    "Point",
    "GroupAtom",
    "Product",
    "Wedge",
    "Config2",
    "SpaceSyntaxError",
    "SpaceSemanticError",
    "MissingRingError",
    "parse",
    "normalize",
    "cohomology",
    "so_category",
    "product",
    "wedge",
]


class SpaceSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class SpaceSemanticError(ValueError):
    pass


class MissingRingError(LookupError):
    pass


class SpaceExpr:
    """Base class; subclasses are frozen dataclasses, so nodes hash structurally."""

    @property
    def dim(self) -> int:
        raise NotImplementedError

    @property
    def children(self) -> tuple["SpaceExpr", ...]:
        return ()

    def __str__(self):
        return render(self)


@dataclass(frozen=True, repr=False)
class Sphere(SpaceExpr):
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise SpaceSemanticError("sphere dimension must be at least 1")

    @property
    def dim(self):
        return self.m

    def __repr__(self):
        return f"Sphere({self.m})"


@dataclass(frozen=True, repr=False)
class Euclidean(SpaceExpr):
    n: int

    @property
    def dim(self):
        return self.n

    def __repr__(self):
        return f"Euclidean({self.n})"


@dataclass(frozen=True, repr=False)
class Point(SpaceExpr):
    @property
    def dim(self):
        return 0

    def __repr__(self):
        return "Point()"


@dataclass(frozen=True, repr=False)
class GroupAtom(SpaceExpr):
    """A compact connected Lie group with a known ring or a registry category."""

    name: str
    manifold_dim: int
    lie: bool = True
    cat_external: int | None = None

    @property
    def dim(self):
        return self.manifold_dim

    def __repr__(self):
        return f"GroupAtom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Product(SpaceExpr):
    factors: tuple[SpaceExpr, ...]

    @property
    def children(self):
        return self.factors

    @property
    def dim(self):
        return sum(c.dim for c in self.factors)

    def __repr__(self):
        return f"Product({', '.join(map(repr, self.factors))})"


@dataclass(frozen=True, repr=False)
class Wedge(SpaceExpr):
    summands: tuple[SpaceExpr, ...]

    @property
    def children(self):
        return self.summands

    @property
    def dim(self):
        return max(c.dim for c in self.summands)

    def __repr__(self):
        return f"Wedge({', '.join(map(repr, self.summands))})"


@dataclass(frozen=True, repr=False)
class Config2(SpaceExpr):
    """Ordered pairs of distinct points of ``inner``."""

    inner: SpaceExpr

    def __post_init__(self):
        _split_group_factor(self.inner)

    @property
    def children(self):
        return (self.inner,)

    @property
    def dim(self):
        return 2 * self.inner.dim

    def __repr__(self):
        return f"Config2({self.inner!r})"


# -- atoms ------------------------------------------------------------------

RP3 = GroupAtom("RP3", 3)


def so_category(m: int) -> int:
    """Category of SO(m) for m <= 10 (normalized so a point has category 1).

    Equals 1 + sum over odd i < m of (2^k_i - 1), where 2^k_i is the least
    power of two with i * 2^k_i >= m; this is the Z/2 cup-length of SO(m) plus
    one, known to be sharp in this range.
    """
    if not 2 <= m <= 10:
        raise ValueError("registry covers SO(m) for 2 <= m <= 10")
    total = 0
    for i in range(1, m, 2):
        p = 1
        while i * p < m:
            p *= 2
        total += p - 1
    return total + 1


def _atom(kind: str, k: int | None, pos: int) -> SpaceExpr:
    if kind == "s":
        if k < 1:
            raise SpaceSyntaxError("sphere dimension must be at least 1", pos)
        return Sphere(k)
    if kind == "r":
        return Euclidean(k) if k > 0 else Point()
    if kind == "rp":
        if k != 3:
            raise SpaceSyntaxError("only RP3 is available", pos)
        return RP3
    if kind == "so":
        if k == 2:
            return Sphere(1)
        if k == 3:
            return RP3
        if 4 <= k <= 10:
            return GroupAtom(f"SO{k}", k * (k - 1) // 2, True, so_category(k))
        raise SpaceSyntaxError("SO<m> is available for 2 <= m <= 10", pos)
    if kind == "t":
        if k < 1:
            raise SpaceSyntaxError("torus rank must be at least 1", pos)
        return Sphere(1) if k == 1 else GroupAtom(f"T{k}", k)
    if kind == "pt":
        return Point()
    raise AssertionError(kind)


# -- parser -----------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<rp>rp(?P<rpk>\d+))|(?P<so>so(?P<sok>\d+))|(?P<wedge>wedge)|(?P<pt>pt)"
    r"|(?P<s>s(?P<sk>\d+))|(?P<r>r\^(?P<rk>\d+))|(?P<t>t(?P<tk>\d+))"
    r"|(?P<f>f(?=\s*\())|(?P<times>x|\*|×)|(?P<int>\d+)|(?P<punct>[(),^])"
)


def _tokenize(text: str):
    low = text.lower()
    out = []
    i = 0
    while i < len(low):
        if low[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(low, i)
        if not m:
            raise SpaceSyntaxError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        for name in ("rp", "so", "s", "r", "t"):
            if m.group(name):
                kind = name
                value = int(m.group(name + "k"))
                break
        else:
            value = m.group(0)
            if kind == "int":
                value = int(value)
        out.append((kind, value, i))
        i = m.end()
    out.append(("end", None, len(text)))
    return out


def parse(text: str) -> SpaceExpr:
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos]

    def take(kind, value=None):
        nonlocal pos
        k, v, p = toks[pos]
        if k != kind or (value is not None and v != value):
            want = value if value is not None else kind
            got = "end of input" if k == "end" else repr(v)
            raise SpaceSyntaxError(f"expected {want!r}, got {got}", p)
        pos += 1
        return v, p

    def expr():
        parts = [term()]
        while peek()[0] == "times":
            take("times")
            parts.append(term())
        return parts[0] if len(parts) == 1 else Product(tuple(parts))

    def term():
        node = primary()
        if peek()[:2] == ("punct", "^"):
            take("punct", "^")
            k, p = take("int")
            if k < 1:
                raise SpaceSyntaxError("power must be positive", p)
            node = node if k == 1 else Product((node,) * k)
        return node

    def primary():
        kind, value, p = peek()
        if kind in ("s", "r", "rp", "so", "t", "pt"):
            take(kind)
            return _atom(kind, value, p)
        if kind == "wedge":
            take("wedge")
            take("punct", "(")
            items = [expr()]
            while peek()[:2] == ("punct", ","):
                take("punct", ",")
                items.append(expr())
            take("punct", ")")
            return items[0] if len(items) == 1 else Wedge(tuple(items))
        if kind == "f":
            take("f")
            take("punct", "(")
            inner = expr()
            take("punct", ",")
            k, kp = take("int")
            if k != 2:
                raise SpaceSyntaxError("only 2-point configuration spaces are supported", kp)
            take("punct", ")")
            try:
                return Config2(inner)
            except SpaceSemanticError as exc:
                raise SpaceSemanticError(f"{exc} (configuration space at position {p})") from None
        if (kind, value) == ("punct", "("):
            take("punct", "(")
            node = expr()
            take("punct", ")")
            return node
        got = "end of input" if kind == "end" else repr(value)
        raise SpaceSyntaxError(f"unexpected {got}", p)

    node = expr()
    take("end")
    return node


# -- rendering --------------------------------------------------------------


def render(e: SpaceExpr) -> str:
    if isinstance(e, Sphere):
        return f"S{e.m}"
    if isinstance(e, Euclidean):
        return f"R^{e.n}"
    if isinstance(e, Point):
        return "pt"
    if isinstance(e, GroupAtom):
        return e.name
    if isinstance(e, Product):
        return " x ".join(f"({render(c)})" if isinstance(c, Product) else render(c) for c in e.factors)
    if isinstance(e, Wedge):
        return f"wedge({', '.join(render(c) for c in e.summands)})"
    if isinstance(e, Config2):
        return f"F({render(e.inner)}, 2)"
    raise TypeError(e)


# -- normal form ------------------------------------------------------------


def _is_group(e: SpaceExpr) -> bool:
    return (isinstance(e, GroupAtom) and e.lie) or (isinstance(e, Sphere) and e.m in (1, 3))


def _split_group_factor(inner: SpaceExpr) -> tuple[SpaceExpr, int]:
    """Return ``(G, n)`` for an inner space ``G`` or ``G x R^n``."""
    factors = inner.factors if isinstance(inner, Product) else (inner,)
    groups = [f for f in factors if not isinstance(f, (Euclidean, Point))]
    if len(groups) != 1 or not _is_group(groups[0]):
        raise SpaceSemanticError(
            f"configuration spaces need a connected Lie group times R^n, got {render(inner)}"
        )
    n = sum(f.n for f in factors if isinstance(f, Euclidean))
    return groups[0], n


def product(*factors: SpaceExpr) -> SpaceExpr:
    """Flattened product with contractible factors removed."""
    flat = []
    for f in factors:
        if isinstance(f, Product):
            flat.extend(f.factors)
        elif not isinstance(f, (Point, Euclidean)):
            flat.append(f)
    if not flat:
        return Point()
    return flat[0] if len(flat) == 1 else Product(tuple(flat))


def wedge(*summands: SpaceExpr) -> SpaceExpr:
    """Flattened wedge with point summands removed."""
    flat = []
    for s in summands:
        if isinstance(s, Wedge):
            flat.extend(s.summands)
        elif not isinstance(s, (Point, Euclidean)):
            flat.append(s)
    if not flat:
        return Point()
    return flat[0] if len(flat) == 1 else Wedge(tuple(flat))


def _normalize_once(e: SpaceExpr) -> SpaceExpr:
    if isinstance(e, Config2):
        G, n = _split_group_factor(e.inner)
        if n == 0:
            if isinstance(G, Sphere):
                # S^m minus a point is contractible
                return G
            raise SpaceSemanticError(f"no homotopy normal form for F({render(G)}, 2) without a Euclidean factor")
        return product(G, wedge(G, Sphere(G.dim + n - 1)))
    if isinstance(e, Product):
        return product(*map(_normalize_once, e.factors))
    if isinstance(e, Wedge):
        return wedge(*map(_normalize_once, e.summands))
    if isinstance(e, Euclidean):
        return Point()
    return e


@lru_cache(maxsize=None)
def normalize(e: SpaceExpr) -> SpaceExpr:
    """Rewrite to a homotopy-equivalent expression with no F(-,2) or R^n nodes."""
    while True:
        nxt = _normalize_once(e)
        if nxt == e:
            return e
        e = nxt


# -- cohomology -------------------------------------------------------------


@lru_cache(maxsize=None)
def _atom_ring(e: SpaceExpr, field: Field) -> GradedAlgebra:
    if isinstance(e, Sphere):
        return make_sphere(e.m, field)
    if isinstance(e, Point):
        return field_algebra(field)
    if isinstance(e, GroupAtom):
        if e.name == "RP3":
            if field.char == 2:
                return make_truncated_polynomial(1, 4, field, "a")
            return make_exterior([3], field, ["x3"])
        if e.name.startswith("T"):
            k = int(e.name[1:])
            return make_exterior([1] * k, field, [f"t{i}" for i in range(1, k + 1)])
    raise MissingRingError(f"no cohomology ring registered for {render(e)} over {field.name}")


@lru_cache(maxsize=None)
def cohomology(e: SpaceExpr, field: Field) -> GradedAlgebra:
    """Cohomology ring of a normalized expression (Kunneth for products)."""
    if isinstance(e, (Config2, Euclidean)):
        raise SpaceSemanticError("cohomology expects a normalized expression")
    if isinstance(e, Product):
        ring = reduce(tensor_product, (cohomology(c, field) for c in e.factors))
    elif isinstance(e, Wedge):
        ring = reduce(wedge_sum, (cohomology(c, field) for c in e.summands))
    else:
        return _atom_ring(e, field)
    return GradedAlgebra(ring.field, ring.degrees, ring.labels, ring.table, render(e))
