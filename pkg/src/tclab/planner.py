"""Cover-based motion planners.

A planner is an ordered list of rules.  Rule ``k`` has an open domain in
``X x X``, given by a margin function that is positive exactly on it, and a
continuous section there returning a path from ``A`` to ``B``.  A query picks
the rule with the largest margin (ties to the lowest index).

Building blocks: great-circle planners on spheres, the 3-rule sphere cover,
straight lines on R^n, a product combinator (rules indexed by i + j), a wedge
planner on S^1 v S^m, transfer along a deformation retraction, and the 4-rule
collision-free planner for two bodies on the cylinder S^1 x R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .geometry import (
    MEMBERSHIP_TOL,
    ConfigCylinder,
    EuclideanSpace,
    GeometricSpace,
    ProductSpace,
    PuncturedCylinder,
    SphereSpace,
    WedgeSpace,
)
from .paths import (
    Concat,
    Constant,
    Geodesic,
    Line,
    Mapped,
    PathFn,
    ProductPath,
    Reverse,
    Semicircle,
    StereoLine,
    Track,
    stereo,
)

__all__ = [
    "PlannerRule",
    "Planner",
    "NotCoveredError",
    "DomainError",
    "InvalidRetractionError",
    "Retraction",
    "sphere_planner",
    "odd_sphere_planner",
    "circle_planner",
    "contractible_planner",
    "product_planner",
    "wedge_planner",
    "retract_transfer",
    "identity_retraction",
    "rhombus_retraction",
    "fold_domination",
    "punctured_cylinder_retraction",
    "config_cylinder_planner",
    "planner_by_name",
    "PLANNER_NAMES",
]


class NotCoveredError(RuntimeError):
    pass


class DomainError(ValueError):
    pass


class InvalidRetractionError(ValueError):
    pass


Margin = Callable[[np.ndarray, np.ndarray], float]
Section = Callable[[np.ndarray, np.ndarray], PathFn]


@dataclass(frozen=True)
class PlannerRule:
    index: int
    description: str
    margin: Margin
    section: Section


class Planner:
    """Immutable after construction; safe to query concurrently."""

    def __init__(
        self,
        name: str,
        space: GeometricSpace,
        descriptions: Sequence[str],
        margins: Callable[[np.ndarray, np.ndarray], np.ndarray],
        section: Callable[[int, np.ndarray, np.ndarray], PathFn],
        reserved: bool,
        notes: Sequence[str] = (),
    ):
        self.name = name
        self.space = space
        self.descriptions = tuple(descriptions)
        self._margins = margins
        self._section = section
        self.reserved = reserved
        self.notes = tuple(notes)

    def __len__(self):
        return len(self.descriptions)

    def __repr__(self):
        return f"Planner({self.name!r}, rules={len(self)}, reserved={self.reserved})"

    @property
    def rules(self) -> tuple[PlannerRule, ...]:
        def rule(k):
            return PlannerRule(
                k,
                self.descriptions[k],
                lambda A, B: float(self.margins(A, B)[k]),
                lambda A, B: self.section(k, A, B),
            )

        return tuple(rule(k) for k in range(len(self)))

    def margins(self, A, B) -> np.ndarray:
        return np.asarray(self._margins(np.asarray(A, float), np.asarray(B, float)), dtype=float)

    def section(self, k: int, A, B) -> PathFn:
        return self._section(k, np.asarray(A, float), np.asarray(B, float))

    def select(self, A, B) -> int:
        m = self.margins(A, B)
        k = int(np.argmax(m))
        if not m[k] > 0.0:
            raise NotCoveredError(f"{self.name}: no rule covers the pair {list(A)} -> {list(B)}")
        return k

    def plan(self, A, B, check: bool = True) -> tuple[int, PathFn]:
        A, B = np.asarray(A, float), np.asarray(B, float)
        if check:
            for lab, x in (("start", A), ("goal", B)):
                if not self.space.contains(x):
                    raise DomainError(f"{lab} point is not in {self.space.name}")
        k = self.select(A, B)
        return k, self.section(k, A, B)

    def describe(self) -> dict:
        return {
            "planner": self.name,
            "space": self.space.to_json(),
            "reserved": self.reserved,
            "rules": [{"index": k, "domain": d} for k, d in enumerate(self.descriptions)],
            "notes": list(self.notes),
        }


def _basis(d: int, i: int) -> np.ndarray:
    e = np.zeros(d)
    e[i] = 1.0
    return e


def _norm(x) -> float:
    return float(math.sqrt(np.dot(x, x)))


@dataclass(frozen=True)
class _Piece:
    margin: Margin
    section: Section
    reserved: bool  # domain meets the diagonal and the section is constant there
    description: str


# -- spheres ----------------------------------------------------------------


def _pulled_back_field(B: np.ndarray, pole: int) -> np.ndarray:
    """Unit tangent at B: the first chart direction pulled back from the chart at ``e_pole``."""
    y = stereo(B, pole)
    s = float(np.dot(y, y)) + 1.0
    rest = -2.0 * y[0] * y
    rest[0] += s
    w = np.insert(rest, pole, 2.0 * y[0])
    return w / _norm(w)


def _sphere_pieces(m: int, b0_pole: int | None = None, chart_pole: int = 0) -> list[_Piece]:
    d = m + 1
    b0_pole = m if b0_pole is None else b0_pole
    if b0_pole == chart_pole:
        raise ValueError("the chart centre must differ from B0 and -B0")
    B0, C = _basis(d, b0_pole), _basis(d, chart_pole)

    def far(A, B):
        return _norm(A + B) / 2

    def via_antipode_margin(A, B):
        return min(_norm(A - B), _norm(B - B0)) / 2

    def via_antipode(A, B):
        return Concat((Geodesic(A, -B), Semicircle(B, _pulled_back_field(B, b0_pole))))

    def chart_margin(A, B):
        return min(_norm(A - C), _norm(B - C)) / 2

    return [
        _Piece(far, Geodesic, True, "A != -B: minimal great-circle arc"),
        _Piece(
            via_antipode_margin,
            via_antipode,
            False,
            f"A != B and B != B0=e{b0_pole}: arc to -B, then half great circle along a field nonvanishing off B0",
        ),
        _Piece(
            chart_margin,
            lambda A, B: StereoLine(A, B, chart_pole),
            True,
            f"A, B != C=e{chart_pole}: straight line in the stereographic chart from C",
        ),
    ]


def _complex_structure(x: np.ndarray) -> np.ndarray:
    v = np.empty_like(x)
    v[0::2] = -x[1::2]
    v[1::2] = x[0::2]
    return v


def _odd_sphere_pieces(m: int) -> list[_Piece]:
    if m % 2 == 0:
        raise ValueError("a nonvanishing tangent field needs an odd-dimensional sphere")

    def far(A, B):
        return _norm(A + B) / 2

    def apart(A, B):
        return _norm(A - B) / 2

    def via_antipode(A, B):
        return Concat((Geodesic(A, -B), Semicircle(B, _complex_structure(B))))

    return [
        _Piece(far, Geodesic, True, "A != -B: minimal great-circle arc"),
        _Piece(apart, via_antipode, False, "A != B: arc to -B, then half circle along v(x) = (-x2, x1, -x4, x3, ...)"),
    ]


def _from_pieces(name, space, pieces: Sequence[_Piece], notes=()) -> Planner:
    def margins(A, B):
        return np.array([p.margin(A, B) for p in pieces])

    def section(k, A, B):
        return pieces[k].section(A, B)

    # reserved: any rule whose domain meets the diagonal is constant there
    return Planner(name, space, [p.description for p in pieces], margins, section, True, notes)


def sphere_planner(m: int, b0_pole: int | None = None, chart_pole: int = 0) -> Planner:
    """Three rules on S^m; reserved (rules 0 and 2 are constant on the diagonal, rule 1 avoids it)."""
    if m < 1:
        raise ValueError("m must be at least 1")
    return _from_pieces(f"sphere:{m}", SphereSpace(m), _sphere_pieces(m, b0_pole, chart_pole))


def odd_sphere_planner(m: int) -> Planner:
    """Two rules on an odd sphere, using a global nonvanishing tangent field."""
    return _from_pieces(f"odd-sphere:{m}", SphereSpace(m), _odd_sphere_pieces(m))


def circle_planner() -> Planner:
    p = odd_sphere_planner(1)
    p.name = "circle"
    return p


def contractible_planner(n: int) -> Planner:
    piece = _Piece(lambda A, B: math.inf, Line, True, "everything: straight segment")
    return _from_pieces(f"R^{n}", EuclideanSpace(n), [piece])


# -- products ---------------------------------------------------------------


def product_planner(P: Planner, Q: Planner) -> Planner:
    """Rules indexed by i + j; rule k is the union of U_i x V_j over i + j = k.

    Within a union the piece with the largest min(margin_i, margin_j) is used.
    """
    p, q = len(P), len(Q)
    space = ProductSpace((P.space, Q.space))
    split = P.space.ambient

    def pieces(k):
        return [(i, k - i) for i in range(max(0, k - q + 1), min(p - 1, k) + 1)]

    def grid(A, B):
        return P.margins(A[:split], B[:split]), Q.margins(A[split:], B[split:])

    def margins(A, B):
        mp, mq = grid(A, B)
        return np.array([max(min(mp[i], mq[j]) for i, j in pieces(k)) for k in range(p + q - 1)])

    def section(k, A, B):
        mp, mq = grid(A, B)
        i, j = max(pieces(k), key=lambda ij: (min(mp[ij[0]], mq[ij[1]]), -ij[0]))
        return ProductPath((P.section(i, A[:split], B[:split]), Q.section(j, A[split:], B[split:])))

    desc = [
        " or ".join(f"({P.name} rule {i}) x ({Q.name} rule {j})" for i, j in pieces(k)) for k in range(p + q - 1)
    ]
    return Planner(f"{P.name} x {Q.name}", space, desc, margins, section, P.reserved and Q.reserved)


# -- wedge S^1 v S^m ----------------------------------------------------------


def _circle_pieces3() -> list[_Piece]:
    y = np.array([0.0, 1.0])
    two = _odd_sphere_pieces(1)
    chart = _Piece(
        lambda A, B: min(_norm(A - y), _norm(B - y)) / 2,
        lambda A, B: StereoLine(A, B, 1),
        True,
        "A, B != (0, 1): straight line in the stereographic chart from (0, 1)",
    )
    return two + [chart]


_WEDGE_SLOTS = ((0, 0), (1, 2), (2, 1))


def wedge_planner(m: int) -> Planner:
    """Three reserved rules on S^1 v S^m.

    Rule k pairs circle rule c_k with sphere rule s_k, where the circle side has
    the geodesic, the antipode detour and a chart line, and the sphere side the
    geodesic, the chart line and the antipode detour (in that slot order).  On
    each quadrant of (S^1 v S^m)^2:

    * both points on one lobe: that lobe's rule, but if the partner rule is not
      constant on the diagonal, pairs touching the basepoint are left out;
    * points on different lobes: go to the basepoint with one lobe's rule, then
      leave it with the other's.

    Sections agree wherever quadrants meet because the rule used at the
    basepoint is then constant, and arc-length concatenation drops constant
    pieces.
    """
    W = WedgeSpace(m)
    x0, P = W.x0, W.P
    circ, sph = _circle_pieces3(), _sphere_pieces(m)
    D = W.ambient

    def on_circle(path):
        return Mapped(path, lambda X: np.hstack([X, np.broadcast_to(P, (X.shape[0], P.size))]), D)

    def on_sphere(path):
        return Mapped(path, lambda X: np.hstack([np.broadcast_to(x0, (X.shape[0], 2)), X]), D)

    def reps(x):
        on_c, on_s = W.lobes(x)
        u, v = W.split(x)
        return ([("X", u)] if on_c else []) + ([("S", v)] if on_s else [])

    def options(k, A, B):
        c, s = circ[_WEDGE_SLOTS[k][0]], sph[_WEDGE_SLOTS[k][1]]
        out = []
        for ka, a in reps(A):
            for kb, b in reps(B):
                if ka == kb == "X":
                    mg = c.margin(a, b)
                    if not s.reserved:
                        mg = min(mg, _norm(a - x0) / 2, _norm(b - x0) / 2)
                elif ka == kb == "S":
                    mg = s.margin(a, b)
                    if not c.reserved:
                        mg = min(mg, _norm(a - P) / 2, _norm(b - P) / 2)
                elif ka == "X":
                    mg = min(c.margin(a, x0), s.margin(P, b))
                else:
                    mg = min(s.margin(a, P), c.margin(x0, b))
                out.append((mg, ka, a, kb, b))
        return out

    def margins(A, B):
        res = []
        for k in range(3):
            opts = options(k, A, B)
            res.append(max((o[0] for o in opts), default=0.0))
        return np.array(res)

    def section(k, A, B):
        opts = options(k, A, B)
        if not opts:
            raise DomainError("point is not on the wedge")
        mg, ka, a, kb, b = max(opts, key=lambda o: o[0])
        c, s = circ[_WEDGE_SLOTS[k][0]], sph[_WEDGE_SLOTS[k][1]]
        if ka == kb == "X":
            return on_circle(c.section(a, b))
        if ka == kb == "S":
            return on_sphere(s.section(a, b))
        if ka == "X":
            return Concat((on_circle(c.section(a, x0)), on_sphere(s.section(P, b))))
        return Concat((on_sphere(s.section(a, P)), on_circle(c.section(x0, b))))

    desc = []
    for k, (ci, si) in enumerate(_WEDGE_SLOTS):
        desc.append(f"circle lobe: {circ[ci].description}; sphere lobe: {sph[si].description}; mixed: via the basepoint")
    notes = [
        "The two circle rules are enlarged to three sets covering every pair at least twice;"
        " each rule pairs one circle set with one sphere set.",
        f"basepoint: x0={x0.tolist()} on the circle lobe, P={np.round(P, 6).tolist()} on the sphere lobe",
    ]
    return Planner(f"wedge:{m}", W, desc, margins, section, True, notes)


# -- retraction transfer ------------------------------------------------------


@dataclass(frozen=True)
class Retraction:
    """Deformation retraction of ``space`` onto a copy of ``target``.

    ``retract`` maps a point of ``space`` to ``target``; ``include`` maps rows of
    ``target`` back into ``space``; ``track(z)`` is a path from ``z`` to
    ``include(retract(z))``.
    """

    space: GeometricSpace
    target: GeometricSpace
    retract: Callable[[np.ndarray], np.ndarray]
    include: Callable[[np.ndarray], np.ndarray]
    track: Callable[[np.ndarray], PathFn]
    description: str = ""
    idempotent: bool = True  # False: only include(retract(z)) ~ z is claimed


def identity_retraction(space: GeometricSpace) -> Retraction:
    return Retraction(space, space, lambda z: z, lambda W: W, lambda z: Constant(z), "identity")


def retract_transfer(P: Planner, R: Retraction, check_points: Sequence[np.ndarray] | None = None) -> Planner:
    """Planner on ``R.space``: track to the retract, use ``P`` there, track back.

    Not reserved: on the diagonal the path runs out along the track and back.
    """
    if P.space != R.target:
        raise ValueError("planner space and retraction target differ")
    for z in check_points if (check_points is not None and R.idempotent) else ():
        w = R.retract(np.asarray(z, float))
        again = R.retract(R.include(w[None, :])[0])
        if _norm(again - w) > 1e-9 or not R.target.contains(w, 1e-9):
            raise InvalidRetractionError(f"r(r(z)) != r(z) at z={list(z)}")

    D = R.space.ambient

    def margins(A, B):
        return P.margins(R.retract(A), R.retract(B))

    def section(k, A, B):
        rA, rB = R.retract(A), R.retract(B)
        inner = Mapped(P.section(k, rA, rB), R.include, D)
        return Concat((R.track(A), inner, Reverse(R.track(B))))

    desc = [f"pairs whose retractions lie in: {d}" for d in P.descriptions]
    notes = [f"transferred along {R.description or 'a deformation retraction'}", *P.notes]
    return Planner(f"{P.name} transferred to {R.space.name}", R.space, desc, margins, section, False, notes)


# -- punctured cylinder and the configuration space ---------------------------

_SHIFT = math.pi / 4  # angle of P on the second lobe of S^1 v S^1


def _rhombus(u: float, h: float) -> tuple[float, float]:
    nu = abs(u) + abs(h)
    if nu <= 1.0:
        return u / nu, h / nu
    return u, math.copysign(1.0 - abs(u), h)


def _model_to_cylinder(M: np.ndarray) -> np.ndarray:
    """Model rows (angle / pi, heights...) to cylinder rows (cos, sin, heights...)."""
    ang = math.pi * M[:, 0]
    return np.column_stack([np.cos(ang), np.sin(ang), M[:, 1:]])


def rhombus_retraction() -> Retraction:
    """S^1 x R minus (1, 0; 0) onto a figure eight.

    Model coordinates: u = angle / pi in (-1, 1], h = height; the puncture is the
    origin.  Inside |u| + |h| <= 1 points move radially out to the diamond
    |u| + |h| = 1; outside they move vertically onto it.  The diamond's
    vertices (+-1, 0) are one point of the cylinder, so the diamond is a figure
    eight: its upper half is the circle lobe and its lower half the other lobe
    of S^1 v S^1.  The homotopy is the straight line in the model, which stays
    off the puncture.
    """
    Z, W = PuncturedCylinder(1), WedgeSpace(1)
    x0, P = W.x0, W.P

    def model(z):
        return math.atan2(z[1], z[0]) / math.pi, float(z[2])

    def retract(z):
        ru, rh = _rhombus(*model(z))
        if rh >= 0.0:
            a = math.pi * (ru + 1.0)
            return np.concatenate([[math.cos(a), math.sin(a)], P])
        b = math.pi * (ru + 1.0) + _SHIFT
        return np.concatenate([x0, [math.cos(b), math.sin(b)]])

    def include(X):
        X = np.atleast_2d(X)
        u, v = X[:, :2], X[:, 2:]
        upper = np.linalg.norm(v - P, axis=1) <= 1e-9
        alpha = np.mod(np.arctan2(u[:, 1], u[:, 0]), 2 * math.pi)
        beta = np.mod(np.arctan2(v[:, 1], v[:, 0]) - _SHIFT, 2 * math.pi)
        ru = np.where(upper, alpha, beta) / math.pi - 1.0
        rh = np.where(upper, 1.0, -1.0) * (1.0 - np.abs(ru))
        return _model_to_cylinder(np.column_stack([ru, rh]))

    def track(z):
        start = np.array(model(z))
        end = np.array(_rhombus(*start))
        return Track(start, end, _model_to_cylinder, 3, exact_start=np.asarray(z, float))

    return Retraction(Z, W, retract, include, track, "the diamond retraction of the punctured cylinder")


_SEMI = 0.5  # semi-axis of the ellipsoid along the circle direction
_CAP = 0.5  # |h| radius of the two polar caps of the diamond


def _diamond(u: float, h: np.ndarray) -> tuple[float, np.ndarray]:
    """Retract the punctured model strip onto |u| + |h| = 1 (radially inside, vertically outside)."""
    r = _norm(h)
    nu = abs(u) + r
    if nu <= 1.0:
        return u / nu, h / nu
    return u, h * ((1.0 - abs(u)) / r)


def _to_ellipsoid(u: float, h: np.ndarray) -> np.ndarray:
    n = np.concatenate([[u / _SEMI], h])
    return n / _norm(n)


def _from_ellipsoid(n: np.ndarray) -> tuple[float, np.ndarray]:
    return _SEMI * float(n[0]), np.asarray(n[1:], float)


def _fold(u: float, h: np.ndarray):
    """Map the diamond onto an ellipsoid joined to a loop, a literal S^1 v S^2.

    The ellipsoid is (u / SEMI)^2 + |h|^2 = 1; the loop is h = e1, touching it
    only at q = (0, e1).  The middle band of the diamond projects radially onto
    the ellipsoid.  A polar cap first runs along the loop from the seam to q,
    then along an ellipsoid geodesic from q out to the band's rim.  Both poles
    go to the seam point of the loop, so the identified poles agree.

    Returns the model point and the wedge-lobe coordinate ("X", u) or ("S", n).
    """
    r = _norm(h)
    if r >= _CAP:
        n = _to_ellipsoid(u, h)
        return _from_ellipsoid(n), ("S", n)
    sgn = 1.0 if u > 0 else -1.0
    s = r / _CAP
    e1 = np.zeros_like(h)
    e1[0] = 1.0
    if s <= 0.5:
        ut = sgn * (1.0 - 2.0 * s)
        return (ut, e1), ("X", ut)
    nq = np.concatenate([[0.0], e1])
    rim = _to_ellipsoid(sgn * (1.0 - _CAP), _CAP * h / r)
    n = Geodesic(nq, rim)(2.0 * s - 1.0)[0]
    return _from_ellipsoid(n), ("S", n)


def _model_of(z: np.ndarray) -> tuple[float, np.ndarray]:
    return math.atan2(z[1], z[0]) / math.pi, np.asarray(z[2:], float)


def fold_domination() -> Retraction:
    """S^1 x R^2 minus (1, 0; 0, 0) onto S^1 v S^2, up to homotopy.

    The punctured space retracts onto the diamond |u| + |h| = 1, a sphere with
    its two poles identified, which is not itself a wedge.  :func:`_fold` then
    maps the diamond onto an embedded wedge.  ``include`` embeds the abstract
    wedge; ``track`` is two straight model segments, z -> diamond -> fold,
    each avoiding the puncture.  Only include(retract(z)) ~ z is claimed, which
    is all the planner transfer needs.
    """
    Z, W = PuncturedCylinder(2), WedgeSpace(2)
    x0, P = W.x0, W.P
    c, s = math.cos(math.pi / 4), math.sin(math.pi / 4)
    rot = np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])  # rot @ e1 = P

    def folded(z):
        return _fold(*_diamond(*_model_of(z)))

    def retract(z):
        _, (lobe, coord) = folded(np.asarray(z, float))
        if lobe == "X":
            a = math.pi * coord
            return np.concatenate([[math.cos(a), math.sin(a)], P])
        return np.concatenate([x0, rot @ coord])

    def include(X):
        X = np.atleast_2d(X)
        u, v = X[:, :2], X[:, 2:]
        loop = np.linalg.norm(v - P, axis=1) <= 1e-9
        n = v @ rot  # rows of rot^T v
        mu = np.where(loop, np.arctan2(u[:, 1], u[:, 0]) / math.pi, _SEMI * n[:, 0])
        h = np.where(loop[:, None], np.array([1.0, 0.0]), n[:, 1:])
        return _model_to_cylinder(np.column_stack([mu, h]))

    def track(z):
        z = np.asarray(z, float)
        u, h = _model_of(z)
        du, dh = _diamond(u, h)
        (fu, fh), _ = folded(z)
        m0, m1, m2 = np.concatenate([[u], h]), np.concatenate([[du], dh]), np.concatenate([[fu], fh])
        return Concat(
            (
                Track(m0, m1, _model_to_cylinder, 4, exact_start=z),
                Track(m1, m2, _model_to_cylinder, 4),
            )
        )

    return Retraction(Z, W, retract, include, track, "the diamond retraction followed by the fold onto a wedge", False)


def punctured_cylinder_retraction(n: int) -> Retraction:
    if n == 1:
        return rhombus_retraction()
    if n == 2:
        return fold_domination()
    raise NotImplementedError("explicit retractions exist for n = 1 and n = 2 only")


def _mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Group law on S^1 x R^n for rows (cos, sin, h...)."""
    c = a[..., 0] * b[..., 0] - a[..., 1] * b[..., 1]
    s = a[..., 0] * b[..., 1] + a[..., 1] * b[..., 0]
    return np.concatenate([c[..., None], s[..., None], a[..., 2:] + b[..., 2:]], axis=-1)


def _inv(a: np.ndarray) -> np.ndarray:
    return np.concatenate([a[..., :1], -a[..., 1:2], -a[..., 2:]], axis=-1)


def config_cylinder_planner(n: int = 1) -> Planner:
    """Four collision-free rules for two bodies on S^1 x R^n, n = 1 or 2.

    (a, b) -> (a, b a^-1) identifies the configuration space with
    (S^1 x R^n) x (S^1 x R^n minus the identity).  The first factor gets the
    2-rule cylinder planner, the second the 3-rule planner on S^1 v S^n
    transferred to it; their product has 2 + 3 - 1 = 4 rules.  Paths map back
    by (g, z) -> (g, z g), so the bodies stay apart because z never reaches
    the identity.
    """
    if n not in (1, 2):
        raise ValueError("n must be 1 or 2")
    cyl = product_planner(circle_planner(), contractible_planner(n))
    punct = retract_transfer(wedge_planner(n), punctured_cylinder_retraction(n))
    inner = product_planner(cyl, punct)
    space = ConfigCylinder(n)
    k = n + 2

    def phi(x):
        a, b = x[..., :k], x[..., k:]
        return np.concatenate([a, _mul(b, _inv(a))], axis=-1)

    def phi_inv(X):
        g, z = X[:, :k], X[:, k:]
        return np.hstack([g, _mul(z, g)])

    def margins(A, B):
        return inner.margins(phi(A), phi(B))

    def section(j, A, B):
        return Mapped(inner.section(j, phi(A), phi(B)), phi_inv, space.ambient)

    notes = ["coordinates (a, b) -> (a, b a^-1); cylinder planner x transferred wedge planner", *punct.notes]
    desc = [f"in coordinates (a, b a^-1): {d}" for d in inner.descriptions]
    return Planner(f"cylinder-config:{n}", space, desc, margins, section, False, notes)


# -- registry -----------------------------------------------------------------

PLANNER_NAMES = ("circle", "sphere:<m>", "odd-sphere:<m>", "wedge:<m>", "cylinder-config:<1|2>")


def planner_by_name(name: str) -> Planner:
    name = name.strip().lower()
    kind, _, arg = name.partition(":")
    try:
        if kind == "circle" and not arg:
            return circle_planner()
        k = int(arg)
        if kind == "sphere" and k >= 1:
            return sphere_planner(k)
        if kind == "odd-sphere" and k >= 1 and k % 2:
            return odd_sphere_planner(k)
        if kind == "wedge" and k >= 1:
            return wedge_planner(k)
        if kind == "cylinder-config" and k in (1, 2):
            return config_cylinder_planner(k)
    except ValueError:
        pass
    raise KeyError(f"unknown space {name!r}; expected one of {', '.join(PLANNER_NAMES)}")
