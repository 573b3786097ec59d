"""Exact scalars and dense linear algebra over Q and prime fields.

Everything here is exact.  Rational arithmetic goes through
:class:`fractions.Fraction`; prime-field elimination runs on ``int64`` numpy
arrays through a kernel that numba compiles when available.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ._accel import njit

__all__ = [
    "Field",
    "Q",
    "Z2",
    "FieldMismatchError",
    "Scalar",
    "Matrix",
    "rref",
    "kernel_basis",
    "span_dimension",
    "row_basis",
]


class FieldMismatchError(ValueError):
    """Raised when values from two different fields meet."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class Field:
    """Coefficient field: ``char == 0`` is Q, otherwise Z/p for prime p."""

    char: int

    def __post_init__(self):
        if self.char != 0 and not _is_prime(self.char):
            raise ValueError(f"characteristic must be 0 or prime, got {self.char}")

    @classmethod
    def parse(cls, text: str) -> "Field":
        t = text.strip().upper()
        if t in {"Q", "QQ", "RAT"}:
            return cls(0)
        if t.startswith("Z") or t.startswith("F"):
            digits = t.lstrip("ZF_/")
            if digits.isdigit():
                return cls(int(digits))
        raise ValueError(f"unknown field {text!r}")

    @property
    def is_rational(self) -> bool:
        return self.char == 0

    @property
    def name(self) -> str:
        return "Q" if self.char == 0 else f"Z{self.char}"

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Field({self.name})"

    def coerce(self, x):
        """Bring an int, Fraction or same-field Scalar into this field's raw form."""
        if isinstance(x, Scalar):
            if x.field != self:
                raise FieldMismatchError(f"{x.field} value used in {self}")
            return x.value
        if self.char == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.char == 0:
                raise ZeroDivisionError(f"{x} has no image in {self}")
            return (x.numerator * pow(x.denominator, -1, self.char)) % self.char
        return int(x) % self.char

    def zero(self):
        return Fraction(0) if self.char == 0 else 0

    def one(self):
        return Fraction(1) if self.char == 0 else 1

    def add(self, a, b):
        return a + b if self.char == 0 else (a + b) % self.char

    def sub(self, a, b):
        return a - b if self.char == 0 else (a - b) % self.char

    def mul(self, a, b):
        return a * b if self.char == 0 else (a * b) % self.char

    def neg(self, a):
        return -a if self.char == 0 else (-a) % self.char

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a if self.char == 0 else pow(a, self.char - 2, self.char)

    def sign(self, odd: bool):
        """(-1)^odd as a field element."""
        return self.neg(self.one()) if odd else self.one()


Q = Field(0)
Z2 = Field(2)


@dataclass(frozen=True)
class Scalar:
    """A field element tagged with its field; mixing fields raises."""

    value: object
    field: Field = Q

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.coerce(self.value))

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return other.value
        return self.field.coerce(other)

    def __add__(self, other):
        return Scalar(self.field.add(self.value, self._other(other)), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field.sub(self.value, self._other(other)), self.field)

    def __rsub__(self, other):
        return Scalar(self.field.sub(self._other(other), self.value), self.field)

    def __mul__(self, other):
        return Scalar(self.field.mul(self.value, self._other(other)), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.field.mul(self.value, self.field.inv(self._other(other))), self.field)

    def __neg__(self):
        return Scalar(self.field.neg(self.value), self.field)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.coerce(other)
        except (TypeError, ValueError, ZeroDivisionError):
            return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value}@{self.field}"


@dataclass(frozen=True)
class Matrix:
    """Dense matrix of raw field values (Fraction for Q, int for Z/p)."""

    field: Field
    rows: tuple

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], field: Field | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if field is None:
            fields = {x.field for r in rows for x in r if isinstance(x, Scalar)}
            if len(fields) > 1:
                raise FieldMismatchError(f"mixed fields {sorted(f.name for f in fields)}")
            field = fields.pop() if fields else Q
        width = {len(r) for r in rows}
        if len(width) > 1:
            raise ValueError("ragged matrix")
        data = tuple(tuple(field.coerce(x) for x in r) for r in rows)
        return cls(field, data)

    @property
    def shape(self) -> tuple[int, int]:
        n = len(self.rows)
        return n, (len(self.rows[0]) if n else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]

    def matvec(self, v: Sequence) -> list:
        f = self.field
        out = []
        for r in self.rows:
            acc = f.zero()
            for a, b in zip(r, v):
                if a and b:
                    acc = f.add(acc, f.mul(a, b))
            out.append(acc)
        return out


# ---------------------------------------------------------------------------
# elimination kernels


@njit
def _rref_modp(a, p):
    """In-place RREF of an int64 matrix over Z/p; returns pivot columns."""
    nrows, ncols = a.shape
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(ncols):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        # inverse by Fermat
        inv = 1
        base = a[r, c] % p
        e = p - 2
        while e > 0:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        if inv != 1:
            for j in range(c, ncols):
                a[r, j] = (a[r, j] * inv) % p
        for i in range(nrows):
            if i != r and a[i, c] != 0:
                fct = a[i, c]
                for j in range(c, ncols):
                    if a[r, j] != 0:
                        a[i, j] = (a[i, j] - fct * a[r, j]) % p
        pivots[r] = c
        r += 1
    return pivots[:r]


def _rref_rational(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        if lead != 1:
            m[r] = [x / lead for x in m[r]]
        prow = m[r]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                fct = m[i][c]
                m[i] = [x - fct * y if y else x for x, y in zip(m[i], prow)]
        pivots.append(c)
        r += 1
    return m, pivots


def _rref_raw(rows: list[list], ncols: int, field: Field) -> tuple[list[list], list[int]]:
    if not rows or ncols == 0:
        return [list(r) for r in rows], []
    if field.is_rational:
        return _rref_rational(rows)
    a = np.array(rows, dtype=np.int64).reshape(len(rows), ncols)
    pivots = _rref_modp(a, field.char)
    return [[int(x) for x in r] for r in a], [int(c) for c in pivots]


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form and the strictly increasing pivot columns."""
    nrows, ncols = m.shape
    out, pivots = _rref_raw([list(r) for r in m.rows], ncols, m.field)
    return Matrix(m.field, tuple(tuple(r) for r in out)), pivots


def kernel_basis(m: Matrix) -> list[tuple]:
    """Basis of ``{v : m v = 0}``, one vector per free column."""
    nrows, ncols = m.shape
    f = m.field
    red, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [f.zero()] * ncols
        v[free] = f.one()
        for r, pc in enumerate(pivots):
            coeff = red.rows[r][free]
            if coeff:
                v[pc] = f.neg(coeff)
        basis.append(tuple(v))
    return basis


def row_basis(vectors: Sequence[Sequence], field: Field) -> list[tuple]:
    """Nonzero RREF rows spanning the same space as ``vectors``."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return []
    ncols = len(vectors[0])
    out, pivots = _rref_raw(vectors, ncols, field)
    return [tuple(out[i]) for i in range(len(pivots))]


def span_dimension(vectors: Sequence[Sequence], field: Field = Q) -> int:
    vectors = list(vectors)
    if not vectors:
        return 0
    widths = {len(v) for v in vectors}
    if len(widths) != 1:
        raise ValueError("vectors have different lengths")
    raw = [[field.coerce(x) for x in v] for v in vectors]
    return len(row_basis(raw, field))
