"""Cup-length and zero-divisor cup-length by ideal-power linear algebra.

The longest nonzero product of elements of an ideal ``I`` is the largest ``n``
with ``I^n != 0``: products of ``n`` elements of ``I`` span ``I^n`` by
multilinearity.  Powers are built incrementally, ``I^(n+1) = span(I^n * g)``
over a set ``g`` generating ``I`` as an ideal, one degree at a time.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .algebra import Element, GradedAlgebra, tensor_index, tensor_product
from .linalg import Matrix, kernel_basis, row_basis

__all__ = [
    "IdealPowerTrace",
    "augmentation_ideal_basis",
    "ideal_power_trace",
    "cup_length",
    "zero_divisor_ideal_basis",
    "zero_divisor_generators",
    "zcl",
    "cat_lower_bound",
    "tc_lower_bound",
    "longest_basis_product",
    "tensor_square",
]


@dataclass(frozen=True)
class IdealPowerTrace:
    ideal: str
    dims: tuple[int, ...]

    @property
    def nilpotency_length(self) -> int:
        return sum(1 for d in self.dims if d > 0)


def augmentation_ideal_basis(A: GradedAlgebra) -> list[Element]:
    return [A.basis_element(i) for i in range(A.dim) if A.degrees[i] > 0]


def _bucket(A: GradedAlgebra, coeffs) -> int | None:
    degs = {A.degrees[k] for k in coeffs}
    return degs.pop() if len(degs) == 1 else None


def _reduce(A: GradedAlgebra, buckets: dict) -> dict:
    """Row-reduce each degree bucket of sparse vectors to a basis."""
    f = A.field
    out = {}
    for deg, vecs in buckets.items():
        if not vecs:
            continue
        cols = [k for k in range(A.dim) if deg is None or A.degrees[k] == deg]
        pos = {k: n for n, k in enumerate(cols)}
        dense = []
        for v in vecs:
            row = [f.zero()] * len(cols)
            for k, c in v.items():
                row[pos[k]] = c
            dense.append(row)
        basis = row_basis(dense, f)
        if basis:
            out[deg] = [{cols[n]: c for n, c in enumerate(r) if c != 0} for r in basis]
    return out


def ideal_power_trace(
    A: GradedAlgebra,
    generators: Sequence[Element],
    multipliers: Sequence[Element] | None = None,
    ideal: str = "ideal",
) -> IdealPowerTrace:
    """Dimensions of ``I, I^2, ...`` until the first zero power.

    ``generators`` must span ``I`` as a vector space.  ``multipliers`` (default
    ``generators``) must generate ``I`` as a two-sided ideal; passing a small
    ideal-generating set is much cheaper than the full spanning set.
    """
    gens = [g.coeffs for g in generators if not g.is_zero()]
    mults = gens if multipliers is None else [m.coeffs for m in multipliers if not m.is_zero()]
    if not gens:
        return IdealPowerTrace(ideal, ())
    graded = all(_bucket(A, g) is not None for g in gens + mults)
    if any(0 in {A.degrees[k] for k in g} for g in gens):
        raise ValueError("ideal contains a degree-0 component; its powers never vanish")

    def key(v):
        return _bucket(A, v) if graded else None

    level = defaultdict(list)
    for g in gens:
        level[key(g)].append(g)
    current = _reduce(A, level)
    dims = [sum(len(b) for b in current.values())]
    for _ in range(A.top_degree + 1):
        nxt = defaultdict(list)
        for rows in current.values():
            for r in rows:
                for m in mults:
                    p = A.mul_vec(r, m)
                    if p:
                        nxt[key(p)].append(p)
        current = _reduce(A, nxt)
        d = sum(len(b) for b in current.values())
        dims.append(d)
        if d == 0:
            break
    return IdealPowerTrace(ideal, tuple(dims))


@lru_cache(maxsize=None)
def cup_length(A: GradedAlgebra) -> int:
    aug = augmentation_ideal_basis(A)
    return ideal_power_trace(A, aug, ideal="augmentation").nilpotency_length


@lru_cache(maxsize=None)
def tensor_square(A: GradedAlgebra) -> GradedAlgebra:
    return tensor_product(A, A)


@lru_cache(maxsize=None)
def _zero_divisor_data(A: GradedAlgebra):
    T = tensor_square(A)
    f = A.field
    pairs = tensor_index(A, A)
    by_degree = defaultdict(list)
    for t, (i, j) in enumerate(pairs):
        by_degree[T.degrees[t]].append(t)
    basis: list[Element] = []
    for deg in sorted(by_degree):
        cols = by_degree[deg]
        rows = [k for k in range(A.dim) if A.degrees[k] == deg]
        rpos = {k: n for n, k in enumerate(rows)}
        grid = [[f.zero()] * len(cols) for _ in rows]
        for c, t in enumerate(cols):
            i, j = pairs[t]
            for k, coeff in A.mul_basis(i, j).items():
                grid[rpos[k]][c] = coeff
        if rows:
            kern = kernel_basis(Matrix(f, tuple(tuple(r) for r in grid)))
        else:
            kern = [tuple(f.one() if n == c else f.zero() for n in range(len(cols))) for c in range(len(cols))]
        for v in kern:
            basis.append(T.element({cols[n]: x for n, x in enumerate(v) if x != 0}))
    return T, basis


def zero_divisor_ideal_basis(A: GradedAlgebra) -> list[Element]:
    """Homogeneous basis of ker(A⊗A -> A), built degree by degree."""
    return list(_zero_divisor_data(A)[1])


def zero_divisor_generators(A: GradedAlgebra) -> list[Element]:
    """``u⊗1 - 1⊗u`` over the positive-degree basis; these generate the kernel as an ideal."""
    T = tensor_square(A)
    pairs = tensor_index(A, A)
    idx = {p: t for t, p in enumerate(pairs)}
    out = []
    for b in range(1, A.dim):
        out.append(T.basis_element(idx[(b, 0)]) - T.basis_element(idx[(0, b)]))
    return out


def zero_divisor_trace(A: GradedAlgebra, fast: bool = True) -> IdealPowerTrace:
    T, basis = _zero_divisor_data(A)
    mults = zero_divisor_generators(A) if fast else None
    return ideal_power_trace(T, basis, mults, ideal="zero-divisor")


@lru_cache(maxsize=None)
def zcl(A: GradedAlgebra) -> int:
    return zero_divisor_trace(A).nilpotency_length


def cat_lower_bound(A: GradedAlgebra) -> int:
    return 1 + cup_length(A)


def tc_lower_bound(A: GradedAlgebra) -> int:
    return 1 + zcl(A)


def longest_basis_product(A: GradedAlgebra, elements: Iterable[Element]) -> int:
    """Exhaustive search for the longest nonzero product of listed elements.

    Multisets are enumerated in nondecreasing index order; a vanishing partial
    product prunes its whole subtree.  Independent of the ideal-power path.
    """
    elems = [e.coeffs for e in elements if not e.is_zero()]
    best = 0

    def dfs(start, prod, length):
        nonlocal best
        best = max(best, length)
        for k in range(start, len(elems)):
            nxt = A.mul_vec(prod, elems[k])
            if nxt:
                dfs(k, nxt, length + 1)

    for k in range(len(elems)):
        dfs(k, elems[k], 1)
    return best
