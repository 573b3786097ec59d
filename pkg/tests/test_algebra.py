import pytest

from tclab.algebra import (
    GradedAlgebra,
    InconsistentPresentationError,
    betti,
    field_algebra,
    make_exterior,
    make_sphere,
    make_truncated_polynomial,
    parse_ring,
    tensor_power,
    tensor_product,
    validate,
    wedge_sum,
)
from tclab.linalg import Q, Z2, Field, FieldMismatchError


def rp3(field=Z2):
    return make_truncated_polynomial(1, 4, field) if field == Z2 else make_exterior([3], field)


def test_rp3_mod2():
    A = rp3()
    assert betti(A) == [1, 1, 1, 1]
    a = A.by_label("a")
    assert not (a ** 3).is_zero()
    assert (a ** 4).is_zero()
    assert (A.by_label("a^2") * A.by_label("a^2")).is_zero()


def test_sphere_ring_squares_to_zero():
    A = make_truncated_polynomial(4, 2, Q)
    x = A.basis_element(1)
    assert A.dim == 2 and (x * x).is_zero()


def test_odd_generator_height_rejected_over_q():
    with pytest.raises(InconsistentPresentationError):
        make_truncated_polynomial(1, 3, Q)
    make_truncated_polynomial(1, 3, Z2)
    make_truncated_polynomial(2, 5, Q)


def test_exterior_examples():
    assert betti(make_exterior([1], Q)) == [1, 1]
    assert betti(make_exterior([3], Q)) == [1, 0, 0, 1]
    T = make_exterior([1, 1], Q, ["x", "y"])
    x, y, xy = T.by_label("x"), T.by_label("y"), T.by_label("xy")
    assert T.dim == 4
    assert x * y == xy
    assert y * x == -xy
    assert not xy.is_zero()
    with pytest.raises(ValueError):
        make_exterior([2], Q)


def test_multiply_unit_and_parent_mismatch():
    A = make_exterior([1, 3], Q)
    for b in A.gens():
        assert A.unit() * b == b == b * A.unit()
    with pytest.raises(ValueError):
        A.unit() * make_sphere(2).unit()


def test_tensor_koszul_signs():
    S1 = make_exterior([1], Q, ["x"])
    T = tensor_product(S1, S1)
    x1, one_x, xx = T.by_label("x⊗1"), T.by_label("1⊗x"), T.by_label("x⊗x")
    assert x1 * one_x == xx
    assert one_x * x1 == -xx
    assert betti(T) == [1, 2, 1]


def test_tensor_char2_signs_trivial():
    A = rp3()
    T = tensor_product(A, A)
    assert T.by_label("1⊗a") * T.by_label("a⊗1") == T.by_label("a⊗a")


def test_tensor_with_ground_field():
    A = make_exterior([1, 3], Q)
    T = tensor_product(A, field_algebra(Q))
    assert betti(T) == betti(A)
    assert validate(T).ok
    with pytest.raises(FieldMismatchError):
        tensor_product(A, field_algebra(Z2))


def test_wedge_examples():
    W = wedge_sum(make_sphere(1), make_sphere(2))
    assert betti(W) == [1, 1, 1]
    for u in W.gens()[1:]:
        for v in W.gens()[1:]:
            assert (u * v).is_zero()
    A = make_exterior([1, 3], Q)
    assert betti(wedge_sum(A, field_algebra(Q))) == betti(A)
    R = wedge_sum(rp3(), make_sphere(5, Z2))
    assert betti(R) == [1, 1, 1, 1, 0, 1]
    assert (R.by_label("a") * R.by_label("x5")).is_zero()
    assert not (R.by_label("a") * R.by_label("a^2")).is_zero()


CATALOG = [
    make_sphere(1),
    make_sphere(2),
    make_sphere(5, Z2),
    rp3(),
    rp3(Q),
    make_exterior([1, 1], Q),
    make_exterior([1, 3, 5], Q),
    make_truncated_polynomial(2, 3, Q),
    make_truncated_polynomial(2, 4, Field(3)),
    tensor_product(rp3(), rp3()),
    tensor_product(make_sphere(1), wedge_sum(make_sphere(1), make_sphere(2))),
    tensor_power(make_sphere(1), 3),
    wedge_sum(rp3(), make_sphere(5, Z2)),
    tensor_product(make_sphere(2), make_sphere(2)),
]


@pytest.mark.parametrize("A", CATALOG, ids=lambda A: A.name)
def test_catalog_validates(A):
    report = validate(A)
    assert report.ok, report.violations


@pytest.mark.parametrize(
    "A,B",
    [(make_sphere(1), make_sphere(2)), (rp3(), make_sphere(3, Z2)), (make_exterior([1, 3], Q), make_sphere(4))],
)
def test_tensor_symmetry_and_wedge_betti(A, B):
    assert betti(tensor_product(A, B)) == betti(tensor_product(B, A))
    w = betti(wedge_sum(A, B))
    a, b = betti(A), betti(B)
    n = max(len(a), len(b))
    a, b = a + [0] * (n - len(a)), b + [0] * (n - len(b))
    assert w == [1] + [a[k] + b[k] for k in range(1, n)]


def test_validate_reports_commutativity_violation():
    # x, y in degree 1 with x*y = z but y*x = z (should be -z over Q)
    table = {(0, k): {k: Q.one()} for k in range(4)}
    table.update({(k, 0): {k: Q.one()} for k in range(4)})
    table[(1, 2)] = {3: Q.one()}
    table[(2, 1)] = {3: Q.one()}
    A = GradedAlgebra(Q, (0, 1, 1, 2), ("1", "x", "y", "z"), table, "bad")
    report = validate(A)
    assert not report.ok
    assert any("commutativity" in v and "(x, y)" in v for v in report.violations)


def test_validate_reports_associativity_violation():
    # x in degree 2, x*x = y, and x*y = w but y*x = 2w: (x*x)*x != x*(x*x)
    labels, degs = ("1", "x", "y", "w"), (0, 2, 4, 6)
    t = {}
    for k in range(4):
        t[(0, k)] = {k: Q.one()}
        t[(k, 0)] = {k: Q.one()}
    t[(1, 1)] = {2: Q.one()}
    t[(1, 2)] = {3: Q.one()}
    t[(2, 1)] = {3: Q.coerce(2)}
    report = validate(GradedAlgebra(Q, degs, labels, t, "bad"))
    assert any("associativity" in v and "(x, x, x)" in v for v in report.violations)


def test_parse_ring_grammar():
    assert betti(parse_ring("exterior(x:1, y:3)")) == [1, 1, 0, 1, 1]
    R = parse_ring("trunc(a:1, h=4)@Z2")
    assert R.field == Z2 and betti(R) == [1, 1, 1, 1]
    W = parse_ring("wedge(trunc(a:1,h=4), sphere(5))@Z2")
    assert betti(W) == [1, 1, 1, 1, 0, 1]
    T = parse_ring("tensor(S1, S1)@Q")
    assert betti(T) == [1, 2, 1]
    with pytest.raises(ValueError):
        parse_ring("trunc(a:1)")
    with pytest.raises(ValueError):
        parse_ring("exterior(x:1")
