import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tclab.algebra import betti
from tclab.linalg import Q, Z2
from tclab.spaces import (
    RP3,
    Config2,
    Euclidean,
    GroupAtom,
    MissingRingError,
    Point,
    Product,
    SpaceSemanticError,
    SpaceSyntaxError,
    Sphere,
    Wedge,
    cohomology,
    normalize,
    parse,
    render,
    so_category,
)

S1 = Sphere(1)


def test_parse_examples():
    assert parse("F(S1 x R^2, 2)") == Config2(Product((S1, Euclidean(2))))
    assert parse("RP3 x R^3") == Product((RP3, Euclidean(3)))
    assert parse("wedge(RP3, S5)") == Wedge((RP3, Sphere(5)))


def test_parse_is_case_and_space_insensitive():
    assert parse("f( s1xr^2 ,2 )") == parse("F(S1 x R^2, 2)")
    assert parse("so3") == RP3
    assert parse("T1") == S1
    assert parse("pt") == Point()
    assert parse("(S1 x R^1)^2") == Product((Product((S1, Euclidean(1))),) * 2)


@pytest.mark.parametrize(
    "text,pos",
    [("S1 x", 4), ("wedge(S1 S2)", 9), ("F(S1, 3)", 6), ("S1 + S2", 3), ("SO11", 0), ("RP2", 0), ("S0", 0)],
)
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(SpaceSyntaxError) as info:
        parse(text)
    assert info.value.pos == pos


def test_configuration_space_needs_a_group():
    for text in ["F(S2 x R^1, 2)", "F(wedge(S1, S1) x R^1, 2)", "F(S1 x S1, 2)"]:
        with pytest.raises(SpaceSemanticError):
            parse(text)
    parse("F(T2 x R^1, 2)")
    parse("F(S3 x R^4, 2)")
    parse("F(SO5 x R^1, 2)")


def test_normalize_examples():
    assert normalize(parse("F(S1 x R^1, 2)")) == Product((S1, Wedge((S1, S1))))
    assert normalize(parse("F(RP3 x R^3, 2)")) == Product((RP3, Wedge((RP3, Sphere(5)))))
    assert normalize(parse("(S1 x R^4)^2")) == Product((S1, S1))
    assert normalize(parse("R^3")) == Point()
    assert normalize(parse("F(S3, 2)")) == Sphere(3)
    with pytest.raises(SpaceSemanticError):
        normalize(parse("F(RP3, 2)"))


def test_dimensions():
    assert parse("S1 x wedge(S1, S3)").dim == 4
    assert parse("F(RP3 x R^3, 2)").dim == 12
    assert normalize(parse("F(RP3 x R^3, 2)")).dim == 8
    assert parse("SO5").dim == 10


def test_cohomology_examples():
    assert betti(cohomology(normalize(parse("F(S1 x R^1, 2)")), Q)) == [1, 3, 2]
    assert betti(cohomology(parse("wedge(RP3, S5)"), Z2)) == [1, 1, 1, 1, 0, 1]
    assert cohomology(Point(), Q).dim == 1
    assert betti(cohomology(RP3, Q)) == [1, 0, 0, 1]
    assert betti(cohomology(parse("T3"), Q)) == [1, 3, 3, 1]
    with pytest.raises(MissingRingError):
        cohomology(parse("SO4"), Z2)


def test_so_registry():
    # cat(SO(2)) = cat(S^1), cat(SO(3)) = cat(RP^3)
    assert so_category(2) == 2
    assert so_category(3) == 4
    assert [so_category(m) for m in (4, 5, 6)] == [5, 9, 10]
    assert parse("SO4") == GroupAtom("SO4", 6, True, 5)


leaves = st.one_of(
    st.integers(1, 6).map(Sphere),
    st.integers(1, 3).map(Euclidean),
    st.just(RP3),
    st.just(Point()),
    st.integers(2, 3).map(lambda k: GroupAtom(f"T{k}", k)),
)


def _compound(children):
    return st.one_of(
        st.lists(children, min_size=2, max_size=3).map(lambda cs: Product(tuple(cs))),
        st.lists(children, min_size=2, max_size=3).map(lambda cs: Wedge(tuple(cs))),
    )


configs = st.tuples(st.sampled_from([S1, Sphere(3), RP3, GroupAtom("T2", 2)]), st.integers(0, 3)).map(
    lambda gn: Config2(Product((gn[0], Euclidean(gn[1]))) if gn[1] else gn[0])
)
exprs = st.recursive(st.one_of(leaves, configs), _compound, max_leaves=6)


@settings(max_examples=200, deadline=None)
@given(exprs)
def test_render_parse_roundtrip(e):
    assert parse(render(e)) == e


@settings(max_examples=200, deadline=None)
@given(exprs)
def test_normalize_idempotent_and_clean(e):
    try:
        n = normalize(e)
    except SpaceSemanticError:
        return
    assert normalize(n) == n

    def walk(x):
        assert not isinstance(x, (Config2, Euclidean))
        if isinstance(x, (Product, Wedge)):
            assert len(x.children) >= 2
            for c in x.children:
                assert not isinstance(c, (Point, type(x)))
                walk(c)

    walk(n)
    assert n.dim <= e.dim
