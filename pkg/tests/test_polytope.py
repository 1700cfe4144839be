from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oscillab.poly import parse
from oscillab.polytope import (
    build_polytope,
    compact_faces,
    is_convenient,
    newton_distance,
    newton_polytope,
    pair_distance_and_radii,
)

F = Fraction


def test_diagonal_quartic_facets():
    p = newton_polytope(parse("x1^4 + x2^4", 2))
    assert set(p.generators) == {(4, 0), (0, 4)}
    assert len(p.facets) == 1
    (facet,) = p.facets
    assert facet.weights == (F(1, 4), F(1, 4))
    assert facet.denominator == 4
    assert facet.r_value == 2
    assert facet.compact


def test_mixed_degree_facet():
    p = newton_polytope(parse("x1^2 + x2^4", 2))
    (facet,) = p.facets
    assert facet.weights == (F(1, 2), F(1, 4))
    assert facet.denominator == 4
    assert facet.r_value == 3


def test_interior_minimal_point_is_not_a_generator():
    # (1, 1) sits on the boundary segment between (2, 0) and (0, 2)
    p = build_polytope([(2, 0), (0, 2), (1, 1)])
    assert set(p.generators) == {(2, 0), (0, 2), (1, 1)}
    # ...but a strictly interior minimal point is dropped
    q = build_polytope([(2, 0), (0, 2), (2, 2)])
    assert set(q.generators) == {(2, 0), (0, 2)}


def test_dominated_support_points_are_dropped():
    p = build_polytope([(4, 0), (0, 4), (6, 0), (5, 5)])
    assert set(p.generators) == {(4, 0), (0, 4)}


def test_three_dimensional_sixfold_generator_set():
    f = parse("(x1^2 + x2^2 + x3^2)^2 + x1^6 + x2^6 + x3^6", 3)
    p = newton_polytope(f)
    assert set(p.generators) == {
        (4, 0, 0), (0, 4, 0), (0, 0, 4),
        (2, 2, 0), (2, 0, 2), (0, 2, 2),
    }
    t0, principal = newton_distance(p)
    assert t0 == F(4, 3)
    # every principal facet has positive weights
    assert all(f.compact for f in principal)


def test_convenient_and_intercepts():
    p = newton_polytope(parse("x1^2 + x2^4", 2))
    ok, intercepts = is_convenient(p)
    assert ok and intercepts == [2, 4]
    q = newton_polytope(parse("x1*x2", 2))
    ok, intercepts = is_convenient(q)
    assert not ok and intercepts is None
    assert {f.weights for f in q.facets} == {(F(1), F(0)), (F(0), F(1))}
    assert not any(f.compact for f in q.facets)


def test_origin_in_support_gives_full_orthant():
    p = build_polytope([(0, 0), (3, 1)])
    assert p.generators == ((0, 0),)
    assert p.facets == ()
    ok, intercepts = is_convenient(p)
    assert ok and intercepts == [0, 0]
    t0, principal = newton_distance(p)
    assert t0 == 0 and principal == []


def test_newton_distance_diagonal():
    p = newton_polytope(parse("x1^4 + x2^4", 2))
    t0, principal = newton_distance(p)
    assert t0 == 2
    assert len(principal) == 1
    q = newton_polytope(parse("x1^2 + x2^4", 2))
    t0q, _ = newton_distance(q)
    assert t0q == F(4, 3)


def test_newton_distance_requires_convenient():
    p = newton_polytope(parse("x1*x2", 2))
    with pytest.raises(ValueError):
        newton_distance(p)


def test_compact_faces_diagonal_quartic():
    p = newton_polytope(parse("x1^4 + x2^4", 2))
    faces = compact_faces(p)
    dims = sorted(f.dim for f in faces)
    assert dims == [0, 0, 1]
    for f in faces:
        assert all(w > 0 for w in f.weights)
        assert all(f.value(g) == 1 for g in f.generators)
    edge = [f for f in faces if f.dim == 1][0]
    assert set(edge.generators) == {(4, 0), (0, 4)}


def test_compact_faces_exclude_unbounded_faces():
    # x1^2 + x1*x2^2: not convenient, so compact-face enumeration must refuse
    p = newton_polytope(parse("x1^2 + x1*x2^2", 2))
    with pytest.raises(ValueError):
        compact_faces(p)


def test_pair_distance_trivial_amplitude():
    pf = newton_polytope(parse("x1^4 + x2^4", 2))
    pphi = build_polytope([(0, 0)])
    d, r, rprime = pair_distance_and_radii(pf, pphi)
    assert d == 2 and r == 4 and rprime == 0
    # the distance bound d <= r / (r' + n) holds with equality here
    assert d == r / (rprime + pf.n)


def test_pair_distance_monomial_amplitude():
    pf = newton_polytope(parse("x1^4 + x2^4", 2))
    pphi = build_polytope([(2, 2)])
    d, r, rprime = pair_distance_and_radii(pf, pphi)
    # shifted generator (3, 3) has facet value 6/4, so d = 4/6
    assert d == F(2, 3)
    assert rprime == 4
    assert d <= r / (rprime + pf.n)


def test_pair_distance_extremality():
    """d*(g+1) lands inside the phase polytope, and no smaller scale does."""
    pf = newton_polytope(parse("x1^2 + x2^4", 2))
    pphi = build_polytope([(1, 1), (0, 3)])
    d, _, _ = pair_distance_and_radii(pf, pphi)
    shifted = [[gi + 1 for gi in g] for g in pphi.generators]
    assert all(pf.contains([d * x for x in pt]) for pt in shifted)
    eps = F(1, 1000)
    assert any(not pf.contains([(d - eps) * x for x in pt]) for pt in shifted)


@st.composite
def supports(draw, n=2):
    k = draw(st.integers(1, 5))
    return [
        tuple(draw(st.integers(0, 6)) for _ in range(n))
        for _ in range(k)
    ]


@given(supports())
@settings(max_examples=40, deadline=None)
def test_polytope_is_up_closed_and_contains_support(support):
    p = build_polytope(support)
    for pt in support:
        assert p.contains(pt)
        assert p.contains([pt[0] + 3, pt[1] + 1])
    # facet weights are nonnegative and each generator saturates some facet
    for f in p.facets:
        assert all(w >= 0 for w in f.weights)
    for g in p.generators:
        assert not p.facets or any(f(g) == 1 for f in p.facets)


@given(supports())
@settings(max_examples=30, deadline=None)
def test_build_is_idempotent_on_generators(support):
    p = build_polytope(support)
    q = build_polytope(p.generators)
    assert q.generators == p.generators
    assert q.facets == p.facets


def test_json_shape():
    p = newton_polytope(parse("x1^2 + x2^4", 2))
    d = p.to_json_dict()
    assert set(d) == {"n", "generators", "facets"}
    assert d["n"] == 2
    (facet,) = d["facets"]
    assert set(facet) == {"weights", "dj", "rj", "compact"}
    assert facet["weights"] == ["1/2", "1/4"]
    assert facet["dj"] == 4 and facet["rj"] == 3 and facet["compact"] is True


def test_dimension_limit():
    with pytest.raises(ValueError):
        build_polytope([(1, 0, 0, 0, 0)])
