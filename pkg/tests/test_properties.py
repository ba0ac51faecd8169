"""Randomised laws for polynomials, hulls, sets and certificates."""
import cmath

from hypothesis import assume, given, strategies as st

from expsub.geometry import IN, SphericalSet, convex_hull, sset_union
from expsub.groebner import Ideal, directional_noetherian, laurent_member
from expsub.laurent import (Direction, LaurentPoly, exposed_vertex, format_poly, is_h_monic,
                            parse_poly)

exps = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
coeffs = st.integers(-5, 5).filter(bool)


@st.composite
def polys(draw, max_terms=4):
    terms = draw(st.dictionaries(exps, coeffs, min_size=1, max_size=max_terms))
    return LaurentPoly(2, terms)


ints = st.tuples(st.integers(-6, 6), st.integers(-6, 6)).filter(any)
torus = st.tuples(st.floats(0.3, 3.0), st.floats(-3.2, 3.2), st.floats(0.3, 3.0), st.floats(-3.2, 3.2))


@given(polys())
def test_print_parse_roundtrip(f):
    assert parse_poly(format_poly(f), None, 2) == f


@given(polys(), polys(), polys())
def test_ring_laws(f, g, h):
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@given(polys(), polys(), torus)
def test_evaluate_is_a_homomorphism(f, g, t):
    z = (cmath.rect(t[0], t[1]), cmath.rect(t[2], t[3]))
    lhs = (f * g).evaluate(z)
    rhs = f.evaluate(z) * g.evaluate(z)
    assert abs(lhs - rhs) <= 1e-9 * (1 + abs(rhs))


@given(polys(), ints)
def test_exposed_vertex_is_a_hull_vertex(f, w):
    n = exposed_vertex(f, Direction.from_ints(w))
    if n is None:
        return
    assert n in convex_hull(list(f.terms)).vertices
    best = max(a * w[0] + b * w[1] for a, b in f.terms)
    assert n[0] * w[0] + n[1] * w[1] == best


@given(polys(), ints, exps, st.sampled_from([1, -1]))
def test_h_monic_ignores_units(f, w, k, sign):
    v = Direction.from_ints(w)
    g = f.shift(k).scale(sign)
    assert is_h_monic(g, v) == is_h_monic(f, v)


@given(st.lists(exps, min_size=1, max_size=10))
def test_hull_is_idempotent(pts):
    h = convex_hull(pts)
    assert set(convex_hull(list(h.vertices)).vertices) == set(h.vertices)


@given(st.lists(ints, max_size=4), st.lists(ints, max_size=4), ints)
def test_union_law(a, b, probe):
    A, B = SphericalSet.points(2, a), SphericalSet.points(2, b)
    U = sset_union(A, B)
    v = Direction.from_ints(probe)
    assert (U.contains(v) == IN) == (A.contains(v) == IN or B.contains(v) == IN)


@given(polys(max_terms=3), ints)
def test_principal_certificate_soundness(f, w):
    assume(not f.is_monomial())
    v = Direction.from_ints(w)
    a = Ideal([f])
    c = directional_noetherian(a, v)
    if exposed_vertex(f, v) is not None:
        assert (c.verdict == "noetherian") == is_h_monic(f, v)
    if c.verdict == "noetherian":
        assert is_h_monic(c.witness, v)
        assert laurent_member(a, c.witness)
