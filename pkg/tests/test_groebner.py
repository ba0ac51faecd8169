from fractions import Fraction

import numpy as np
import pytest
import sympy

from expsub.groebner import (BudgetExceeded, Ideal, ModulePresentation, WeightTermOrder,
                             contains_integer, directional_noetherian, field_gb, fitting_ideal,
                             grevlex, krull_dimension, laurent_member, nn_set, strong_gb)
from expsub.laurent import Direction, LaurentPoly, is_h_monic, parse_poly

X = sympy.symbols("x0:3")


def P(s, d=2):
    return parse_poly(s, None, d)


def D(s, n):
    """Polynomial dict in n ordinary variables x0..x{n-1}."""
    p = sympy.Poly(sympy.sympify(s), *X[:n])
    return {m: int(c) for m, c in p.as_dict().items()}


def to_sympy(p: dict, n):
    return sympy.Poly.from_dict({m: sympy.Rational(str(c)) for m, c in p.items()}, *X[:n])


def random_dict(rng, n, deg=2, terms=3):
    out = {}
    for _ in range(terms):
        m = tuple(int(x) for x in rng.integers(0, deg + 1, size=n))
        c = int(rng.integers(-4, 5))
        if c:
            out[m] = out.get(m, 0) + c
    return {m: c for m, c in out.items() if c}


def order_for(v):
    signs = tuple(1 if x >= 0 else -1 for x in v)
    return WeightTermOrder(signs, tuple(abs(x) for x in v)).term_order()


# ---------------------------------------------------------------------------
# strong bases over Z

def test_strong_gb_ledrappier_is_its_own_basis():
    gb = strong_gb([D("2", 2), D("1 + x0 + x1", 2)], grevlex(2), 2)
    assert sorted(map(sorted, (g.items() for g in gb.basis))) == \
        sorted(map(sorted, (g.items() for g in [D("2", 2), D("1 + x0 + x1", 2)])))


def test_strong_gb_single_generator():
    gb = strong_gb([D("x0 - 2", 1)], grevlex(1), 1)
    assert gb.basis == [D("x0 - 2", 1)]


def test_strong_gb_cross_element():
    gb = strong_gb([D("x0 - 2", 2), D("x1 - 3", 2)], grevlex(2), 2)
    assert {gb.leads()[i][0] for i in range(len(gb.basis))} == {(1, 0), (0, 1)}
    assert gb.contains(D("x0 - x1 + 1", 2))
    assert not gb.contains(D("x0 - x1", 2))


def test_strong_gb_needs_g_polynomials():
    # 2x and 3y: the basis over Z must produce xy (the G-polynomial of the
    # leading terms is the lcm xy), and membership of x*y follows
    gb = strong_gb([D("2*x0 + 1", 2), D("3*x0 + x1", 2)], grevlex(2), 2)
    for c in ([D("x0*(2*x0+1) - 4*(3*x0+x1)", 2)] + [D("6*x0 + 3 - 2*(3*x0 + x1)", 2)]):
        assert gb.contains(c)
    assert not gb.contains(D("x0", 2))


def test_strong_gb_membership_of_random_combinations():
    rng = np.random.default_rng(5)
    for _ in range(15):
        gens = [g for g in (random_dict(rng, 2), random_dict(rng, 2)) if g]
        if not gens:
            continue
        try:
            gb = strong_gb(gens, grevlex(2), 2, 3000)
        except BudgetExceeded:
            continue
        for _ in range(3):
            comb = sympy.Integer(0)
            for g in gens:
                comb += to_sympy(random_dict(rng, 2, 1, 2) or {(0, 0): 1}, 2).as_expr() * to_sympy(g, 2).as_expr()
            p = sympy.Poly(sympy.expand(comb), *X[:2]).as_dict()
            assert gb.contains({m: int(c) for m, c in p.items()})


def test_strong_gb_q_span_matches_sympy():
    """Over Q the strong basis generates the same ideal as the input."""
    rng = np.random.default_rng(6)
    for _ in range(10):
        gens = [g for g in (random_dict(rng, 3), random_dict(rng, 3)) if g]
        if not gens:
            continue
        try:
            gb = strong_gb(gens, grevlex(3), 3, 3000)
        except BudgetExceeded:
            continue
        ref = sympy.groebner([to_sympy(g, 3).as_expr() for g in gens], *X, order="grevlex")
        got = sympy.groebner([to_sympy(g, 3).as_expr() for g in gb.basis], *X, order="grevlex")
        assert list(ref.exprs) == list(got.exprs)


# ---------------------------------------------------------------------------
# field bases against sympy

def monic(p: dict, mod):
    """Scale so the grevlex-leading coefficient is 1 (coefficients as Fractions)."""
    lm = max(p, key=grevlex(3).key)
    c = Fraction(p[lm])
    if mod:
        inv = pow(int(c) % mod, -1, mod)
        return frozenset((m, int(a) * inv % mod) for m, a in p.items() if int(a) % mod)
    return frozenset((m, Fraction(a) / c) for m, a in p.items())


@pytest.mark.parametrize("mod", [None, 2, 5])
def test_field_gb_matches_sympy(mod):
    rng = np.random.default_rng(7 if mod is None else mod)
    for _ in range(12):
        gens = [g for g in (random_dict(rng, 3), random_dict(rng, 3), random_dict(rng, 3, 1)) if g]
        if mod:
            gens = [{m: c % mod for m, c in g.items() if c % mod} for g in gens]
            gens = [g for g in gens if g]
        if not gens:
            continue
        ours = {monic(g, mod) for g in field_gb(gens, grevlex(3), mod)}
        kw = {"modulus": mod} if mod else {}
        ref = sympy.groebner([to_sympy(g, 3).as_expr() for g in gens], *X, order="grevlex", **kw)
        theirs = set()
        for e in ref.exprs:
            d = sympy.Poly(e, *X, **kw).as_dict()
            theirs.add(monic({m: Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) if not mod
                              else int(c) for m, c in d.items()}, mod))
        assert ours == theirs


# ---------------------------------------------------------------------------
# directional test

def test_directional_examples():
    c = directional_noetherian(Ideal([P("u - 2"), P("v - 3")]), Direction.from_ints((-1, -1)))
    assert c.verdict == "noetherian"
    assert c.witness.normalize_shift() in (P("u - v + 1"), -P("u - v + 1"))
    c = directional_noetherian(Ideal([P("2"), P("1 + u + v")]), Direction.from_ints((-1, 0)))
    assert c.verdict == "not-noetherian" and c.witness is None
    c = directional_noetherian(Ideal([P("1 + u + v", 3), P("w - 2", 3)]), Direction.from_ints((0, -1, -1)))
    assert c.verdict == "not-noetherian"


def test_directional_needs_rational():
    with pytest.raises(ValueError):
        directional_noetherian(Ideal([P("u - 2")]), Direction.from_vector((1.0, 2 ** 0.5)))


def test_directional_without_shortcut_agrees():
    a = Ideal([P("2"), P("1 + u + v")])
    for w in [(1, 0), (0, 1), (1, 1), (-1, 0), (-1, 2), (2, -1), (0, -1)]:
        v = Direction.from_ints(w)
        x = directional_noetherian(a, v)
        y = directional_noetherian(a, v, use_shortcut=False)
        assert x.verdict == y.verdict, w


def test_principal_consistency():
    f = P("3 + u + v")
    for w in [(1, 0), (0, 1), (1, 1), (-1, 0), (-1, -1), (2, 1), (1, -3)]:
        v = Direction.from_ints(w)
        c = directional_noetherian(Ideal([f]), v, use_shortcut=False)
        assert (c.verdict == "noetherian") == is_h_monic(f, v), w


def test_budget_reports_undecided():
    a = Ideal([P("3*u^3 + 5*v^2 + 7*u*v"), P("5*u^2*v - 3*v^3 + 2")])
    c = directional_noetherian(a, Direction.from_ints((2, -3)), budget=1)
    assert c.verdict == "undecided"


# ---------------------------------------------------------------------------
# N^n

def test_nn_set_examples():
    s = nn_set(Ideal([P("3 + u + v")]))
    kinds = sorted((c.kind, tuple(sorted(c.extreme_rays()))) for c in s.cells)
    assert kinds == [("arc", ((-1, 0), (0, -1))), ("point", ((1, 1),))]
    s = nn_set(Ideal([P("2", 1)]))
    assert s.contains((1,)) == "in" and s.contains((-1,)) == "in"


def test_nn_set_order_invariance():
    base = [P("u - 2"), P("v - 3")]
    ref = nn_set(Ideal(base))
    alt = nn_set(Ideal([base[1] * P("u^-1 * v^2"), -base[0]]))
    for k in range(72):
        v = Direction.from_angle(2 * np.pi * (k + 0.5) / 72)
        assert ref.contains(v) == alt.contains(v)
    for w in [(-1, 0), (0, -1), (1, 0)]:
        assert ref.contains(w) == alt.contains(w)


# ---------------------------------------------------------------------------
# integers, dimension, Fitting ideals

def test_contains_integer_examples():
    assert contains_integer(Ideal([P("2"), P("1 + u + v")])) == 2
    assert contains_integer(Ideal([P("u - 2")])) is None
    # 2 = (u-2) - (u-4) lies in the ideal, and so does u, a unit of the Laurent ring
    assert contains_integer(Ideal([P("u - 2", 1), P("u - 4", 1)])) == 1
    # 6 lies in the ideal and u = 2 is a unit modulo it, so 3 does too
    assert contains_integer(Ideal([P("u - 2", 1), P("u + 4", 1)])) == 3


def test_contains_integer_against_rational_basis():
    """Over Q the ideal meets Z exactly when its basis is {1}."""
    rng = np.random.default_rng(8)
    for _ in range(12):
        gens = [LaurentPoly(2, g) for g in (random_dict(rng, 2, 2, 3), random_dict(rng, 2, 2, 3)) if g]
        if not gens:
            continue
        m = contains_integer(Ideal(gens))
        t = sympy.Symbol("t")
        exprs = [to_sympy(dict(g.normalize_shift().terms), 2).as_expr() for g in gens]
        ref = sympy.groebner(exprs + [X[0] * X[1] * t - 1], *X[:2], t, order="grevlex")
        assert (m is not None) == (list(ref.exprs) == [1])


def test_krull_examples():
    assert krull_dimension(Ideal([], dim=2)) == 3
    assert krull_dimension(Ideal([P("2"), P("1 + u + v")])) == 1
    assert krull_dimension(Ideal([P("u - 2")])) == 2
    a = Ideal([P("(u^2 - u - v)^2 + 1", 3), P("w - 2*v + u^2 - 3*u", 3)])
    assert krull_dimension(a) == 2
    with pytest.raises(ValueError):
        krull_dimension(Ideal([P("1")]))


def test_fitting_examples():
    one = ModulePresentation([[P("u - 2")], [P("v - 3")]])
    assert set(fitting_ideal(one)[0].gens) == {P("u - 2"), P("v - 3")}
    assert fitting_ideal(ModulePresentation([[P("2"), P("0")], [P("0"), P("3")]]))[0].gens == (P("6"),)
    f, zero = fitting_ideal(ModulePresentation([[P("u - 2"), P("0")], [P("0"), P("v - 3")]]))
    assert not zero and f.gens == (P("(u - 2)*(v - 3)"),)
    f, zero = fitting_ideal(ModulePresentation([[P("u"), P("u")]]))
    assert zero


def test_laurent_membership():
    a = Ideal([P("u - 2"), P("v - 3")])
    assert laurent_member(a, P("u^-1 * v - 3 * u^-1"))
    assert not laurent_member(a, P("1"))
