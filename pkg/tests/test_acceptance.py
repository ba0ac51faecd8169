"""Acceptance criteria, one test per criterion.  Each test prints a PASS/FAIL
line with its runtime; the lines are repeated in the pytest terminal summary.

Run alone with:  pytest tests/test_acceptance.py -v -s
"""
import math
import os

import numpy as np

from acceptance_log import criterion
from expsub import amoeba as am
from expsub.expansivity import AnalysisConfig, analyze, ranks
from expsub.formats import read_input
from expsub.fporacle import FpSystem, classify_directions
from expsub.geometry import IN, circle_directions
from expsub.groebner import (Ideal, ModulePresentation, determinant, directional_noetherian,
                             fitting_ideal, krull_dimension, laurent_member, nn_set)
from expsub.homoclinic import (convolution_check, eins_ward_fundamental, eins_ward_relation_defects,
                               geometric_series_oracle, homoclinic_along, ledrappier_family_series,
                               principal_homoclinic)
from expsub.laurent import Direction, LaurentPoly, exposed_margin, is_h_monic, parse_poly

INPUTS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "inputs")


def P(s, d=2):
    return parse_poly(s, None, d)


def unit_angle(deg):
    t = math.radians(deg)
    return Direction.from_vector((math.cos(t), math.sin(t)))


def point_witnesses(s):
    assert all(c.kind == "point" for c in s.cells), s.describe()
    return sorted(tuple(c.extreme_rays()[0]) for c in s.cells)


def equivalent_up_to_unit(f, g):
    """f = +-u^k g for some k."""
    a, b = f.normalize_shift(), g.normalize_shift()
    return a == b or a == -b


# ---------------------------------------------------------------------------

def test_c01_ledrappier_exact():
    with criterion(1, "Ledrappier N = {pi/4, pi, 3pi/2}, N^v empty certified", 1.0):
        rep = analyze(Ideal([P("2"), P("1 + u + v")]))
        assert rep.n.mode == "exact"
        assert point_witnesses(rep.n) == [(-1, 0), (0, -1), (1, 1)]
        assert rep.nv.is_empty() and rep.nv.mode == "exact"
        assert rep.flags["nv_empty_by_torsion"] and rep.flags["integer_in_ideal"] == 2


def test_c02_one_variable_table():
    table = {
        "u^2 - u - 1": (set(), {1, -1}),
        "u - 2": ({-1}, {1}),
        "2": ({1, -1}, set()),
        "2*u^2 - 6*u + 3": ({1, -1}, {1, -1}),
    }
    with criterion(2, "one-variable N^n / N^v table", 1.0):
        for text, (nn, nv) in table.items():
            rep = analyze(Ideal([P(text, 1)]))
            got_nn = {s for s in (1, -1) if rep.nn.contains((s,)) == IN}
            got_nv = {s for s in (1, -1) if rep.nv.contains((s,)) == IN}
            assert (got_nn, got_nv) == (nn, nv), text
            assert {s for s in (1, -1) if rep.n.contains((s,)) == IN} == {1, -1}


def test_c03_three_plus_u_plus_v():
    with criterion(3, "<3+u+v>: exact N^n, sampled N^v, union covers S^1", 30.0):
        rep = analyze(Ideal([P("3 + u + v")]))
        kinds = sorted((c.kind, tuple(sorted(c.extreme_rays()))) for c in rep.nn.cells)
        assert kinds == [("arc", ((-1, 0), (0, -1))), ("point", ((1, 1),))]
        assert rep.nn.mode == "exact"
        # N^v: in on (-90, 180) deg, out on the open arc (180, 270), 1 deg slack at the ends
        for deg in np.arange(-89.0, 180.0, 0.5):
            assert rep.nv.contains(unit_angle(deg)) == IN, deg
        for deg in np.arange(181.0, 269.5, 0.5):
            assert rep.nv.contains(unit_angle(deg)) != IN, deg
        for deg in np.arange(0.0, 360.0, 0.25):
            assert rep.n.contains(unit_angle(deg)) == IN, deg


def test_c04_witness_u_minus_v_plus_1():
    with criterion(4, "<u-2, v-3>: N^n = {-e1, -e2}, witness ~ u - v + 1 at (-1,-1)", 5.0):
        a = Ideal([P("u - 2"), P("v - 3")])
        certs = []
        s = nn_set(a, certs=certs)
        assert point_witnesses(s) == [(-1, 0), (0, -1)]
        diag = [c for c in certs if c.direction.witness == (-1, -1)]
        assert diag and diag[0].verdict == "noetherian"
        w = diag[0].witness
        assert equivalent_up_to_unit(w, P("u - v + 1"))
        assert is_h_monic(w, Direction.from_ints((-1, -1)))
        assert laurent_member(a, w)


def _simplex_probes():
    r1 = np.ones(3) / math.sqrt(3)
    E = np.eye(3)
    mids, cents = [], [-r1]
    for k in range(3):
        j, l = [x for x in range(3) if x != k]
        mids.append(r1 - E[k])            # edge e_j e_l: rays (1,1,1) and -e_k
        mids.append(-E[j] - E[l])         # edge 0 e_k: rays -e_j and -e_l
        cents.append(r1 - E[j] - E[l])    # vertex e_k: rays (1,1,1), -e_j, -e_l
    unit = lambda x: x / np.linalg.norm(x)
    return [unit(m) for m in mids], [unit(c) for c in cents]


def test_c05_ledrappier_3d():
    with criterion(5, "3D Ledrappier: six arc midpoints in N^n, four cell centroids out", 120.0):
        s = nn_set(Ideal([P("2", 3), P("1 + u + v + w", 3)]), "sampled", 1.0)
        mids, cents = _simplex_probes()
        assert all(s.contains(Direction.from_vector(tuple(m))) == IN for m in mids)
        assert all(s.contains(Direction.from_vector(tuple(c))) != IN for c in cents)


def test_c06_eins_ward():
    with criterion(6, "eins-ward: non-Noetherian rays, lopsided certificate, cusps", 120.0):
        spec = read_input(os.path.join(INPUTS, "eins_ward.txt"))
        a = spec.ideal()
        for x, y in [(1, 1), (1, 2), (2, 1)]:
            assert directional_noetherian(a, Direction.from_ints((0, -x, -y))).verdict == "not-noetherian"
        ev = am.expansive_check(a)
        assert ev.verdict == "expansive-certified" and ev.method == "lopsided-generator"
        assert ev.witness == P("w - 2", 3)
        rep = analyze(a, AnalysisConfig(angular_res_deg=1.0, param_map=spec.param_map))
        assert rep.nv.contains((0, 0, 1)) == IN
        # tendrils of the planar amoeba of 1+u+v, from an independent 2D sample
        tendrils = am.asymptotic_directions(am.hypersurface_sample(P("1 + u + v")))
        assert len(tendrils) == 3
        cusps = am.asymptotic_directions(rep.cloud)
        assert len(cusps) == 3
        for c in cusps:
            assert rep.nv.contains(Direction.from_vector(tuple(c))) == IN
            assert abs(math.degrees(math.asin(c[2]))) < 2.0          # equatorial
            eq = np.array(c[:2]) / np.linalg.norm(c[:2])
            gap = min(math.degrees(math.acos(min(1.0, float(eq @ t)))) for t in tendrils)
            assert gap < 2.0


def test_c07_kdim_below_exprk():
    with criterion(7, "kdim 2 < exprk 3: slice curve, krull, rank search", 180.0):
        th = 2 * math.pi * np.arange(4096) / 4096
        z = np.exp(1j * th)
        phi = z ** 2 - z - 1j
        psi = z ** 2 + z - 2j
        m = np.maximum(np.abs(np.log(np.abs(phi))), np.abs(np.log(np.abs(psi))))
        assert m.min() > 0.05
        a = read_input(os.path.join(INPUTS, "strict_rank.txt")).ideal()
        assert krull_dimension(a) == 2
        rk = ranks(a, AnalysisConfig(), n_samples=250)
        assert sum(rk.searched.values()) == 500
        assert not rk.expansive_planes
        assert rk.expansive == "expansive-certified"
        assert rk.exprk == 3 and rk.exprk_lower_sampled
        assert rk.kdim == 2


def test_c08_homoclinic_one_variable():
    with criterion(8, "u-2 homoclinic point vs geometric series, convolution defect", 5.0):
        f = P("u - 2", 1)
        w = principal_homoclinic(f, 32)
        oracle = geometric_series_oracle(2, 32)
        for n in range(-32, 33):
            assert abs(w.lift_at((n,)) - float(oracle[n])) < 1e-9, n
        d = convolution_check(f, w)
        assert d.mod1 < 1e-9 and d.lift < 1e-9


def test_c09_explicit_formulas():
    with criterion(9, "series recurrence, eins-ward relations, decay verdicts", 30.0):
        s = ledrappier_family_series(1, 2, 24)
        assert s.recurrence_defect() == 0
        w = eins_ward_fundamental(10)
        assert eins_ward_relation_defects(w) == (0, 0)
        inside = homoclinic_along(w, [(1, 1, 0), (0, 0, 1)])
        horizontal = homoclinic_along(w, [(1, 0, 0), (0, 1, 0)])
        assert inside.verdict == "decays" and horizontal.verdict == "flat"


def test_c10_oracle_agreement():
    with criterion(10, "GF(2) coding oracle agrees with analyze (2D exact, 3D sampled)", 180.0):
        rep = analyze(Ideal([P("2"), P("1 + u + v")]))
        U = circle_directions(360)
        oracle = classify_directions(FpSystem(2, 2, [P("1 + u + v")]), U)
        step = 2 * math.pi / 360
        for u, expansive in zip(U, oracle):
            in_n = rep.n.contains(Direction.from_vector(tuple(u))) == IN
            if in_n == expansive:
                # disagreement allowed only within one sample step of N
                near = min(math.acos(min(1.0, float(u @ np.array(p) / np.linalg.norm(p))))
                           for p in point_witnesses(rep.n))
                assert near <= step, u
        assert sum(not e for e in oracle) == 3

        rep3 = analyze(Ideal([P("2", 3), P("1 + u + v + w", 3)]), AnalysisConfig(angular_res_deg=1.0))
        rng = np.random.default_rng(0)
        V = rng.normal(size=(100, 3))
        V /= np.linalg.norm(V, axis=1)[:, None]
        oracle3 = classify_directions(FpSystem(2, 3, [P("1 + u + v + w", 3)]), V)
        ins = np.vstack([m.in_dirs() for m in rep3.n.mask.leaves()])
        step3 = math.sqrt(4 * math.pi / 100)
        for v, expansive in zip(V, oracle3):
            in_n = rep3.n.contains(Direction.from_vector(tuple(v))) == IN
            if in_n == expansive:
                assert math.acos(min(1.0, float((ins @ v).max()))) <= step3, v


# ---------------------------------------------------------------------------
# criterion 11: randomized property suites with a fixed seed

def _random_poly(rng, d, deg, terms, coef=3):
    out = {}
    for _ in range(terms):
        n = tuple(int(x) for x in rng.integers(0, deg + 1, size=d))
        c = int(rng.integers(-coef, coef + 1))
        if c:
            out[n] = out.get(n, 0) + c
    return LaurentPoly(d, out)


def _random_direction(rng, d, h=6):
    while True:
        v = tuple(int(x) for x in rng.integers(-h, h + 1, size=d))
        if any(v):
            return Direction.from_ints(v)


def _witness_soundness(rng):
    checked = 0
    for _ in range(12):
        a = Ideal([g for g in (_random_poly(rng, 2, 2, 3), _random_poly(rng, 2, 2, 3)) if not g.is_zero()]
                  or [P("1 + u + v")])
        for _ in range(4):
            v = _random_direction(rng, 2)
            c = directional_noetherian(a, v, 4000)
            if c.verdict == "noetherian":
                assert is_h_monic(c.witness, v)
                assert laurent_member(a, c.witness, 4000)
                checked += 1
    assert checked > 0


def _union_law(rng):
    cfg = AnalysisConfig(angular_res_deg=1.0)
    for text in (["2", "1 + u + v"], ["3 + u + v"], ["u - 2", "v - 3"], ["1 + u + v", "u*v - 2"]):
        rep = analyze(Ideal([P(t) for t in text]), cfg)
        for th in rng.uniform(0, 2 * math.pi, 60):
            v = Direction.from_vector((math.cos(th), math.sin(th)))
            assert (rep.n.contains(v) == IN) == (rep.nn.contains(v) == IN or rep.nv.contains(v) == IN)


def _fitting_containment(rng):
    for _ in range(10):
        r = int(rng.integers(2, 4))
        rows = [[_random_poly(rng, 2, 1, 2) for _ in range(2)] for _ in range(r)]
        M = ModulePresentation(rows, 2)
        fi, zero = fitting_ideal(M)
        if zero:
            continue
        # each 2x2 minor D satisfies D e_k = sum_i adj[k][i] row_i, so D kills the module
        for i in range(r):
            for j in range(i + 1, r):
                A = [rows[i], rows[j]]
                D = determinant(A)
                adj = [[A[1][1], -A[0][1]], [-A[1][0], A[0][0]]]
                for k in range(2):
                    comb = [adj[k][0] * A[0][c] + adj[k][1] * A[1][c] for c in range(2)]
                    assert comb == [D if c == k else LaurentPoly.zero(2) for c in range(2)]
                assert D.is_zero() or D in fi.gens


def _principal_fullness(rng):
    cfg = AnalysisConfig(angular_res_deg=1.0)
    done = 0
    while done < 25:
        f = _random_poly(rng, 2, 3, 4)
        if f.is_zero() or f.is_monomial() and abs(next(iter(f.terms.values()))) == 1:
            continue
        rep = analyze(Ideal([f]), cfg)
        for th in rng.uniform(0, 2 * math.pi, 24):
            assert rep.n.contains(Direction.from_vector((math.cos(th), math.sin(th)))) == IN, (str(f), th)
        done += 1


def _rank_ordering(rng):
    cfg = AnalysisConfig(rank_samples=20)
    for text, d in ((["2", "1 + u + v"], 2), (["u - 2"], 1), (["3 + u + v"], 2), (["2", "u - 1"], 2)):
        rk = ranks(Ideal([P(t, d) for t in text]), cfg)
        if rk.entrk_lower is not None and rk.exprk_upper is not None:
            assert rk.entrk_lower <= rk.exprk_upper


def _closedness(rng):
    probes = 0
    for _ in range(10):
        a = Ideal([_random_poly(rng, 2, 2, 3) or P("u - 2"), P("2")])
        v = _random_direction(rng, 2)
        c = directional_noetherian(a, v, 4000)
        if c.verdict != "noetherian":
            continue
        margin = exposed_margin(c.witness, v)
        assert margin > 0
        pts = np.array(list(c.witness.terms), float)
        diam = max(1.0, float(np.ptp(pts, axis=0).max()) * math.sqrt(2))
        # a nudge smaller than margin / diam keeps the same exposed vertex
        delta = 0.5 * min(margin, 1.0) / diam
        for _ in range(3):
            eps = rng.normal(size=2)
            u = np.array(v.unit) + delta * eps / np.linalg.norm(eps)
            w = Direction.from_ints(tuple(int(x) for x in np.round(u * 10 ** 6)))
            assert is_h_monic(c.witness, w)
            assert directional_noetherian(a, w, 4000).verdict == "noetherian"
            probes += 1
    assert probes > 0


def test_c11_property_suites():
    with criterion(11, "randomized property suites (fixed seed)", 120.0):
        rng = np.random.default_rng(20240611)
        _witness_soundness(rng)
        _union_law(rng)
        _fitting_containment(rng)
        _principal_fullness(rng)
        _rank_ordering(rng)
        _closedness(rng)
