"""Strong Groebner bases over the integers and the directional Noetherian test.

Internal polynomials are plain dicts ``{exponent tuple: int}`` with nonnegative
exponents.  Term orders are objects with a ``key`` method; larger keys are
larger monomials.  Everything Laurent is pushed through an extra variable
``y`` with ``y * prod(u) - 1`` in the ideal, which inverts the variables.
"""
from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .laurent import Direction, LaurentPoly, as_direction, is_h_monic

DEFAULT_PAIR_BUDGET = 20000


class BudgetExceeded(RuntimeError):
    """The Buchberger loop ran out of pairs; the partial basis is unusable."""

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


# ---------------------------------------------------------------------------
# term orders

class TermOrder:
    """Monomial order given by a key function, with a per-instance cache."""

    def __init__(self, keyfn: Callable[[tuple], tuple], name: str = "custom"):
        self._keyfn = keyfn
        self._cache: dict = {}
        self.name = name

    def key(self, m):
        k = self._cache.get(m)
        if k is None:
            k = self._keyfn(m)
            self._cache[m] = k
        return k


def grevlex(n: int) -> TermOrder:
    return TermOrder(lambda m: (sum(m), tuple(-x for x in reversed(m))), "grevlex")


def lex(n: int) -> TermOrder:
    return TermOrder(lambda m: m, "lex")


def block_order(nelim: int) -> TermOrder:
    """Variables [0, nelim) are eliminated (compared first by total degree),
    the rest ordered by grevlex."""
    def keyfn(m):
        a, b = m[:nelim], m[nelim:]
        return (sum(a), tuple(-x for x in reversed(a)), sum(b),
                tuple(-x for x in reversed(b)))
    return TermOrder(keyfn, f"block({nelim})")


@dataclass(frozen=True)
class WeightTermOrder:
    """Order on Z[u'_1..u'_d, t, y] used by the directional test.

    ``signs`` is the orthant E, ``weights`` the nonnegative integer weight |w|
    in flipped coordinates.  y is eliminated first; t weighs sum(weights);
    among equal weights the larger t-degree is the smaller monomial; the last
    tie-break is lex on u'.
    """

    signs: tuple
    weights: tuple

    def term_order(self) -> TermOrder:
        w = self.weights
        d = len(w)
        tw = sum(w)

        def keyfn(m):
            return (m[d + 1], sum(w[j] * m[j] for j in range(d)) + tw * m[d],
                    -m[d], m[:d])
        return TermOrder(keyfn, f"weight{tuple(s * x for s, x in zip(self.signs, w))}")


# ---------------------------------------------------------------------------
# polynomial helpers on dicts

def _lead(p: dict, order: TermOrder):
    m = max(p, key=order.key)
    return m, p[m]


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_mono(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add_scaled(p: dict, q: dict, c: int, shift) -> None:
    """p += c * x^shift * q, in place."""
    for m, a in q.items():
        mm = tuple(x + y for x, y in zip(m, shift))
        s = p.get(mm, 0) + c * a
        if s:
            p[mm] = s
        else:
            p.pop(mm, None)


def _scaled(q: dict, c: int, shift) -> dict:
    return {tuple(x + y for x, y in zip(m, shift)): c * a for m, a in q.items()}


def _xgcd(a: int, b: int):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


class _Elem:
    __slots__ = ("poly", "lm", "lc")

    def __init__(self, poly, order):
        self.poly = poly
        self.lm, self.lc = _lead(poly, order)


def _reduce(p: dict, basis: Sequence[_Elem], order: TermOrder, full: bool = True) -> dict:
    """Strong reduction: a term c*x^m is reducible by g when lm(g) | m and
    lc(g) | c.  With ``full`` the tail is reduced too."""
    p = dict(p)
    if not full:
        while p:
            m, c = _lead(p, order)
            for g in basis:
                if c % g.lc == 0 and _divides(g.lm, m):
                    _add_scaled(p, g.poly, -(c // g.lc), _sub_mono(m, g.lm))
                    break
            else:
                return p
        return p
    rem: dict = {}
    while p:
        m, c = _lead(p, order)
        for g in basis:
            if c % g.lc == 0 and _divides(g.lm, m):
                _add_scaled(p, g.poly, -(c // g.lc), _sub_mono(m, g.lm))
                break
        else:
            rem[m] = c
            del p[m]
    return rem


def _normalize_sign(p: dict, order: TermOrder) -> dict:
    _, c = _lead(p, order)
    if c < 0:
        return {m: -a for m, a in p.items()}
    return p


@dataclass
class GBResult:
    basis: list            # list of dict polynomials, interreduced
    order: TermOrder
    nvars: int
    pairs_used: int

    def leads(self):
        return [_lead(g, self.order) for g in self.basis]

    def reduce(self, p: dict) -> dict:
        elems = [_Elem(g, self.order) for g in self.basis]
        return _reduce(p, elems, self.order)

    def contains(self, p: dict) -> bool:
        return not self.reduce(p)


def strong_gb(gens: Sequence[dict], order: TermOrder, nvars: int,
              budget: int = DEFAULT_PAIR_BUDGET) -> GBResult:
    """Buchberger's algorithm over Z with S- and G-polynomials.

    Pairs are taken by the normal strategy (smallest lcm first).  S-pairs
    whose leading monomials and leading coefficients are both coprime are
    skipped; G-polynomials are formed only when neither leading coefficient
    divides the other.
    """
    G: list[_Elem] = []
    heap: list = []
    counter = itertools.count()
    used = 0

    def push_pairs(h: _Elem, idx: int):
        for j, g in enumerate(G):
            if g is None:
                continue
            lcm = _lcm(g.lm, h.lm)
            key = order.key(lcm)
            coprime_m = all(min(a, b) == 0 for a, b in zip(g.lm, h.lm))
            if not (coprime_m and math.gcd(g.lc, h.lc) == 1):
                heapq.heappush(heap, (key, next(counter), "s", j, idx))
            if g.lc % h.lc and h.lc % g.lc:
                heapq.heappush(heap, (key, next(counter), "g", j, idx))

    def insert(p: dict):
        live = [g for g in G if g is not None]
        p = _reduce(p, live, order)
        if not p:
            return
        h = _Elem(_normalize_sign(p, order), order)
        # older elements whose lead the new one divides get re-queued
        requeue = []
        for j, g in enumerate(G):
            if g is not None and g.lc % h.lc == 0 and _divides(h.lm, g.lm):
                requeue.append(g.poly)
                G[j] = None
        G.append(None)
        idx = len(G) - 1
        push_pairs(h, idx)
        G[idx] = h
        for q in requeue:
            insert(q)

    for p in gens:
        if p:
            insert(dict(p))
    while heap:
        _, _, kind, i, j = heapq.heappop(heap)
        f, g = G[i], G[j]
        if f is None or g is None:
            continue
        used += 1
        if used > budget:
            raise BudgetExceeded(f"pair budget {budget} exhausted",
                                 [e.poly for e in G if e is not None])
        lcm = _lcm(f.lm, g.lm)
        sf, sg = _sub_mono(lcm, f.lm), _sub_mono(lcm, g.lm)
        if kind == "s":
            l = f.lc * g.lc // math.gcd(f.lc, g.lc)
            p = _scaled(f.poly, l // f.lc, sf)
            _add_scaled(p, g.poly, -(l // g.lc), sg)
        else:
            _, s, t = _xgcd(f.lc, g.lc)
            p = _scaled(f.poly, s, sf)
            _add_scaled(p, g.poly, t, sg)
        if p:
            insert(p)
    basis = _interreduce([e for e in G if e is not None], order)
    return GBResult(basis, order, nvars, used)


def _interreduce(elems: list[_Elem], order: TermOrder) -> list[dict]:
    # drop elements whose lead term is strongly divisible by another lead term
    keep: list[_Elem] = []
    elems = sorted(elems, key=lambda e: (order.key(e.lm), abs(e.lc)))
    for e in elems:
        if any(k.lc and e.lc % k.lc == 0 and _divides(k.lm, e.lm) for k in keep):
            continue
        keep.append(e)
    out = []
    for i, e in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        tail = dict(e.poly)
        del tail[e.lm]
        red = _reduce(tail, others + [e], order) if tail else {}
        red[e.lm] = e.lc
        out.append(red)
    return out


# ---------------------------------------------------------------------------
# field Groebner bases (Q or GF(p)), used for dimension counts

def _field_norm(p: dict, order, mod):
    m, c = _lead(p, order)
    if mod:
        inv = pow(c, -1, mod)
        return {k: (a * inv) % mod for k, a in p.items()}
    return {k: Fraction(a) / c for k, a in p.items()}


def _field_reduce(p: dict, basis, order, mod) -> dict:
    p = dict(p)
    rem = {}
    while p:
        m, c = _lead(p, order)
        for lm, g in basis:
            if _divides(lm, m):
                shift = _sub_mono(m, lm)
                for k, a in g.items():
                    kk = tuple(x + y for x, y in zip(k, shift))
                    s = p.get(kk, 0) - c * a
                    if mod:
                        s %= mod
                    if s:
                        p[kk] = s
                    else:
                        p.pop(kk, None)
                break
        else:
            rem[m] = c
            del p[m]
    return rem


def field_gb(gens: Sequence[dict], order: TermOrder, mod: int | None = None,
             budget: int = DEFAULT_PAIR_BUDGET) -> list[dict]:
    """Reduced Groebner basis over Q (mod=None) or GF(mod), monic elements."""
    basis: list = []
    pairs: list = []
    counter = itertools.count()

    def add(p):
        p = _field_reduce(p, basis, order, mod)
        if not p:
            return
        p = _field_norm(p, order, mod)
        lm, _ = _lead(p, order)
        for lm2, _g in basis:
            if not all(min(a, b) == 0 for a, b in zip(lm, lm2)):
                heapq.heappush(pairs, (order.key(_lcm(lm, lm2)), next(counter), lm2, lm))
        basis.append((lm, p))

    for g in gens:
        if mod:
            g = {k: a % mod for k, a in g.items() if a % mod}
        else:
            g = {k: Fraction(a) for k, a in g.items()}
        if g:
            add(g)
    index = lambda lm: next(g for l2, g in basis if l2 == lm)
    used = 0
    while pairs:
        _, _, a, b = heapq.heappop(pairs)
        used += 1
        if used > budget:
            raise BudgetExceeded("field pair budget exhausted")
        try:
            fa, fb = index(a), index(b)
        except StopIteration:
            continue
        l = _lcm(a, b)
        p = _scaled(fa, 1, _sub_mono(l, a))
        for k, c in _scaled(fb, 1, _sub_mono(l, b)).items():
            s = p.get(k, 0) - c
            if mod:
                s %= mod
            if s:
                p[k] = s
            else:
                p.pop(k, None)
        if p:
            add(p)
    # minimal + reduced
    lms = [lm for lm, _ in basis]
    minimal = [(lm, g) for lm, g in basis
               if not any(o != lm and _divides(o, lm) for o in lms)]
    seen = set()
    uniq = []
    for lm, g in minimal:
        if lm not in seen:
            seen.add(lm)
            uniq.append((lm, g))
    out = []
    for i, (lm, g) in enumerate(uniq):
        tail = {k: a for k, a in g.items() if k != lm}
        others = uniq[:i] + uniq[i + 1:]
        red = _field_reduce(tail, others, order, mod) if tail else {}
        red[lm] = g[lm]
        out.append(red)
    return out


def staircase_dimension(leads: Sequence[tuple], nvars: int) -> int:
    """Largest set S of variables with no leading monomial supported inside S
    (Hilbert dimension of the quotient by the leading ideal)."""
    if any(not any(m) for m in leads):
        return -1  # unit ideal
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in leads]
    for k in range(nvars, -1, -1):
        for S in itertools.combinations(range(nvars), k):
            s = set(S)
            if not any(sup <= s for sup in supports):
                return k
    return 0


# ---------------------------------------------------------------------------
# ideals

@dataclass(frozen=True)
class Ideal:
    dim: int
    gens: tuple

    def __init__(self, gens: Sequence[LaurentPoly], dim: int | None = None):
        gens = tuple(gens)
        if not gens:
            if dim is None:
                raise ValueError("empty generator list needs an explicit dimension")
            gens = (LaurentPoly.zero(dim),)
        d = gens[0].dim if dim is None else dim
        if any(g.dim != d for g in gens):
            raise ValueError("generator dimensions disagree")
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "gens", gens)

    @property
    def nonzero_gens(self):
        return [g for g in self.gens if not g.is_zero()]

    def is_principal(self) -> bool:
        return len(self.nonzero_gens) <= 1

    def __str__(self):
        return "<" + ", ".join(str(g) for g in self.gens) + ">"


@dataclass(frozen=True)
class ModulePresentation:
    """M = R_d^r / (rows of the s x r relation matrix)."""

    dim: int
    r: int
    rows: tuple

    def __init__(self, rows: Sequence[Sequence[LaurentPoly]], dim: int | None = None):
        rows = tuple(tuple(r) for r in rows)
        if not rows:
            raise ValueError("presentation needs at least one row")
        r = len(rows[0])
        if r < 1 or any(len(x) != r for x in rows):
            raise ValueError("ragged presentation matrix")
        d = rows[0][0].dim if dim is None else dim
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "rows", rows)


@dataclass(frozen=True)
class NoetherianCertificate:
    verdict: str                 # noetherian | not-noetherian | undecided
    direction: Direction | None
    witness: LaurentPoly | None = None
    method: str = "groebner"
    detail: str = ""

    def __post_init__(self):
        if (self.verdict == "noetherian") != (self.witness is not None):
            raise ValueError("witness must be present exactly for noetherian verdicts")


def _laurent_to_shifted(f: LaurentPoly, signs=None, extra: int = 0) -> dict:
    """Flip by ``signs``, shift into the positive orthant, pad with ``extra``
    zero exponents for auxiliary variables."""
    if signs is not None:
        f = f.flip(signs)
    lo = f.min_exponents()
    pad = (0,) * extra
    return {tuple(a - b for a, b in zip(n, lo)) + pad: c for n, c in f.terms.items()}


def _poly_to_laurent(p: dict, d: int) -> LaurentPoly:
    return LaurentPoly(d, {m[:d]: c for m, c in p.items()})


def _saturation_gens(a: Ideal, signs=None) -> tuple[list[dict], int]:
    """Generators in Z[u_1..u_d, y] for the Laurent ideal (y last)."""
    d = a.dim
    gens = [_laurent_to_shifted(f, signs, 1) for f in a.nonzero_gens]
    gens.append({(1,) * (d + 1): 1, (0,) * (d + 1): -1})
    return gens, d + 1


# ---------------------------------------------------------------------------
# integer elimination, Krull dimension, Fitting ideals

def contains_integer(a: Ideal, budget: int = DEFAULT_PAIR_BUDGET) -> int | None:
    """Positive generator of the ideal's intersection with Z, or None."""
    if not a.nonzero_gens:
        return None
    gens, n = _saturation_gens(a)
    gb = strong_gb(gens, grevlex(n), n, budget)
    zero = (0,) * n
    for g in gb.basis:
        if len(g) == 1 and zero in g:
            return abs(g[zero])
    return None


def _prime_factors(m: int) -> list[int]:
    import sympy

    return sorted(sympy.factorint(m))


def field_dimension(a: Ideal, mod: int | None = None,
                    budget: int = DEFAULT_PAIR_BUDGET) -> int:
    """Krull dimension of k[u^{+-1}]/a for k = Q or GF(mod); -1 for the unit ideal."""
    gens, n = _saturation_gens(a)
    gb = field_gb(gens, grevlex(n), mod, budget)
    leads = [_lead(g, grevlex(n))[0] for g in gb]
    return staircase_dimension(leads, n)


def krull_dimension(a: Ideal, budget: int = DEFAULT_PAIR_BUDGET) -> int:
    if not a.nonzero_gens:
        return a.dim + 1
    m = contains_integer(a, budget)
    if m == 1:
        raise ValueError("unit ideal has no Krull dimension")
    if m:
        return max(field_dimension(a, p, budget) for p in _prime_factors(m))
    dq = field_dimension(a, None, budget)
    if dq < 0:
        raise ValueError("unit ideal has no Krull dimension")
    return dq + 1


def determinant(mat: Sequence[Sequence[LaurentPoly]]) -> LaurentPoly:
    n = len(mat)
    d = mat[0][0].dim
    if n == 1:
        return mat[0][0]
    total = LaurentPoly.zero(d)
    for j in range(n):
        if mat[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def fitting_ideal(m: ModulePresentation) -> tuple[Ideal, bool]:
    """Ideal of r x r minors; the flag is True when the ideal is zero."""
    minors = []
    for rows in itertools.combinations(m.rows, m.r):
        det = determinant([list(r) for r in rows])
        if not det.is_zero() and det not in minors:
            minors.append(det)
    if not minors:
        return Ideal([], dim=m.dim), True
    return Ideal(minors), False


# ---------------------------------------------------------------------------
# directional Noetherian test

def orthant_signs(v: Direction) -> tuple:
    return tuple(1 if x >= 0 else -1 for x in v.witness)


def directional_noetherian(a: Ideal, v, budget: int = DEFAULT_PAIR_BUDGET,
                           use_shortcut: bool = True) -> NoetherianCertificate:
    """Decide whether the quotient is Noetherian over the half-space ring of v,
    by looking for an H-monic element of the ideal."""
    v = as_direction(v)
    if v.witness is None:
        raise ValueError("directional_noetherian needs a rational direction")
    if v.dim != a.dim:
        raise ValueError("direction and ideal dimensions differ")
    gens = a.nonzero_gens
    if not gens:
        return NoetherianCertificate("not-noetherian", v, None, "groebner", "zero ideal")
    if use_shortcut:
        for f in gens:
            if is_h_monic(f, v):
                return NoetherianCertificate("noetherian", v, f, "principal-vertex")
        if len(gens) == 1:
            return NoetherianCertificate("not-noetherian", v, None, "principal-vertex")
    d = a.dim
    signs = orthant_signs(v)
    weights = tuple(abs(x) for x in v.witness)
    order = WeightTermOrder(signs, weights).term_order()
    n = d + 2
    polys = [_laurent_to_shifted(f, signs, 2) for f in gens]
    one = (0,) * n
    t = tuple([0] * d + [1, 0])
    polys.append({t: 1, tuple([1] * d + [0, 0]): -1})          # t - prod u'
    polys.append({tuple([0] * d + [1, 1]): 1, one: -1})         # y t - 1
    try:
        gb = strong_gb(polys, order, n, budget)
    except BudgetExceeded as exc:
        return NoetherianCertificate("undecided", v, None, "groebner", str(exc))
    best = None
    for g in gb.basis:
        lm, lc = _lead(g, order)
        if abs(lc) == 1 and not any(lm[:d]) and lm[d + 1] == 0:
            if best is None or lm[d] < _lead(best, order)[0][d]:
                best = g
    if best is None:
        return NoetherianCertificate("not-noetherian", v, None, "groebner",
                                     f"{len(gb.basis)} basis elements, none with lead +-t^M")
    w = _phi_back(best, d, signs)
    if not is_h_monic(w, v):
        raise AssertionError("internal: groebner witness is not H-monic")
    return NoetherianCertificate("noetherian", v, w, "groebner")


def _phi_back(g: dict, d: int, signs) -> LaurentPoly:
    out: dict = {}
    for m, c in g.items():
        n = tuple(m[j] + m[d] - m[d + 1] for j in range(d))
        out[n] = out.get(n, 0) + c
    f = LaurentPoly(d, out).flip(signs)
    return f.normalize_shift()


def laurent_member(a: Ideal, f: LaurentPoly, budget: int = DEFAULT_PAIR_BUDGET) -> bool:
    """Ideal membership in the Laurent ring via a strong basis of the saturation."""
    if f.is_zero():
        return True
    gens, n = _saturation_gens(a)
    gb = strong_gb(gens, grevlex(n), n, budget)
    return gb.contains(_laurent_to_shifted(f, None, 1))


def gb_phi_image_normals(a: Ideal, v: Direction, budget: int = DEFAULT_PAIR_BUDGET) -> list[tuple]:
    """Edge normals (original coordinates) of the exponent hulls of the
    phi-images of the top y-degree parts of the directional basis at v.
    These bound the region where the same basis stays valid."""
    from .geometry import convex_hull

    d = a.dim
    signs = orthant_signs(v)
    weights = tuple(abs(x) for x in v.witness)
    order = WeightTermOrder(signs, weights).term_order()
    n = d + 2
    polys = [_laurent_to_shifted(f, signs, 2) for f in a.nonzero_gens]
    polys.append({tuple([0] * d + [1, 0]): 1, tuple([1] * d + [0, 0]): -1})
    polys.append({tuple([0] * d + [1, 1]): 1, (0,) * n: -1})
    gb = strong_gb(polys, order, n, budget)
    normals = set()
    for g in gb.basis:
        top = max(m[d + 1] for m in g)
        pts = {tuple(signs[j] * (m[j] + m[d]) for j in range(d)) for m in g if m[d + 1] == top}
        if len(pts) < 2:
            continue
        hull = convex_hull(pts)
        for nv in hull.edge_normal_directions():
            normals.add(nv)
    return sorted(normals)


# ---------------------------------------------------------------------------
# elimination for k-plane tests

def unimodular_for_plane(basis: Sequence[Sequence[int]], d: int) -> list[list[int]]:
    """Unimodular A (rows) such that m = A n sends V cap Z^d onto Z^k x 0,
    where V is spanned by the integer ``basis``."""
    import sympy

    B = sympy.Matrix(basis)  # k x d
    k = B.rows
    if k == 0:
        return [[int(i == j) for j in range(d)] for i in range(d)]
    if B.rank() != k:
        raise ValueError("plane basis is not linearly independent")
    # integer basis of the orthogonal functionals: kernel of B over Z
    Q = _column_reduce(B.tolist(), d)
    C = [[Q[i][j] for i in range(d)] for j in range(k, d)]  # rows: kernel vectors
    if not C:
        return [[int(i == j) for j in range(d)] for i in range(d)]
    Q2 = _column_reduce(C, d)
    Ainv = sympy.Matrix(Q2).inv()
    rows = [list(map(int, Ainv.row(i))) for i in range(d)]
    nk = d - k
    A = rows[nk:] + rows[:nk]
    return A


def _column_reduce(M: list[list[int]], d: int) -> list[list[int]]:
    """Unimodular Q (d x d) with M Q lower-triangular-echelon [L | 0]."""
    M = [list(map(int, r)) for r in M]
    Q = [[int(i == j) for j in range(d)] for i in range(d)]

    def colop(i, j, s, t, u, w):
        # (col_i, col_j) <- (s col_i + t col_j, u col_i + w col_j)
        for mat in (M, Q):
            for r in mat:
                a, b = r[i], r[j]
                r[i], r[j] = s * a + t * b, u * a + w * b

    piv = 0
    for r in range(len(M)):
        if piv >= d:
            break
        for j in range(piv + 1, d):
            a, b = M[r][piv], M[r][j]
            if b == 0:
                continue
            g, s, t = _xgcd(a, b)
            colop(piv, j, s, t, -b // g, a // g)
        if M[r][piv] != 0:
            piv += 1
    return Q


def elimination_ideal(a: Ideal, keep: Sequence[int], budget: int = DEFAULT_PAIR_BUDGET) -> Ideal:
    """Generators of a cap Z[u_i^{+-1} : i in keep] (as an ideal in len(keep) variables)."""
    d = a.dim
    keep = list(keep)
    drop = [i for i in range(d) if i not in keep]
    perm = drop + keep
    gens = []
    for f in a.nonzero_gens:
        g = _laurent_to_shifted(f, None, 0)
        gens.append({tuple(m[i] for i in perm) + (0,): c for m, c in g.items()})
    n = d + 1
    # y first in the elimination block
    gens.append({(1,) * n: 1, (0,) * n: -1})
    gens = [{(m[-1],) + m[:-1]: c for m, c in g.items()} for g in gens]
    order = block_order(1 + len(drop))
    gb = strong_gb(gens, order, n, budget)
    out = []
    nel = 1 + len(drop)
    for g in gb.basis:
        if all(not any(m[:nel]) for m in g):
            out.append(LaurentPoly(len(keep), {m[nel:]: c for m, c in g.items()}))
    if not out:
        return Ideal([], dim=len(keep))
    return Ideal(out)


def noetherian_along_plane(a: Ideal, basis: Sequence[Sequence[int]],
                           budget: int = DEFAULT_PAIR_BUDGET) -> tuple[str, list]:
    """Is the quotient finitely generated over the monomials of the rational
    plane spanned by ``basis``?  Returns (verdict, per-variable certificates)."""
    d = a.dim
    k = len(basis)
    A = unimodular_for_plane(basis, d)
    moved = Ideal([f.substitute_monomial_map(A) for f in a.nonzero_gens] or
                  [LaurentPoly.zero(d)], dim=d)
    certs = []
    verdict = "noetherian"
    for j in range(k, d):
        try:
            J = elimination_ideal(moved, list(range(k)) + [j], budget)
        except BudgetExceeded as exc:
            certs.append((j, 0, NoetherianCertificate("undecided", None, None, "elimination", str(exc))))
            verdict = "undecided" if verdict == "noetherian" else verdict
            continue
        for s in (1, -1):
            e = [0] * (k + 1)
            e[k] = s
            cert = directional_noetherian(J, Direction.from_ints(e), budget)
            certs.append((j, s, cert))
            if cert.verdict == "not-noetherian":
                verdict = "not-noetherian"
            elif cert.verdict == "undecided" and verdict == "noetherian":
                verdict = "undecided"
    return verdict, certs


# ---------------------------------------------------------------------------
# the non-Noetherian set

def principal_nn_set(f: LaurentPoly):
    """Closed normal cones of all positive-dimensional faces of the Newton
    polytope, plus closed cones of vertices whose coefficient is not a unit."""
    from .geometry import SphericalSet, convex_hull

    d = f.dim
    if f.is_zero():
        return SphericalSet.full(d, "zero ideal")
    hull = convex_hull(f.terms)
    cells = [hull.normal_cone(face) for face in hull.faces()]
    cells += [hull.normal_cone([v]) for v in hull.vertices if abs(f.terms[v]) != 1]
    return SphericalSet(d, cells).simplified()


def _angle(w) -> float:
    return math.atan2(w[1], w[0]) % (2 * math.pi)


def _sweep_2d(a: Ideal, budget: int, certs: list):
    """Exact non-Noetherian set of a planar ideal by a critical-angle sweep."""
    from .geometry import Cell, SphericalSet, convex_hull

    cands = {(1, 0), (-1, 0), (0, 1), (0, -1)}
    for f in a.nonzero_gens:
        cands.update(convex_hull(f.terms).edge_normal_directions())
    probed: set = set()
    verdicts: dict = {}
    while True:
        order = sorted(cands, key=_angle)
        mids = []
        for i, c in enumerate(order):
            nxt = order[(i + 1) % len(order)]
            mids.append((c, nxt, primitive_sum(c, nxt)))
        new = set()
        for c, nxt, m in mids:
            if m in probed:
                continue
            probed.add(m)
            cert = directional_noetherian(a, Direction.from_ints(m), budget)
            verdicts[m] = cert
            if cert.method == "principal-vertex" and cert.verdict == "noetherian":
                continue
            if cert.verdict == "undecided":
                continue
            for nv in gb_phi_image_normals(a, Direction.from_ints(m), budget):
                if nv not in cands:
                    new.add(nv)
        if not new:
            break
        cands |= new
    order = sorted(cands, key=_angle)
    for c in order:
        verdicts[c] = directional_noetherian(a, Direction.from_ints(c), budget)
    cells = []
    undecided = []
    in_arc = set()
    for i, c in enumerate(order):
        nxt = order[(i + 1) % len(order)]
        m = primitive_sum(c, nxt)
        cert = verdicts[m]
        certs.append(cert)
        if cert.verdict == "not-noetherian":
            cells.append(SphericalSet.closed_arc(c, nxt, f"sector {c}->{nxt}").cells[0])
            in_arc.update([c, nxt])
        elif cert.verdict == "undecided":
            undecided.append(m)
    for c in order:
        cert = verdicts[c]
        certs.append(cert)
        if cert.verdict == "not-noetherian" and c not in in_arc:
            cells.append(Cell.point(c, f"critical {c}"))
        elif cert.verdict == "undecided":
            undecided.append(c)
        elif cert.verdict == "noetherian" and c in in_arc:
            raise AssertionError(f"closedness violated at critical direction {c}")
    cells = _merge_arcs(cells)
    notes = [f"undecided at {u}" for u in undecided]
    return SphericalSet(2, cells, notes=notes)


def primitive_sum(a, b):
    from .laurent import primitive

    return primitive(tuple(x + y for x, y in zip(a, b)))


def _merge_arcs(cells):
    from .geometry import SphericalSet

    arcs = []
    others = []
    for c in cells:
        if c.kind == "arc":
            r = sorted(c.extreme_rays(), key=_angle)
            a, b = r
            if (_angle(b) - _angle(a)) % (2 * math.pi) > math.pi:
                a, b = b, a
            arcs.append([a, b])
        else:
            others.append(c)
    arcs.sort(key=lambda ab: _angle(ab[0]))
    merged = True
    while merged and len(arcs) > 1:
        merged = False
        for i in range(len(arcs)):
            for j in range(len(arcs)):
                if i != j and arcs[i][1] == arcs[j][0]:
                    a, b = arcs[i][0], arcs[j][1]
                    span = (_angle(b) - _angle(a)) % (2 * math.pi)
                    if 0 < span < math.pi - 1e-12:
                        arcs[i] = [a, b]
                        del arcs[j]
                        merged = True
                        break
            if merged:
                break
    out = [SphericalSet.closed_arc(a, b, f"arc {a}->{b}").cells[0] for a, b in arcs]
    return out + others


def _sampled_nn(a: Ideal, res_deg: float, budget: int, seed_res_deg: float, scale: int,
                certs: list):
    from .geometry import (SampledMask, SphericalSet, adaptive_refine, convex_hull,
                           fibonacci_sphere, great_circle_points, rational_approx)

    d = a.dim

    def test(v):
        c = directional_noetherian(a, v, budget)
        certs.append(c)
        return None if c.verdict == "undecided" else c.verdict == "not-noetherian"

    if d != 3:
        s, exhausted = adaptive_refine(test, d, seed_res_deg=seed_res_deg,
                                       target_res_deg=res_deg, scale=scale)
        if exhausted:
            s.notes.append("refinement budget exhausted")
        return s
    # seed grid plus exact points on the great circles where the verdict can change
    planes = {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    for f in a.nonzero_gens:
        if len(f.terms) > 1:
            planes.update(convex_hull(f.terms).edge_planes())
    n0 = max(100, int(4 * math.pi / math.radians(seed_res_deg) ** 2))
    pts = {rational_approx(u, scale) for u in fibonacci_sphere(n0)}
    flags = {}
    for w in sorted(pts):
        flags[w] = test(Direction.from_ints(w))
    done_planes = set()
    while True:
        todo = sorted(planes - done_planes)
        if not todo:
            break
        for pl in todo:
            done_planes.add(pl)
            for w in great_circle_points(pl, res_deg, scale):
                if w not in flags:
                    flags[w] = test(Direction.from_ints(w))
        # circles bounding the cells of witnesses found so far
        for c in list(certs):
            if c.witness is not None and c.method == "groebner" and len(planes) < 64:
                hull = convex_hull(c.witness.terms)
                if hull.affine_dim >= 1:
                    planes.update(hull.edge_planes())
    dirs = list(flags)
    fl = [1 if flags[w] is True else (0 if flags[w] is False else -1) for w in dirs]
    mask = SampledMask(3, dirs, fl, None, math.radians(res_deg))
    return SphericalSet(3, mask=mask)


def nn_set(a: Ideal, mode: str = "exact", angular_res_deg: float = 0.5,
           budget: int = DEFAULT_PAIR_BUDGET, seed_res_deg: float = 5.0,
           scale: int = 1000, certs: list | None = None):
    """The set of directions v for which the quotient is not Noetherian over
    the half-space ring of v."""
    from .geometry import SphericalSet

    certs = [] if certs is None else certs
    d = a.dim
    gens = a.nonzero_gens
    if not gens:
        return SphericalSet.full(d, "zero ideal")
    if mode == "exact":
        if len(gens) == 1 and d <= 3:
            return principal_nn_set(gens[0])
        if contains_integer(a, budget) == 1:
            return SphericalSet.empty(d)
        if d == 1:
            cells = []
            from .geometry import Cell
            for s in (1, -1):
                c = directional_noetherian(a, Direction.from_ints((s,)), budget)
                certs.append(c)
                if c.verdict == "not-noetherian":
                    cells.append(Cell.point((s,), "sign"))
                elif c.verdict == "undecided":
                    raise BudgetExceeded(f"undecided at direction {s}")
            return SphericalSet(1, cells)
        if d == 2:
            return _sweep_2d(a, budget, certs)
        mode = "sampled"
    s = _sampled_nn(a, angular_res_deg, budget, seed_res_deg, scale, certs)
    if d == 3 and len(gens) >= 1:
        s.notes.append("exact mode is limited to principal ideals or d <= 2 in three dimensions; sampled")
    return s
