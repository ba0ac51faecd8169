"""Brute-force coding oracle over GF(p).

Configurations on a finite window that satisfy every fully contained
translate of the relations form a GF(p) vector space.  E codes F when every
such configuration vanishing on E also vanishes on F.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .laurent import Direction, LaurentPoly, as_direction

log = logging.getLogger(__name__)

MAX_PRIME = 251
MAX_CELLS = 10_000


@dataclass
class FpSystem:
    p: int
    dim: int
    relations: list

    def __post_init__(self):
        import sympy

        if not sympy.isprime(self.p) or self.p > MAX_PRIME:
            raise ValueError(f"modulus must be a prime <= {MAX_PRIME}")
        rels = []
        for f in self.relations:
            if f.dim != self.dim:
                raise ValueError("relation dimension mismatch")
            g = LaurentPoly(self.dim, {n: c % self.p for n, c in f.terms.items() if c % self.p})
            if not g.is_zero():
                rels.append(g.normalize_shift())
        if not rels:
            raise ValueError("every relation vanishes mod p")
        self.relations = rels

    @classmethod
    def from_ideal(cls, ideal, p: int | None = None) -> "FpSystem":
        """Integer generators are absorbed into the modulus."""
        gens = list(ideal.nonzero_gens)
        consts = [g for g in gens if set(g.terms) == {(0,) * ideal.dim}]
        if p is None:
            if not consts:
                raise ValueError("no modulus given and no integer generator")
            p = abs(int(consts[0].terms[(0,) * ideal.dim]))
        return cls(p, ideal.dim, [g for g in gens if g not in consts])

    def diameter(self) -> int:
        return max(max(max(n[i] for n in f.terms) - min(n[i] for n in f.terms)
                       for i in range(self.dim)) for f in self.relations)


@dataclass
class WindowProblem:
    window: list                   # lattice sites
    known: set                     # E
    target: set                    # F

    def __post_init__(self):
        w = set(map(tuple, self.window))
        self.window = sorted(w)
        self.known = set(map(tuple, self.known))
        self.target = set(map(tuple, self.target))
        if not self.known <= w or not self.target <= w:
            raise ValueError("E and F must lie in the window")


def box(lo: Sequence[int], hi: Sequence[int]) -> list:
    return list(itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]))


def constraint_matrix(sys: FpSystem, window: Iterable) -> tuple[np.ndarray, list]:
    sites = sorted(set(map(tuple, window)))
    if len(sites) > MAX_CELLS:
        raise ValueError(f"window exceeds {MAX_CELLS} cells")
    index = {s: i for i, s in enumerate(sites)}
    rows = []
    for f in sys.relations:
        supp = list(f.terms)
        anchor = supp[0]
        for s in sites:
            m = tuple(s[i] - anchor[i] for i in range(sys.dim))
            cols = [index.get(tuple(m[i] + n[i] for i in range(sys.dim))) for n in supp]
            if None in cols:
                continue
            row = np.zeros(len(sites), dtype=np.int64)
            for c, n in zip(cols, supp):
                row[c] = (row[c] + f.terms[n]) % sys.p
            rows.append(row)
    A = np.array(rows, dtype=np.int64).reshape(len(rows), len(sites))
    return A, sites


def rref_mod(A: np.ndarray, p: int) -> tuple[np.ndarray, list]:
    """Reduced row echelon form over GF(p); returns (R, pivot columns)."""
    R = A.copy() % p
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if not len(nz):
            continue
        k = r + nz[0]
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = (R[r] * pow(int(R[r, c]), -1, p)) % p
        col = R[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if len(hit):
            R[hit] = (R[hit] - np.outer(col[hit], R[r])) % p
        pivots.append(c)
        r += 1
    return R[:r], pivots


def kernel_basis(sys: FpSystem, window) -> tuple[np.ndarray, list]:
    """Basis (rows) of the solution space on the window, and the site order."""
    A, sites = constraint_matrix(sys, window)
    n = len(sites)
    if A.shape[0] == 0:
        log.warning("no relation translate fits in the window; solution space is free")
        return np.eye(n, dtype=np.int64), sites
    R, piv = rref_mod(A, sys.p)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for r, pc in enumerate(piv):
            basis[i, pc] = (-R[r, fc]) % sys.p
    return basis, sites


def _coded_targets(sys: FpSystem, window, known, targets) -> dict:
    """For each target site: is it determined by the values on ``known``?"""
    A, sites = constraint_matrix(sys, window)
    index = {s: i for i, s in enumerate(sites)}
    unknown = [i for i, s in enumerate(sites) if s not in known]
    out = {}
    if A.shape[0] == 0:
        return {t: t in known for t in targets}
    sub = A[:, unknown]
    pos = {c: j for j, c in enumerate(unknown)}
    R, piv = rref_mod(sub, sys.p)
    piv_row = {c: r for r, c in enumerate(piv)}
    for t in targets:
        if t in known:
            out[t] = True
            continue
        j = pos[index[t]]
        # e_j lies in the row space iff its pivot row is exactly e_j
        r = piv_row.get(j)
        out[t] = r is not None and int(np.count_nonzero(R[r])) == 1
    return out


def codes(sys: FpSystem, prob: WindowProblem) -> bool:
    res = _coded_targets(sys, prob.window, prob.known, prob.target)
    return all(res.values())


@dataclass
class EmpiricalVerdict:
    expansive: bool
    conclusive: bool
    coded: int
    targets: int
    window_cells: int
    note: str = ""


def slab_window(dim: int, v: Sequence[float], R: float, back: float, front: float = 1.0) -> list:
    """Lattice sites with -back <= n.v <= front and distance at most R from the
    line (or plane) spanned by v."""
    v = np.asarray(v, float)
    v = v / np.linalg.norm(v)
    r = int(math.ceil(R + back + front)) + 1
    pts = np.array(list(itertools.product(range(-r, r + 1), repeat=dim)))
    depth = pts @ v
    perp = np.linalg.norm(pts - np.outer(depth, v), axis=1)
    keep = (depth >= -back - 1e-12) & (depth <= front + 1e-12) & (perp <= R + 1e-12)
    return [tuple(int(x) for x in p) for p in pts[keep]]


def direction_expansive_empirical(sys: FpSystem, v, R: float | None = None,
                                  thickness: float | None = None,
                                  target_frac: float = 0.25) -> EmpiricalVerdict:
    """One-step advance test: does the part of a long slab behind the boundary
    {n.v = 0} code every site of depth in (0, 1] near the middle?

    The slab is long in the boundary directions (half-width R) and thin across
    them, since recovering a site next to a nearly nonexpansive boundary needs
    a long chain of relations running along it.  A positive answer is sound for
    the infinite half-space; a negative one only means not coded at this R.
    """
    v = as_direction(v)
    d = sys.dim
    diam = sys.diameter()
    if R is None:
        R = 96.0 if d <= 2 else 6.0
    if thickness is None:
        thickness = float(max(2, diam + 1))
    u = np.array(v.unit)
    sites = slab_window(d, u, R, thickness)
    if len(sites) > MAX_CELLS:
        raise ValueError("window too large for the oracle")
    depth = {s: float(np.dot(s, u)) for s in sites}
    known = {s for s in sites if depth[s] <= 1e-12}
    targets = [s for s in sites if depth[s] > 1e-12 and
               np.linalg.norm(np.array(s) - depth[s] * u) <= target_frac * R + 1e-12]
    conclusive = R >= 3 * diam
    res = _coded_targets(sys, sites, known, targets)
    n_coded = sum(res.values())
    return EmpiricalVerdict(n_coded == len(targets), conclusive, n_coded, len(targets), len(sites),
                            "" if conclusive else "radius below three relation diameters")


def classify_directions(sys: FpSystem, dirs, **kw) -> list[bool]:
    return [direction_expansive_empirical(sys, Direction.from_vector(tuple(u)), **kw).expansive
            for u in np.asarray(dirs, float)]
