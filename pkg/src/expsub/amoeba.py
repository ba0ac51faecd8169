"""Numeric amoebas: sampling log|V|, lopsidedness, radial projections and
expansiveness checks on the unit torus.

Membership in an amoeba is only ever witnessed numerically (a point z with a
small relative residual); non-membership can be certified by a dominant
monomial.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .laurent import LaurentPoly, ParseError, _Parser, evaluate_many

DEFAULT_RESIDUAL_TOL = 1e-9


# ---------------------------------------------------------------------------
# data

@dataclass(frozen=True)
class AmoebaPoint:
    x: tuple
    witness: tuple
    residual: float


@dataclass(frozen=True)
class AmoebaGrid:
    """Sampling grid.  Log-radii run over [-radius, radius] with sinh spacing,
    so they are dense near 0; angles are uniform (a multiple of 3 keeps the
    cube roots of unity on the grid)."""

    radius: float = 100.0
    n_radius: int = 401
    n_angle: int = 96
    n_random: int = 20000
    stretch: float = 4.0
    seed: int = 0

    def log_radii(self) -> np.ndarray:
        s = np.linspace(-1.0, 1.0, self.n_radius)
        return self.radius * np.sinh(self.stretch * s) / math.sinh(self.stretch)

    def angles(self) -> np.ndarray:
        return 2 * math.pi * np.arange(self.n_angle) / self.n_angle


class AmoebaCloud:
    """Sampled points of log|V| with complex witnesses."""

    def __init__(self, dim: int, X, Z, residual, description: str = "",
                 meta: dict | None = None, tol: float = DEFAULT_RESIDUAL_TOL):
        self.dim = dim
        self.X = np.asarray(X, float).reshape(-1, dim)
        self.Z = np.asarray(Z, complex).reshape(-1, dim)
        self.residual = np.asarray(residual, float).reshape(-1)
        self.description = description
        self.meta = dict(meta or {})
        self.tol = tol

    def __len__(self):
        return len(self.X)

    @property
    def points(self) -> list[AmoebaPoint]:
        return [AmoebaPoint(tuple(x), tuple(z), float(r))
                for x, z, r in zip(self.X, self.Z, self.residual)]

    def subset(self, idx) -> "AmoebaCloud":
        return AmoebaCloud(self.dim, self.X[idx], self.Z[idx], self.residual[idx],
                           self.description, self.meta, self.tol)

    def merged(self, other: "AmoebaCloud") -> "AmoebaCloud":
        meta = dict(self.meta)
        meta.setdefault("parts", []).append(other.description)
        return AmoebaCloud(self.dim, np.vstack([self.X, other.X]), np.vstack([self.Z, other.Z]),
                           np.concatenate([self.residual, other.residual]),
                           self.description, meta, max(self.tol, other.tol))

    def to_text(self) -> str:
        lines = [f"# {self.description}", "# x_1..x_d | Re z_1 Im z_1 .. | residual"]
        for x, z, r in zip(self.X, self.Z, self.residual):
            zs = " ".join(f"{c.real:.17g} {c.imag:.17g}" for c in z)
            lines.append(" ".join(f"{v:.17g}" for v in x) + " | " + zs + f" | {r:.3e}")
        return "\n".join(lines) + "\n"

    @classmethod
    def empty(cls, dim, description="empty variety", certified=False):
        return cls(dim, np.zeros((0, dim)), np.zeros((0, dim)), [], description,
                   {"empty_certified": certified})


# ---------------------------------------------------------------------------
# lopsidedness

def lopsided_nonmembership(f: LaurentPoly, x: Sequence[float]) -> tuple | None:
    """Exponent n whose term dominates the sum of all others at log-radius x."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    x = np.asarray(x, float)
    logs = []
    for n, c in f.terms.items():
        logs.append((math.log(abs(c)) + float(np.dot(n, x)), n))
    logs.sort(reverse=True)
    top, n = logs[0]
    rest = sum(math.exp(l - top) for l, _ in logs[1:])
    return n if rest < 1.0 else None


def lopsided_gap(f: LaurentPoly, x) -> float:
    """Dominant term minus the others, scaled by the dominant term (<= 0 if not lopsided)."""
    logs = sorted((math.log(abs(c)) + float(np.dot(n, x)) for n, c in f.terms.items()), reverse=True)
    return 1.0 - sum(math.exp(l - logs[0]) for l in logs[1:])


def relative_residual(gens: Sequence[LaurentPoly], Z) -> np.ndarray:
    """max_f |f(z)| / sum_n |c_n z^n| over the generators, row by row."""
    Z = np.asarray(Z, complex)
    out = np.zeros(Z.shape[:-1])
    absZ = np.abs(Z)
    with np.errstate(over="ignore", invalid="ignore"):
        for f in gens:
            val = np.abs(evaluate_many(f, Z))
            scale = np.zeros_like(val)
            for n, c in f.terms.items():
                term = np.full(val.shape, float(abs(c)))
                for j, e in enumerate(n):
                    if e:
                        term = term * absZ[..., j] ** e
                scale = scale + term
            out = np.maximum(out, val / np.where(scale > 0, scale, 1.0))
    return out


# ---------------------------------------------------------------------------
# univariate root finding in batches

def _batched_roots(C: np.ndarray, top_mag: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Roots of rows of C (coefficient of z^k in column k).  Returns (roots,
    row index) for the rows whose leading coefficient does not vanish;
    ``top_mag`` is the size of the terms summed into the leading coefficient,
    so cancellation down to rounding noise counts as vanishing."""
    N, m = C.shape
    deg = m - 1
    if top_mag is None:
        top_mag = np.abs(C[:, -1])
    ok = (np.abs(C[:, -1]) > 1e-12 * top_mag) & (top_mag > 0)
    idx = np.nonzero(ok)[0]
    C = C[ok]
    if deg == 0 or not len(C):
        return np.zeros(0, complex), np.zeros(0, int)
    if deg == 1:
        return -C[:, 0] / C[:, 1], idx
    if deg == 2:
        a, b, c = C[:, 2], C[:, 1], C[:, 0]
        disc = np.sqrt(b * b - 4 * a * c + 0j)
        # choose the sign that avoids cancellation
        sgn = np.where((np.conj(b) * disc).real >= 0, 1.0, -1.0)
        q = -0.5 * (b + sgn * disc)
        with np.errstate(divide="ignore", invalid="ignore"):
            r1 = q / a
            r2 = np.where(q != 0, c / q, 0)
        return np.concatenate([r1, r2]), np.concatenate([idx, idx])
    comp = np.zeros((len(C), deg, deg), complex)
    comp[:, 0, :] = -C[:, -2::-1] / C[:, -1:]
    comp[:, np.arange(1, deg), np.arange(deg - 1)] = 1
    ev = np.linalg.eigvals(comp)
    return ev.reshape(-1), np.repeat(idx, deg)


def _newton_polish(f: LaurentPoly, Z: np.ndarray, j: int, steps: int = 2) -> np.ndarray:
    """A couple of Newton steps in variable j to clean eigenvalue roots."""
    df = LaurentPoly(f.dim, {tuple(e if i != j else e - 1 for i, e in enumerate(n)): c * n[j]
                             for n, c in f.terms.items() if n[j]})
    for _ in range(steps):
        fv = evaluate_many(f, Z)
        dv = evaluate_many(df, Z) if not df.is_zero() else np.zeros(len(Z))
        good = np.abs(dv) > 1e-300
        with np.errstate(invalid="ignore", over="ignore"):
            step = np.where(good, fv / np.where(good, dv, 1), 0)
        newz = Z[:, j] - step
        keep = np.abs(step) < 0.1 * np.abs(Z[:, j])
        Z[:, j] = np.where(keep, newz, Z[:, j])
    return Z


def _solve_in(f: LaurentPoly, Z: np.ndarray, j: int):
    """Solve f = 0 for z_j given the other coordinates of each row of Z.
    Returns the expanded array of rows (one per root)."""
    exps = sorted({n[j] for n in f.terms})
    lo, hi = exps[0], exps[-1]
    N = len(Z)
    C = np.zeros((N, hi - lo + 1), complex)
    top = np.zeros(N)
    for n, c in f.terms.items():
        term = np.full(N, complex(c))
        for i, e in enumerate(n):
            if i != j and e:
                term = term * Z[:, i] ** e
        C[:, n[j] - lo] += term
        if n[j] == hi:
            top += np.abs(term)
    roots, rows = _batched_roots(C, top)
    out = Z[rows].copy()
    out[:, j] = roots
    good = np.isfinite(roots) & (np.abs(roots) > 1e-300)
    return out[good]


def _triangular_plan(gens: Sequence[LaurentPoly], free: Sequence[int]):
    """Order in which generators solve the non-free variables one at a time,
    or None when that is impossible."""
    d = gens[0].dim
    left = list(range(len(gens)))
    plan = []
    solved = set(free)
    while len(solved) < d:
        for gi in left:
            f = gens[gi]
            inv = [i for i in range(d) if i not in solved and f.involves(i)]
            if len(inv) == 1:
                plan.append((gi, inv[0]))
                solved.add(inv[0])
                left.remove(gi)
                break
        else:
            return None
    return plan, left


def _free_values(grid: AmoebaGrid, k: int, rng) -> np.ndarray:
    if k == 0:
        return np.zeros((1, 0), complex)
    rho, th = grid.log_radii(), grid.angles()
    if k == 1:
        R, T = np.meshgrid(rho, th, indexing="ij")
        return np.exp(R + 1j * T).reshape(-1, 1)
    # several free variables: a coarse product grid plus random draws
    n1 = max(5, int(round(grid.n_random ** (1.0 / (2 * k)))))
    r1 = grid.radius * np.sinh(grid.stretch * np.linspace(-1, 1, n1)) / math.sinh(grid.stretch)
    t1 = 2 * math.pi * np.arange(n1) / n1
    prod = np.array([[np.exp(r + 1j * t) for r, t in zip(rs, ts)]
                     for rs in itertools.product(r1, repeat=k)
                     for ts in itertools.product(t1, repeat=k)])
    s = rng.uniform(-1, 1, size=(grid.n_random, k))
    r = grid.radius * np.sinh(grid.stretch * s) / math.sinh(grid.stretch)
    t = rng.uniform(0, 2 * math.pi, size=(grid.n_random, k))
    return np.vstack([prod, np.exp(r + 1j * t)])


def system_sample(gens: Sequence[LaurentPoly], grid: AmoebaGrid | None = None,
                  tol: float = DEFAULT_RESIDUAL_TOL, description: str = "") -> AmoebaCloud:
    """Sample the amoeba of the variety cut out by ``gens``.

    Every admissible choice of free variables is used: free variables run over
    the grid and the rest are solved one generator at a time.  Generators not
    used for solving act as residual filters.
    """
    grid = grid or AmoebaGrid()
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ValueError("zero ideal: the variety is the whole torus")
    d = gens[0].dim
    rng = np.random.default_rng(grid.seed)
    pieces = []
    used_sets = []
    for k in range(max(0, d - len(gens)), d):
        for free in itertools.combinations(range(d), k):
            res = _triangular_plan(gens, free)
            if res is None:
                continue
            plan, _ = res
            used_sets.append(free)
            Fv = _free_values(grid, k, rng)
            Z = np.ones((len(Fv), d), complex)
            for col, i in enumerate(free):
                Z[:, i] = Fv[:, col]
            for gi, j in plan:
                Z = _solve_in(gens[gi], Z, j)
                Z = _newton_polish(gens[gi], Z, j)
                if not len(Z):
                    break
            if len(Z):
                pieces.append(Z)
        if used_sets:
            break
    if not pieces:
        return AmoebaCloud(d, np.zeros((0, d)), np.zeros((0, d)), [], description,
                           {"free_sets": used_sets})
    Z = np.vstack(pieces)
    with np.errstate(divide="ignore"):
        X = np.log(np.abs(Z))
    ok = np.isfinite(X).all(axis=1)
    Z, X = Z[ok], X[ok]
    r = relative_residual(gens, Z)
    keep = r < tol
    meta = {"free_sets": [list(s) for s in used_sets], "grid": grid.__dict__,
            "rejected_by_residual": int((~keep).sum())}
    return AmoebaCloud(d, X[keep], Z[keep], r[keep], description or "system", meta, tol)


def hypersurface_sample(f: LaurentPoly, grid: AmoebaGrid | None = None,
                        tol: float = DEFAULT_RESIDUAL_TOL) -> AmoebaCloud:
    if not any(f.involves(i) for i in range(f.dim)):
        raise ValueError("polynomial is a monomial: its variety is empty")
    return system_sample([f], grid, tol, description=f"hypersurface {f}")


# ---------------------------------------------------------------------------
# parameterized varieties

class RatFn:
    """Rational function num/den in one variable, both LaurentPolys in dim 1."""

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None):
        self.num = num
        self.den = den if den is not None else LaurentPoly.const(1, 1)
        if self.den.is_zero():
            raise ZeroDivisionError("denominator is zero")

    @staticmethod
    def _c(o):
        if isinstance(o, RatFn):
            return o
        if isinstance(o, int):
            return RatFn(LaurentPoly.const(1, o))
        return NotImplemented

    def __add__(self, o):
        o = self._c(o)
        return RatFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFn(-self.num, self.den)

    def __sub__(self, o):
        return self + (-self._c(o))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = self._c(o)
        return RatFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._c(o)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero")
        return RatFn(self.num * o.den, self.den * o.num)

    def __pow__(self, k):
        if k >= 0:
            return RatFn(self.num ** k, self.den ** k)
        return RatFn(self.den ** (-k), self.num ** (-k))

    def __call__(self, z):
        z = np.asarray(z, complex)
        return evaluate_many(self.num, z[..., None]) / evaluate_many(self.den, z[..., None])

    def special_values(self) -> list[complex]:
        """Nonzero zeros of numerator and denominator."""
        out = []
        for p in (self.num, self.den):
            q = p.normalize_shift()
            deg = max(n[0] for n in q.terms)
            if deg == 0:
                continue
            coeffs = [q.coeff((k,)) for k in range(deg, -1, -1)]
            out.extend(r for r in np.roots(coeffs) if abs(r) > 1e-12)
        return out

    def __str__(self):
        if self.den == LaurentPoly.const(1, 1):
            return self.num.to_str(("z",))
        return f"({self.num.to_str(('z',))})/({self.den.to_str(('z',))})"


def parse_param_map(text: str | Sequence[str]) -> list[RatFn]:
    parts = [p.strip() for p in text.split(",")] if isinstance(text, str) else list(text)
    out = []
    for p in parts:
        def atom_var(name, pos):
            if name != "z":
                raise ParseError(f"parameter maps use the variable z, not {name!r}", pos)
            return RatFn(LaurentPoly.var(1, 0))

        try:
            out.append(_Parser(p, atom_var, lambda n: RatFn(LaurentPoly.const(1, n)),
                               allow_div=True).parse())
        except ZeroDivisionError as exc:
            raise ParseError(str(exc), 0) from None
    return out


def parameterized_sample(comps: Sequence[RatFn], grid: AmoebaGrid | None = None,
                         gens: Sequence[LaurentPoly] | None = None,
                         tol: float = DEFAULT_RESIDUAL_TOL) -> AmoebaCloud:
    """Log-image of z -> (comps(z)) over a log-polar grid of z, densified near
    the zeros and poles of the components (where the tendrils are)."""
    grid = grid or AmoebaGrid()
    d = len(comps)
    rho, th = grid.log_radii(), grid.angles()
    R, T = np.meshgrid(rho, th, indexing="ij")
    zs = [np.exp(R + 1j * T).reshape(-1)]
    special = []
    for c in comps:
        special.extend(c.special_values())
    for s in special:
        r = rho[rho < math.log(abs(s)) - 0.7]
        RR, TT = np.meshgrid(r, th, indexing="ij")
        zs.append(s + np.exp(RR + 1j * TT).reshape(-1))
    z = np.concatenate(zs)
    with np.errstate(all="ignore"):
        Z = np.stack([c(z) for c in comps], axis=1)
        X = np.log(np.abs(Z))
    ok = np.isfinite(X).all(axis=1) & (np.abs(z) > 0)
    Z, X = Z[ok], X[ok]
    if gens:
        r = relative_residual(gens, Z)
        keep = r < tol
        Z, X, r = Z[keep], X[keep], r[keep]
    else:
        r = np.zeros(len(X))
    desc = "param (" + ", ".join(str(c) for c in comps) + ")"
    return AmoebaCloud(d, X, Z, r, desc, {"special_values": [complex(s) for s in special]}, tol)


# ---------------------------------------------------------------------------
# radial projection

def nv_set(cloud: AmoebaCloud, resolution_deg: float = 0.5, origin_tol: float = 1e-6):
    from .geometry import SampledMask, SphericalSet

    d = cloud.dim
    if not len(cloud):
        s = SphericalSet.empty(d)
        if not cloud.meta.get("empty_certified"):
            s = SphericalSet(d, mask=SampledMask(d, np.zeros((0, d)), [], None,
                                                 math.radians(resolution_deg), in_only=True))
            s.notes.append("no amoeba points found at sampling resolution")
        return s
    nrm = np.linalg.norm(cloud.X, axis=1)
    if (nrm <= origin_tol).any():
        s = SphericalSet.full(d, "amoeba meets the origin")
        s.notes.append("origin lies on the amoeba: every ray meets it")
        return s
    U = cloud.X / nrm[:, None]
    # thin out duplicates for a compact mask
    key = np.round(U / (math.radians(resolution_deg) / 4)).astype(np.int64)
    _, first = np.unique(key, axis=0, return_index=True)
    U = U[np.sort(first)]
    mask = SampledMask(d, U, np.ones(len(U)), None, math.radians(resolution_deg), in_only=True)
    return SphericalSet(d, mask=mask)


def asymptotic_directions(cloud: AmoebaCloud, frac: float = 0.5,
                          cluster_deg: float = 10.0) -> list[np.ndarray]:
    """Directions of escape to infinity: cluster the projections of the
    points near the edge of the sampled box (sup norm at least ``frac`` of the
    largest) and return the cluster centres."""
    if not len(cloud):
        return []
    sup = np.abs(cloud.X).max(axis=1)
    big = sup >= frac * sup.max()
    nrm = np.linalg.norm(cloud.X[big], axis=1)
    U = cloud.X[big] / nrm[:, None]
    order = np.argsort(-nrm)
    U = U[order]
    cos_thr = math.cos(math.radians(cluster_deg))
    centres: list = []
    members: list = []
    for u in U:
        for i, c in enumerate(centres):
            if float(u @ c) > cos_thr:
                members[i].append(u)
                break
        else:
            centres.append(u)
            members.append([u])
    out = []
    for m in members:
        v = np.mean(m, axis=0)
        out.append(v / np.linalg.norm(v))
    return out


# ---------------------------------------------------------------------------
# torus tests and ray hits

def _lipschitz(f: LaurentPoly) -> float:
    return float(sum(abs(c) * sum(abs(e) for e in n) for n, c in f.terms.items()))


@dataclass
class TorusBound:
    certified: bool
    boxes_left: int
    min_value: float
    depth: int
    best_points: np.ndarray


def torus_branch_and_bound(gens: Sequence[LaurentPoly], max_boxes: int = 400000,
                           max_depth: int = 30, init: int = 16) -> TorusBound:
    """Certify that the generators have no common zero on the unit torus.

    A box of half-width h around angle vector c is cleared when some f has
    |f(e^{ic})| > L_f h with L_f = sum |c_n| |n|_1, a Lipschitz bound in the
    sup norm on angles.
    """
    gens = [g for g in gens if not g.is_zero()]
    d = gens[0].dim
    Ls = [_lipschitz(f) for f in gens]
    slack = [1e-12 * sum(abs(c) for c in f.terms.values()) for f in gens]
    h = math.pi / init
    axes = [-math.pi + h + 2 * h * np.arange(init)] * d
    C = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    best = np.inf
    depth = 0
    offsets = np.array(list(itertools.product((-0.5, 0.5), repeat=d)))
    while True:
        Z = np.exp(1j * C)
        alive = np.ones(len(C), bool)
        worst = np.zeros(len(C))
        for f, L, s in zip(gens, Ls, slack):
            v = np.abs(evaluate_many(f, Z))
            alive &= ~(v > L * h + s)
            worst = np.maximum(worst, v)
        best = min(best, float(worst.min()))
        C = C[alive]
        wl = worst[alive]
        if not len(C):
            return TorusBound(True, 0, best, depth, np.zeros((0, d)))
        if depth >= max_depth or len(C) * len(offsets) > max_boxes:
            pick = C[np.argsort(wl)[:32]]
            return TorusBound(False, len(C), best, depth, pick)
        h /= 2
        depth += 1
        C = (C[:, None, :] + 2 * h * offsets[None, :, :]).reshape(-1, d)


def torus_minimize(gens: Sequence[LaurentPoly], starts: np.ndarray, tol: float = DEFAULT_RESIDUAL_TOL):
    """Local least-squares search for a common zero on the torus.
    Returns (best residual, witness z)."""
    from scipy.optimize import least_squares

    def res(th):
        z = np.exp(1j * th)[None, :]
        out = []
        for f in gens:
            s = sum(abs(c) for c in f.terms.values())
            v = evaluate_many(f, z)[0] / s
            out += [v.real, v.imag]
        return np.array(out)

    best = (np.inf, None)
    for th0 in starts:
        sol = least_squares(res, th0, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200)
        z = np.exp(1j * sol.x)
        r = float(relative_residual(gens, z[None, :])[0])
        if r < best[0]:
            best = (r, z)
        if r < tol:
            break
    return best


def ray_hit(gens: Sequence[LaurentPoly], v, s_max: float = 50.0, n_starts: int = 24,
            seeds: np.ndarray | None = None, tol: float = DEFAULT_RESIDUAL_TOL, rng=None):
    """Search for s >= 0 and z with log|z| = s v and all gens vanishing.
    Returns (residual, s, z) of the best attempt."""
    from scipy.optimize import least_squares

    rng = rng or np.random.default_rng(0)
    v = np.asarray(v, float)
    d = len(v)

    def unpack(p):
        return np.exp(p[0] * v + 1j * p[1:])

    def res(p):
        z = unpack(p)[None, :]
        out = []
        for f in gens:
            absz = np.abs(z)
            scale = sum(abs(c) * float(np.prod(absz[0] ** np.array(n))) for n, c in f.terms.items())
            val = evaluate_many(f, z)[0] / scale
            out += [val.real, val.imag]
        return np.array(out)

    starts = []
    if seeds is not None:
        for z in seeds:
            s0 = float(np.clip(np.linalg.norm(np.log(np.abs(z))), 0, s_max))
            starts.append(np.concatenate([[s0], np.angle(z)]))
    for _ in range(n_starts):
        starts.append(np.concatenate([[rng.uniform(0, min(s_max, 5.0))],
                                      rng.uniform(-math.pi, math.pi, d)]))
    best = (np.inf, None, None)
    lo = np.concatenate([[0.0], np.full(d, -np.inf)])
    hi = np.concatenate([[s_max], np.full(d, np.inf)])
    for p0 in starts:
        p0 = np.clip(p0, lo + 1e-12, np.minimum(hi, 1e300) - 1e-12)
        try:
            sol = least_squares(res, p0, bounds=(lo, hi), xtol=1e-15, ftol=1e-15,
                                gtol=1e-15, max_nfev=300)
        except ValueError:
            continue
        z = unpack(sol.x)
        r = float(relative_residual(gens, z[None, :])[0])
        if r < best[0]:
            best = (r, float(sol.x[0]), z)
        if r < tol:
            break
    return best


def lopsided_indices(f: LaurentPoly, X) -> np.ndarray:
    """Row-wise lopsided_nonmembership: index into ``list(f.terms)`` of the
    dominant term at each row of X, or -1 where no term dominates."""
    exps = np.array(list(f.terms), float)
    logc = np.log(np.abs(np.array(list(f.terms.values()), float)))
    L = np.asarray(X, float) @ exps.T + logc
    top = L.argmax(axis=1)
    rest = np.exp(L - L.max(axis=1, keepdims=True)).sum(axis=1) - 1.0
    return np.where(rest < 1.0, top, -1)


def complement_order(f: LaurentPoly, x, grid: int = 256, margin: float = 1e-3):
    """Order of the complement component of the amoeba of f containing x.

    The order is the mean of z_j f_j / f over the torus |z| = exp(x), an
    integer point of the Newton polytope.  Equal orders mean the same
    component.  Returns None when f comes within ``margin`` (relative to the
    sum of the term moduli) of zero on the grid, or a mean is not close to
    an integer."""
    d = f.dim
    x = np.asarray(x, float)
    th = 2 * math.pi * np.arange(grid) / grid
    ang = np.stack(np.meshgrid(*([th] * d), indexing="ij"), axis=-1).reshape(-1, d)
    z = np.exp(x)[None, :] * np.exp(1j * ang)
    F = evaluate_many(f, z)
    scale = sum(abs(c) * math.exp(float(np.dot(n, x))) for n, c in f.terms.items())
    if np.abs(F).min() < margin * scale:
        return None
    order = []
    for j in range(d):
        dj = LaurentPoly(d, {n: c * n[j] for n, c in f.terms.items() if n[j]})
        num = evaluate_many(dj, z) if not dj.is_zero() else np.zeros(len(z))
        m = float(np.mean(num / F).real)
        if abs(m - round(m)) > 1e-6:
            return None
        order.append(int(round(m)))
    return tuple(order)


def ray_lopsided_clean(gens: Sequence[LaurentPoly], v, s_values, start_orders=None) -> bool:
    """True if the segment of the ray over [min s, max s] misses the amoeba.

    Complement components of an amoeba are convex, so a segment whose ends
    are lopsided for one generator with the same dominant monomial misses
    that generator's amoeba; every consecutive pair of samples must be
    covered this way by some generator.  ``start_orders`` (one per generator,
    or None) gives the complement order of the first sample, which counts as
    lopsided for the term with that exponent: a lopsided point with dominant
    term n has order n."""
    v = np.asarray(v, float)
    s_values = np.sort(np.asarray(s_values, float))
    X = s_values[:, None] * v[None, :]
    covered = np.zeros(len(s_values) - 1, bool)
    for i, f in enumerate(gens):
        k = lopsided_indices(f, X)
        if start_orders is not None and start_orders[i] is not None and k[0] < 0:
            exps = list(f.terms)
            if start_orders[i] in exps:
                k[0] = exps.index(start_orders[i])
        covered |= (k[1:] >= 0) & (k[1:] == k[:-1])
    return bool(covered.all())


@dataclass
class ExpansiveVerdict:
    verdict: str        # expansive-certified | expansive-numeric | nonexpansive | undecided
    method: str
    witness: object = None
    detail: str = ""


def expansive_check(a, budget: int = 20000, tol: float = DEFAULT_RESIDUAL_TOL,
                    seed: int = 0, n_combos: int = 40, max_boxes: int = 400000) -> ExpansiveVerdict:
    """Does the variety of the ideal miss the unit torus?"""
    from .groebner import BudgetExceeded, contains_integer

    gens = a.nonzero_gens
    d = a.dim
    if not gens:
        return ExpansiveVerdict("nonexpansive", "zero-ideal", (1.0,) * d, "zero ideal")
    try:
        m = contains_integer(a, budget)
    except BudgetExceeded:
        m = None
    if m:
        return ExpansiveVerdict("expansive-certified", "integer-in-ideal", m,
                                f"{m} lies in the ideal, so the complex variety is empty")
    zero = np.zeros(d)
    for f in gens:
        n = lopsided_nonmembership(f, zero)
        if n is not None:
            return ExpansiveVerdict("expansive-certified", "lopsided-generator", f,
                                    f"{f} is lopsided at 0 (exponent {n})")
    rng = np.random.default_rng(seed)
    for _ in range(n_combos if len(gens) > 1 else 0):
        g = LaurentPoly.zero(d)
        for f in gens:
            k = tuple(int(x) for x in rng.integers(-1, 2, size=d))
            g = g + f.shift(k).scale(int(rng.integers(-3, 4)))
        if not g.is_zero() and lopsided_nonmembership(g, zero) is not None:
            return ExpansiveVerdict("expansive-certified", "lopsided-combination", g,
                                    f"{g} lies in the ideal and is lopsided at 0")
    bnb = torus_branch_and_bound(gens, max_boxes=max_boxes)
    if bnb.certified:
        return ExpansiveVerdict("expansive-certified", "torus-branch-and-bound", None,
                                f"no common zero on the torus (depth {bnb.depth})")
    starts = np.vstack([bnb.best_points[:8], rng.uniform(-math.pi, math.pi, size=(16, d))])
    r, z = torus_minimize(gens, starts, tol)
    if r < tol:
        return ExpansiveVerdict("nonexpansive", "torus-zero", tuple(complex(x) for x in z),
                                f"common zero on the torus, residual {r:.2e}")
    if r > 1e-3:
        return ExpansiveVerdict("expansive-numeric", "torus-minimization", None,
                                f"smallest residual found {r:.2e}")
    return ExpansiveVerdict("undecided", "torus-minimization", None,
                            f"smallest residual found {r:.2e}")
