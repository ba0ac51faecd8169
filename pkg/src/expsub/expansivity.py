"""Nonexpansive sets, half-space and k-plane queries, and rank diagnostics.

The nonexpansive set splits as N = N^n U N^v: directions where the quotient
fails to be Noetherian over the half-space ring, and directions whose ray
meets the amoeba.  Module inputs are replaced by their Fitting ideal.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import amoeba as am
from .geometry import (IN, KPlane, SphericalSet, rational_approx, sset_union)
from .groebner import (DEFAULT_PAIR_BUDGET, BudgetExceeded, Ideal, ModulePresentation,
                       NoetherianCertificate, contains_integer, directional_noetherian,
                       field_dimension, fitting_ideal, krull_dimension, _prime_factors, nn_set, noetherian_along_plane)
from .laurent import Direction, LaurentPoly, as_direction, primitive


@dataclass
class AnalysisConfig:
    mode: str = "exact"                 # exact | sampled
    angular_res_deg: float = 0.5
    residual_tol: float = am.DEFAULT_RESIDUAL_TOL
    gb_budget: int = DEFAULT_PAIR_BUDGET
    seed: int = 0
    grid: am.AmoebaGrid = field(default_factory=am.AmoebaGrid)
    param_map: list | None = None       # RatFn components for a parameterized variety
    seed_res_deg: float = 5.0
    compute_ranks: bool = False
    rank_samples: int = 100
    rank_height: int = 8
    assert_prime_zero_entropy: bool = False
    ray_smax: float = 50.0

    def provenance(self) -> dict:
        return {"mode": self.mode, "angular_res_deg": self.angular_res_deg,
                "residual_tol": self.residual_tol, "gb_budget": self.gb_budget,
                "seed": self.seed, "amoeba_grid": asdict(self.grid),
                "seed_res_deg": self.seed_res_deg, "rank_samples": self.rank_samples,
                "rank_height": self.rank_height, "ray_smax": self.ray_smax,
                "zero_entropy_prime_asserted": self.assert_prime_zero_entropy}


def as_ideal(obj) -> tuple[Ideal, dict]:
    if isinstance(obj, ModulePresentation):
        ideal, zero = fitting_ideal(obj)
        return ideal, {"fitting_ideal": True, "fitting_zero": zero}
    if isinstance(obj, Ideal):
        return obj, {}
    if isinstance(obj, LaurentPoly):
        return Ideal([obj]), {}
    return Ideal(list(obj)), {}


# ---------------------------------------------------------------------------
# emptiness shortcuts

def nv_empty_test(a: Ideal, budget: int = DEFAULT_PAIR_BUDGET) -> bool:
    """N^v is empty iff a nonzero integer lies in the ideal."""
    return contains_integer(a, budget) is not None


def nn_empty_test(a: Ideal, budget: int = DEFAULT_PAIR_BUDGET) -> bool:
    """N^n is empty iff every u_i^{+-1} is integral over Z modulo the ideal."""
    # a finitely generated abelian quotient has zero-dimensional fibres over
    # Q and over each GF(p); a positive-dimensional fibre settles it cheaply
    m = contains_integer(a, budget)
    if m == 1:
        return True
    primes = _prime_factors(m) if m else [None]
    if any(field_dimension(a, p, budget) > 0 for p in primes):
        return False
    verdict, _ = noetherian_along_plane(a, [], budget)
    if verdict == "undecided":
        raise BudgetExceeded("integrality test ran out of budget")
    return verdict == "noetherian"


# ---------------------------------------------------------------------------
# the variety part

def variety_cloud(a: Ideal, cfg: AnalysisConfig) -> am.AmoebaCloud:
    if contains_integer(a, cfg.gb_budget) is not None:
        return am.AmoebaCloud.empty(a.dim, "variety empty: integer in ideal", certified=True)
    gens = a.nonzero_gens
    if cfg.param_map:
        return am.parameterized_sample(cfg.param_map, cfg.grid, gens, cfg.residual_tol)
    if all(not any(g.involves(i) for i in range(a.dim)) for g in gens):
        return am.AmoebaCloud.empty(a.dim, "monomial generator: variety empty", certified=True)
    return am.system_sample(gens, cfg.grid, cfg.residual_tol, description=str(a))


def fill_ray_gaps(a: Ideal, cloud: am.AmoebaCloud, cfg: AnalysisConfig) -> am.AmoebaCloud:
    """Plane case: for circle directions the cloud's projection misses and
    lopsidedness does not clear, look for a ray hit and add it to the cloud."""
    if a.dim != 2 or not len(cloud):
        return cloud
    if (np.linalg.norm(cloud.X, axis=1) <= 1e-6).any():
        return cloud            # the origin is on the amoeba: every ray meets it
    gens = a.nonzero_gens
    res = math.radians(cfg.angular_res_deg)
    U = cloud.X / np.maximum(np.linalg.norm(cloud.X, axis=1), 1e-300)[:, None]
    ang = np.sort(np.mod(np.arctan2(U[:, 1], U[:, 0]), 2 * math.pi))
    # probes at half the resolution, so every direction ends up within
    # 3/4 of the resolution of a cloud point
    n = int(math.ceil(4 * math.pi / res))
    th = 2 * math.pi * (np.arange(n) + 0.5) / n
    pos = np.searchsorted(ang, th) % len(ang)
    gap = np.minimum(np.abs(ang[pos] - th), np.abs(ang[pos - 1] - th))
    gap = np.minimum(gap, 2 * math.pi - gap)
    s_values = np.sinh(np.linspace(0, math.asinh(cfg.ray_smax), 400))
    rng = np.random.default_rng(cfg.seed)
    # the origin is off the amoeba here; its complement orders let the first
    # segment of each ray count as covered when it is not itself lopsided
    orders = [am.complement_order(f, np.zeros(2)) for f in gens]
    X, Z, R = [], [], []
    hit_angles: list = []
    for t in th[gap > res / 2]:
        if any(abs((t - h + math.pi) % (2 * math.pi) - math.pi) <= res / 2 for h in hit_angles[-3:]):
            continue
        v = np.array([math.cos(t), math.sin(t)])
        if am.ray_lopsided_clean(gens, v, s_values, orders):
            continue
        near = np.argsort(-(U @ v))[:3]
        r, s, z = am.ray_hit(gens, v, cfg.ray_smax, n_starts=8, seeds=cloud.Z[near],
                             tol=cfg.residual_tol, rng=rng)
        if r < cfg.residual_tol:
            x = np.log(np.abs(z))
            X.append(x)
            Z.append(z)
            R.append(r)
            hit_angles.append(math.atan2(x[1], x[0]))
    if not X:
        return cloud
    extra = am.AmoebaCloud(2, np.array(X), np.array(Z), np.array(R), "ray hits in coverage gaps",
                           tol=cloud.tol)
    return cloud.merged(extra)


def nv_from_cloud(a: Ideal, cloud: am.AmoebaCloud, cfg: AnalysisConfig) -> SphericalSet:
    if a.dim == 1:
        # S^0: signs of log|z| at the roots, decided away from the unit circle
        if cloud.meta.get("empty_certified"):
            return SphericalSet.empty(1)
        x = cloud.X[:, 0]
        if (np.abs(x) <= 1e-9).any():
            return SphericalSet.full(1, "root on the unit circle")
        pts = sorted({(1,) if v > 0 else (-1,) for v in x})
        s = SphericalSet.points(1, pts, ["root modulus"] * len(pts))
        s.notes.append("signs of log|z| at numerically computed roots")
        return s
    return am.nv_set(cloud, cfg.angular_res_deg)


# ---------------------------------------------------------------------------
# half-spaces and k-planes

@dataclass
class HalfspaceVerdict:
    verdict: str                      # expansive | nonexpansive | undecided
    noetherian: NoetherianCertificate | None
    ray: str                          # empty-certified | clean-sampled | hit | undecided
    witness: object = None
    detail: str = ""


def halfspace_expansive(a: Ideal, v, cloud: am.AmoebaCloud | None = None,
                        cfg: AnalysisConfig | None = None) -> HalfspaceVerdict:
    cfg = cfg or AnalysisConfig()
    v = as_direction(v)
    vr = v if v.rational else Direction.from_ints(rational_approx(v.unit, 10 ** 6))
    cert = directional_noetherian(a, vr, cfg.gb_budget)
    # ray half
    witness = None
    if contains_integer(a, cfg.gb_budget) is not None:
        ray = "empty-certified"
    else:
        gens = a.nonzero_gens
        seeds = None
        if cloud is not None and len(cloud):
            U = cloud.X / np.maximum(np.linalg.norm(cloud.X, axis=1), 1e-300)[:, None]
            close = U @ np.array(v.unit) > math.cos(math.radians(cfg.angular_res_deg))
            seeds = cloud.Z[close][:8]
            near0 = np.linalg.norm(cloud.X, axis=1) < 1e-9
            seeds = np.vstack([seeds, cloud.Z[near0][:4]]) if len(seeds) else cloud.Z[near0][:4]
        r, s, z = am.ray_hit(gens, v.unit, cfg.ray_smax, seeds=seeds, tol=cfg.residual_tol,
                             rng=np.random.default_rng(cfg.seed))
        if r < cfg.residual_tol:
            ray, witness = "hit", {"s": s, "z": [complex(x) for x in z], "residual": r}
        elif am.ray_lopsided_clean(gens, v.unit, np.linspace(0, cfg.ray_smax, 2001)):
            ray = "clean-sampled"
        else:
            ray = "undecided" if r < 1e-4 else "clean-sampled"
    if cert.verdict == "not-noetherian" or ray == "hit":
        verdict = "nonexpansive"
    elif cert.verdict == "noetherian" and ray in ("empty-certified", "clean-sampled"):
        verdict = "expansive"
    else:
        verdict = "undecided"
    return HalfspaceVerdict(verdict, cert, ray, witness)


@dataclass
class KPlaneVerdict:
    verdict: str                   # expansive | nonexpansive | undecided
    variety: str                   # empty-certified | hit | clean-sampled | undecided
    noetherian: str | None         # noetherian | not-noetherian | undecided | None (not run)
    witness: object = None
    certificates: list = field(default_factory=list)


def _plane_hit(gens, B: np.ndarray, seeds: np.ndarray, tol: float, rng, n_random: int = 6):
    """Least-squares search for z on the variety with log|z| orthogonal to V
    (rows of B orthonormal basis of V)."""
    from scipy.optimize import least_squares

    d = B.shape[1]

    def res(p):
        x, th = p[:d], p[d:]
        z = np.exp(x + 1j * th)[None, :]
        out = []
        absz = np.abs(z)[0]
        for f in gens:
            scale = sum(abs(c) * float(np.prod(absz ** np.array(n))) for n, c in f.terms.items())
            val = am.evaluate_many(f, z)[0] / scale
            out += [val.real, val.imag]
        return np.concatenate([out, B @ x])

    starts = [np.concatenate([np.log(np.abs(z)), np.angle(z)]) for z in seeds]
    starts += [np.concatenate([rng.normal(size=d), rng.uniform(-math.pi, math.pi, d)])
               for _ in range(n_random)]
    best = (np.inf, None)
    for p0 in starts:
        sol = least_squares(res, p0, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=400)
        x, th = sol.x[:d], sol.x[d:]
        z = np.exp(x + 1j * th)
        r = max(float(am.relative_residual(gens, z[None, :])[0]), float(np.abs(B @ x).max()))
        if r < best[0]:
            best = (r, z)
        if r < tol:
            break
    return best


def kplane_nonexpansive(a: Ideal, V: KPlane, cloud: am.AmoebaCloud | None = None,
                        cfg: AnalysisConfig | None = None, run_noetherian: bool = True) -> KPlaneVerdict:
    """Is the action nonexpansive along V?  The variety half (does the
    orthogonal complement of V meet the amoeba) runs first; the Noetherian
    half runs only when the variety half finds nothing."""
    cfg = cfg or AnalysisConfig()
    rng = np.random.default_rng(cfg.seed)
    if contains_integer(a, cfg.gb_budget) is not None:
        variety, witness = "empty-certified", None
    else:
        gens = a.nonzero_gens
        if cloud is None:
            cloud = variety_cloud(a, cfg)
        B = V.orthonormal()
        witness = None
        variety = "undecided"
        if len(cloud):
            Y = cloud.X @ B.T
            nrm = np.linalg.norm(cloud.X, axis=1)
            if (np.linalg.norm(Y, axis=1) < 1e-9).any():
                i = int(np.argmin(np.linalg.norm(Y, axis=1)))
                variety, witness = "hit", {"z": [complex(x) for x in cloud.Z[i]]}
            elif V.k == 1 and (Y[:, 0] > 0).any() and (Y[:, 0] < 0).any():
                # the amoeba of an irreducible variety is connected
                i, j = int(np.argmax(Y[:, 0])), int(np.argmin(Y[:, 0]))
                variety, witness = "hit", {"sign_change": [cloud.X[i].tolist(), cloud.X[j].tolist()]}
            else:
                ratio = np.linalg.norm(Y, axis=1) / np.maximum(nrm, 1e-300)
                order = np.argsort(ratio)
                seeds = cloud.Z[order[:4]]
                r, z = _plane_hit(gens, B, seeds, cfg.residual_tol, rng)
                if r < cfg.residual_tol:
                    variety, witness = "hit", {"z": [complex(x) for x in z], "residual": r}
                elif ratio[order[0]] < math.sin(math.radians(cfg.angular_res_deg)):
                    # cloud points within the angular resolution of V^perp
                    variety = "hit"
                    witness = {"near": cloud.X[order[0]].tolist(), "sampled": True}
                elif r > 1e-4:
                    variety = "clean-sampled"
        else:
            variety = "clean-sampled"
    if variety == "hit":
        return KPlaneVerdict("nonexpansive", variety, None, witness)
    if not run_noetherian or not V.rational:
        return KPlaneVerdict("undecided", variety, None, witness)
    try:
        nv, certs = noetherian_along_plane(a, V.basis, cfg.gb_budget)
    except BudgetExceeded:
        nv, certs = "undecided", []
    if nv == "not-noetherian":
        verdict = "nonexpansive"
    elif nv == "noetherian" and variety in ("empty-certified", "clean-sampled"):
        verdict = "expansive"
    else:
        verdict = "undecided"
    return KPlaneVerdict(verdict, variety, nv, witness, certs)


# ---------------------------------------------------------------------------
# ranks

@dataclass
class RankReport:
    kdim: int | None
    exprk_lower: int | None
    exprk_upper: int | None
    exprk_lower_sampled: bool
    entrk_lower: int | None
    entrk_upper: int | None
    expansive: str
    searched: dict
    expansive_planes: dict
    notes: list = field(default_factory=list)

    @property
    def exprk(self):
        if self.exprk_lower is not None and self.exprk_lower == self.exprk_upper:
            return self.exprk_lower
        return None


def random_rational_planes(d: int, k: int, n: int, height: int, rng) -> list[KPlane]:
    out, seen = [], set()
    tries = 0
    while len(out) < n and tries < 50 * n:
        tries += 1
        M = rng.integers(-height, height + 1, size=(k, d))
        if np.linalg.matrix_rank(M) < k:
            continue
        key = tuple(primitive(tuple(int(x) for x in r)) for r in M) if k == 1 else tuple(map(tuple, M.tolist()))
        if key in seen:
            continue
        seen.add(key)
        out.append(KPlane.from_ints([tuple(int(x) for x in r) for r in M]))
    return out


def ranks(a: Ideal, cfg: AnalysisConfig | None = None, cloud: am.AmoebaCloud | None = None,
          n_samples: int | None = None) -> RankReport:
    cfg = cfg or AnalysisConfig()
    d = a.dim
    n_samples = n_samples or cfg.rank_samples
    rng = np.random.default_rng(cfg.seed)
    notes = []
    try:
        kdim = krull_dimension(a, cfg.gb_budget)
    except (ValueError, BudgetExceeded) as exc:
        kdim = None
        notes.append(f"krull dimension unavailable: {exc}")
    ev = am.expansive_check(a, cfg.gb_budget, cfg.residual_tol, cfg.seed)
    expansive = ev.verdict
    if cloud is None:
        cloud = variety_cloud(a, cfg)
    searched, found = {}, {}
    lower, upper, sampled = None, None, False
    try:
        finite = nn_empty_test(a, cfg.gb_budget) and nv_empty_test(a, cfg.gb_budget)
    except BudgetExceeded:
        finite = False
    if finite:
        lower = upper = 0
        notes.append("finite group: the zero subspace is expansive")
    else:
        for k in range(1, d):
            planes = random_rational_planes(d, k, n_samples, cfg.rank_height, rng)
            searched[k] = len(planes)
            for V in planes:
                res = kplane_nonexpansive(a, V, cloud, cfg)
                if res.verdict == "expansive":
                    found[k] = [list(b) for b in V.basis]
                    break
            if k in found:
                upper = k
                lower = k
                sampled = k > 1
                break
        if upper is None:
            if expansive.startswith("expansive"):
                upper = d
                lower = d
                sampled = d > 1
                if expansive == "expansive-numeric":
                    notes.append("full-space expansiveness is numeric, not certified")
            else:
                notes.append("action is not expansive: no expansive subspace found")
                lower = d if d > 1 else None
                sampled = True
    if sampled:
        notes.append("exprk lower bound rests on sampled plane searches")
    if cfg.assert_prime_zero_entropy and kdim is not None and expansive.startswith("expansive"):
        ent_lo = ent_hi = kdim
        notes.append("entrk = kdim under user-asserted prime/zero-entropy hypotheses")
    else:
        ent_lo, ent_hi = 0, upper
    if ent_lo is not None and upper is not None and ent_lo > upper:
        raise AssertionError("entropy rank exceeds expansive rank")
    return RankReport(kdim, lower, upper, sampled, ent_lo, ent_hi, expansive, searched, found, notes)


# ---------------------------------------------------------------------------
# full analysis

@dataclass
class AnalysisReport:
    ideal: Ideal
    nn: SphericalSet
    nv: SphericalSet
    n: SphericalSet
    expansive: am.ExpansiveVerdict
    flags: dict
    certificates: list
    ranks: RankReport | None
    config: AnalysisConfig
    cloud: am.AmoebaCloud | None = None
    component_estimate: int | None = None
    undecided: list = field(default_factory=list)

    def contains(self, v) -> dict:
        return {"nn": self.nn.contains(v), "nv": self.nv.contains(v), "n": self.n.contains(v)}

    def to_dict(self) -> dict:
        from .formats import report_dict

        return report_dict(self)


def estimate_components(n: SphericalSet, samples: int = 720) -> int | None:
    """Number of connected pieces of the complement of N on S^1 (d=2 only).

    Exact points and arc ends are added to the angular samples so isolated
    directions of N split the complement even between grid angles."""
    if n.dim != 2:
        return None
    th = list(2 * math.pi * (np.arange(samples) + 0.5) / samples)
    for c in n.cells:
        rays = [c.interior_point()] if c.kind == "point" else c.extreme_rays() if c.kind == "arc" else []
        th += [math.atan2(r[1], r[0]) % (2 * math.pi) for r in rays]
    th = sorted(th)
    inside = [n.contains(Direction.from_vector((math.cos(t), math.sin(t)))) == IN for t in th]
    if all(inside):
        return 0
    if not any(inside):
        return 1
    return sum(1 for i in range(len(th)) if not inside[i] and inside[i - 1])


def analyze(obj, cfg: AnalysisConfig | None = None) -> AnalysisReport:
    cfg = cfg or AnalysisConfig()
    a, flags = as_ideal(obj)
    d = a.dim
    certs: list = []
    m = contains_integer(a, cfg.gb_budget) if a.nonzero_gens else None
    flags["integer_in_ideal"] = m
    flags["nv_empty_by_torsion"] = m is not None
    if m == 1:
        empty = SphericalSet.empty(d)
        ev = am.ExpansiveVerdict("expansive-certified", "unit-ideal", 1, "trivial module")
        flags["nn_empty_by_fg_abelian"] = True
        flags["notes"] = []
        return AnalysisReport(a, empty, empty, empty, ev, flags, certs, None, cfg, None, 0)
    try:
        flags["nn_empty_by_fg_abelian"] = bool(a.nonzero_gens) and nn_empty_test(a, cfg.gb_budget)
    except BudgetExceeded:
        flags["nn_empty_by_fg_abelian"] = None
    if flags["nn_empty_by_fg_abelian"]:
        nn = SphericalSet.empty(d)
    else:
        nn = nn_set(a, cfg.mode, cfg.angular_res_deg, cfg.gb_budget, cfg.seed_res_deg, certs=certs)
    cloud = None
    if flags["nv_empty_by_torsion"]:
        nv = SphericalSet.empty(d)
    else:
        cloud = fill_ray_gaps(a, variety_cloud(a, cfg), cfg)
        nv = nv_from_cloud(a, cloud, cfg)
    n = sset_union(nn, nv)
    ev = am.expansive_check(a, cfg.gb_budget, cfg.residual_tol, cfg.seed)
    rk = ranks(a, cfg, cloud) if cfg.compute_ranks else None
    # notes that describe the method rather than an open region go to flags
    undecided = [c for c in certs if c.verdict == "undecided"]
    undecided += [s for s in nn.notes if s.startswith(("undecided", "refinement budget"))]
    flags["notes"] = [s for s in nn.notes + nv.notes if s not in undecided]
    return AnalysisReport(a, nn, nv, n, ev, flags, certs, rk, cfg, cloud,
                          estimate_components(n), undecided)
