"""Homoclinic points: Fourier construction for expansive principal actions and
explicit series and binomial formulas for Ledrappier-type systems.

Windows hold torus values on the box [-N, N]^d.  Where the construction is
exact the integer or rational lift is kept alongside, so relations can be
checked without rounding.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .laurent import LaurentPoly


class NotExpansive(ValueError):
    pass


class WindowTooSmall(ValueError):
    pass


def dist_to_int(x):
    """Distance from x to the nearest integer (works on arrays and Fractions)."""
    if isinstance(x, Fraction):
        r = x - math.floor(x)
        return min(r, 1 - r)
    x = np.asarray(x, float)
    r = x - np.floor(x)
    return np.minimum(r, 1 - r)


@dataclass
class TorusWindow:
    dim: int
    N: int
    values: np.ndarray            # shape (2N+1,)*dim, entries in [0, 1)
    provenance: str
    lift: object = None           # real lift (ndarray) or dict of exact Fractions
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.values.shape != (2 * self.N + 1,) * self.dim:
            raise ValueError("window shape does not match dimension")
        v = self.values
        if (v < 0).any() or (v >= 1).any():
            raise ValueError("torus values must lie in [0, 1)")

    def __getitem__(self, n):
        if any(abs(x) > self.N for x in n):
            raise IndexError(n)
        return float(self.values[tuple(x + self.N for x in n)])

    def lift_at(self, n):
        if self.lift is None:
            return self[n]
        if isinstance(self.lift, dict):
            return self.lift.get(tuple(n), Fraction(0))
        return float(self.lift[tuple(x + self.N for x in n)])

    def sites(self):
        return itertools.product(range(-self.N, self.N + 1), repeat=self.dim)

    @classmethod
    def zero(cls, dim: int, N: int) -> "TorusWindow":
        return cls(dim, N, np.zeros((2 * N + 1,) * dim), "zero", np.zeros((2 * N + 1,) * dim))

    def to_text(self) -> str:
        lines = [f"# window dim={self.dim} N={self.N} provenance={self.provenance}"]
        for n in self.sites():
            lines.append(" ".join(str(x) for x in n) + f" {self[n]:.15g}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "TorusWindow":
        head, *rows = [ln for ln in text.splitlines() if ln.strip()]
        kv = dict(tok.split("=") for tok in head.lstrip("# ").split()[1:])
        d, N = int(kv["dim"]), int(kv["N"])
        vals = np.zeros((2 * N + 1,) * d)
        for ln in rows:
            parts = ln.split()
            vals[tuple(int(x) + N for x in parts[:d])] = float(parts[d])
        return cls(d, N, vals, kv.get("provenance", "text"))


def _mod1(x: np.ndarray) -> np.ndarray:
    r = x - np.floor(x)
    r[r >= 1.0] = 0.0
    return r


def _fft_lift(f: LaurentPoly, G: int) -> tuple[np.ndarray, float]:
    """Coefficients of the Fourier series of 1/F, F(s) = f(1/s), on a G^d grid,
    indexed cyclically.  Returns (coefficients, min |F| on the grid)."""
    d = f.dim
    k = np.arange(G)
    grids = np.meshgrid(*([k] * d), indexing="ij")
    s = np.stack([np.exp(2j * math.pi * g / G) for g in grids], axis=-1)
    from .laurent import evaluate_many

    F = evaluate_many(f, 1.0 / s)
    m = float(np.abs(F).min())
    if m == 0.0:
        raise NotExpansive("f vanishes on the sampled torus")
    # x_n = integral of s^{-n}/F(s)
    coeffs = np.fft.fftn(1.0 / F) / G ** d
    return coeffs, m


def _crop(coeffs: np.ndarray, N: int) -> np.ndarray:
    idx = np.arange(-N, N + 1) % coeffs.shape[0]
    out = coeffs
    for ax in range(coeffs.ndim):
        out = np.take(out, idx, axis=ax)
    return out


def principal_homoclinic(f: LaurentPoly, N: int, G: int | None = None,
                         check_expansive: bool = True) -> TorusWindow:
    """The homoclinic point x^Delta of an expansive principal action on [-N, N]^d."""
    from . import amoeba
    from .groebner import Ideal

    G = G or max(64, 8 * N)
    if G < 4 * N:
        raise ValueError("grid size must be at least 4N")
    if check_expansive:
        ev = amoeba.expansive_check(Ideal([f]))
        if ev.verdict == "nonexpansive":
            raise NotExpansive(f"{f}: {ev.detail}")
    coeffs, m = _fft_lift(f, G)
    lift = _crop(coeffs, N)
    coeffs2, _ = _fft_lift(f, 2 * G)
    lift2 = _crop(coeffs2, N)
    err = float(np.abs(lift - lift2).max())
    imag = float(np.abs(lift.imag).max())
    real = lift2.real
    return TorusWindow(f.dim, N, _mod1(real), "fft", real,
                       {"grid": G, "doubling_error": err, "imag_part": imag, "min_abs_F": m})


def geometric_series_oracle(c: int, N: int) -> dict:
    """Exact x^Delta for f = u - c, |c| > 1, from 1/(s^{-1} - c) = -1/c sum (s^{-1}/c)^m."""
    out = {}
    for n in range(-N, N + 1):
        out[n] = Fraction(0) if n > 0 else -Fraction(1, c) * Fraction(1, c) ** (-n)
    return out


@dataclass
class ConvolutionDefect:
    mod1: float          # max distance to Z of the relation on reduced values
    lift: float          # max |relation - delta_0| on the lift
    sites: int


def convolution_check(f: LaurentPoly, w: TorusWindow) -> ConvolutionDefect:
    """Evaluate sum_n c_f(n) w_{m+n} at every m whose translate of supp f fits."""
    d = w.dim
    if d != f.dim:
        raise ValueError("dimension mismatch")
    lo = [min(n[i] for n in f.terms) for i in range(d)]
    hi = [max(n[i] for n in f.terms) for i in range(d)]
    ranges = [range(-w.N - lo[i], w.N - hi[i] + 1) for i in range(d)]
    if any(len(r) == 0 for r in ranges):
        raise WindowTooSmall("window smaller than the Newton polytope of f")
    V = w.values
    L = w.lift if isinstance(w.lift, np.ndarray) else None
    shape = tuple(len(r) for r in ranges)
    acc = np.zeros(shape)
    accl = np.zeros(shape)
    for n, c in f.terms.items():
        sl = tuple(slice(r.start + n[i] + w.N, r.stop + n[i] + w.N) for i, r in enumerate(ranges))
        acc += c * V[sl]
        if L is not None:
            accl += c * L[sl]
    mod1 = float(dist_to_int(acc).max())
    if L is None:
        return ConvolutionDefect(mod1, float("nan"), int(acc.size))
    centre = tuple(-r.start for r in ranges)
    if all(0 <= centre[i] < shape[i] for i in range(d)):
        accl[centre] -= 1.0
    return ConvolutionDefect(mod1, float(np.abs(accl).max()), int(acc.size))


# ---------------------------------------------------------------------------
# explicit families

@dataclass
class SeriesWindow:
    a: int
    b: int
    K: int
    y: dict          # (m, n) -> Fraction

    def __getitem__(self, n):
        return self.y.get(tuple(n), Fraction(0))

    def recurrence_defect(self) -> Fraction:
        """max |y_n + 2^a y_{n+e1} + 2^b y_{n+e2} - delta_0| over sites whose
        relation only uses computed terms."""
        A, B = Fraction(2) ** self.a, Fraction(2) ** self.b
        worst = Fraction(0)
        for k in range(self.K):
            for j in range(k + 1):
                n = (-j, -(k - j))
                val = self[n] + A * self[(n[0] + 1, n[1])] + B * self[(n[0], n[1] + 1)]
                if n == (0, 0):
                    val -= 1
                worst = max(worst, abs(val))
        return worst

    def antidiagonal_sums(self) -> list[Fraction]:
        return [sum(abs(self[(-j, -(k - j))]) for j in range(k + 1)) for k in range(self.K + 1)]


def ledrappier_family_series(a: int, b: int, K: int) -> SeriesWindow:
    """Coefficients of 1/(1 + 2^a u^{-1} + 2^b v^{-1}) through total degree K."""
    if K < 1:
        raise ValueError("K must be at least 1")
    A, B = Fraction(2) ** a, Fraction(2) ** b
    y = {}
    for k in range(K + 1):
        for j in range(k + 1):
            y[(-j, -(k - j))] = (-1) ** k * comb(k, j) * A ** j * B ** (k - j)
    return SeriesWindow(a, b, K, y)


def eins_ward_integer(i: int, j: int) -> int:
    """Integer part of the two-branch binomial formula (the factor 2^k removed)."""
    if i >= 0 and j <= 0:
        return (1 if i % 2 else -1) * comb(i, -j)
    if i <= -1 and j >= 1:
        return (1 if j % 2 else -1) * comb(j - 1, -i - 1)
    return 0


def eins_ward_fundamental(N: int) -> TorusWindow:
    if N < 2:
        raise ValueError("N must be at least 2")
    lift = {}
    vals = np.zeros((2 * N + 1,) * 3)
    for i, j, k in itertools.product(range(-N, N + 1), repeat=3):
        c = eins_ward_integer(i, j)
        if c:
            x = c * Fraction(2) ** k
            lift[(i, j, k)] = x
            r = x - math.floor(x)
            vals[i + N, j + N, k + N] = float(r)
    return TorusWindow(3, N, vals, "formula", lift)


def eins_ward_relation_defects(w: TorusWindow) -> tuple[Fraction, Fraction]:
    """Exact defects of x_n + x_{n+e1} + x_{n+e2} = 0 and x_{n+e3} = 2 x_n on the
    lifted values over the window interior."""
    N = w.N
    d1 = d2 = Fraction(0)
    for i, j, k in itertools.product(range(-N, N), repeat=3):
        x = w.lift_at((i, j, k))
        d1 = max(d1, abs(x + w.lift_at((i + 1, j, k)) + w.lift_at((i, j + 1, k))))
        d2 = max(d2, abs(w.lift_at((i, j, k + 1)) - 2 * x))
    return d1, d2


# ---------------------------------------------------------------------------
# decay along subspaces

@dataclass
class DecayProfile:
    radii: list
    maxima: list
    verdict: str          # decays | flat
    tol: float


def homoclinic_along(w: TorusWindow, V, thickness: float = 1.0, tol: float = 0.05,
                     inner_frac: float = 0.5) -> DecayProfile:
    """Max distance to Z of entries within ``thickness`` of V, by integer norm
    shell, over the ball of radius N.  Decays when the outer shells
    (norm >= inner_frac N) stay below ``tol``."""
    from .geometry import KPlane

    if not isinstance(V, KPlane):
        V = KPlane.from_ints(V) if V else KPlane(0, (), True)
    N = w.N
    if thickness >= inner_frac * N:
        raise WindowTooSmall("window does not cover the thickened plane")
    d = w.dim
    idx = np.indices(w.values.shape).reshape(d, -1).T - N
    if V.k:
        B = V.orthonormal()
        perp = idx - (idx @ B.T) @ B
    else:
        perp = idx.astype(float)
    dist = np.linalg.norm(perp, axis=1)
    norm = np.linalg.norm(idx, axis=1)
    sel = (dist <= thickness + 1e-12) & (norm <= N)
    vals = dist_to_int(w.values.reshape(-1))[sel]
    shells = np.floor(norm[sel]).astype(int)
    radii = list(range(int(shells.max()) + 1)) if sel.any() else []
    maxima = [float(vals[shells == r].max()) if (shells == r).any() else 0.0 for r in radii]
    outer = [m for r, m in zip(radii, maxima) if r >= inner_frac * N]
    verdict = "decays" if not outer or max(outer) <= tol else "flat"
    return DecayProfile(radii, maxima, verdict, tol)
