"""Lattice polytopes (d <= 3), normal fans and subsets of the unit sphere.

Exact spherical cells are polyhedral cones cut by integer constraints::

    { v : e.v = 0 for e in eqs,  n.v >= 0 (or > 0) for n in ineqs }

intersected with the sphere.  Sampled sets keep unit vectors with a flag and
the refinement depth at which the flag was decided.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .laurent import Direction, as_direction, primitive

IN, OUT, UNDECIDED = "in", "out", "undecided"
FLOAT_TOL = 1e-9


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _rank(vectors) -> int:
    if not vectors:
        return 0
    return int(np.linalg.matrix_rank(np.array(vectors, dtype=float)))


# ---------------------------------------------------------------------------
# polytopes

@dataclass(frozen=True)
class LatticePolytope:
    dim: int
    affine_dim: int
    vertices: tuple                 # extreme points
    edges: tuple                    # pairs of vertices
    facets: tuple = ()              # (vertex tuple, primitive outward normal); full-dim only

    @property
    def degenerate(self) -> bool:
        return self.affine_dim < self.dim

    def faces(self):
        """Faces of positive dimension as vertex tuples (edges, then 2-faces)."""
        out = [tuple(e) for e in self.edges]
        if self.dim == 3:
            if self.affine_dim == 3:
                out += [f for f, _ in self.facets]
            elif self.affine_dim == 2:
                out.append(self.vertices)
        return out

    def normal_cone(self, face: Sequence[tuple], closed: bool = True) -> "Cell":
        """Closed (or relatively open) normal cone of a face given by its vertices."""
        face = [tuple(x) for x in face]
        s0 = face[0]
        eqs = [_sub(s, s0) for s in face[1:]]
        ineqs = [(_sub(s0, c), not closed) for c in self.vertices if c not in face]
        if len(face) == 1:
            label = "vertex:" + _fmt(s0)
        elif len(face) == 2:
            label = "edge:" + _fmt(face[0]) + "-" + _fmt(face[1])
        else:
            label = "face:" + "|".join(_fmt(f) for f in face)
        return Cell.make(self.dim, eqs, ineqs, label)

    def edge_normal_directions(self) -> list[tuple]:
        """d=2: primitive outward normals of the edges (both sides of a segment)."""
        if self.dim != 2:
            raise ValueError("edge normals as directions only make sense for d=2")
        out = []
        for a, b in self.edges:
            e = _sub(b, a)
            for n in ((e[1], -e[0]), (-e[1], e[0])):
                # keep the normal whose half-plane contains all vertices
                if all(_dot(n, _sub(c, a)) <= 0 for c in self.vertices):
                    out.append(primitive(n))
        return sorted(set(out))

    def edge_planes(self) -> list[tuple]:
        """d=3: primitive normals of the great circles carrying edge normal cones."""
        return sorted({_canon(primitive(_sub(b, a))) for a, b in self.edges})


def _canon(v):
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


def _fmt(n) -> str:
    return "(" + ",".join(str(x) for x in n) + ")"


def _hull2d(points: list[tuple]) -> list[tuple]:
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]  # counterclockwise


def _affine_dim(points) -> int:
    p0 = points[0]
    return _rank([_sub(p, p0) for p in points[1:]])


def _injective_coords(points, k) -> tuple:
    """A set of k coordinates on which the affine span projects injectively."""
    p0 = points[0]
    diffs = [_sub(p, p0) for p in points[1:]]
    d = len(p0)
    for S in itertools.combinations(range(d), k):
        if _rank([[x[i] for i in S] for x in diffs]) == k:
            return S
    raise AssertionError("no injective projection")


def convex_hull(points: Iterable[Sequence[int]]) -> LatticePolytope:
    pts = sorted({tuple(int(x) for x in p) for p in points})
    if not pts:
        raise ValueError("empty point set")
    d = len(pts[0])
    if d > 3:
        raise ValueError("exact convex hulls are limited to d <= 3")
    ad = _affine_dim(pts) if len(pts) > 1 else 0
    if ad == 0:
        return LatticePolytope(d, 0, (pts[0],), ())
    if ad == 1:
        # extreme points along the line
        p0 = pts[0]
        dirv = next(_sub(p, p0) for p in pts if p != p0)
        proj = sorted(pts, key=lambda p: _dot(_sub(p, p0), dirv))
        a, b = proj[0], proj[-1]
        return LatticePolytope(d, 1, (a, b), ((a, b),))
    if ad == 2:
        S = _injective_coords(pts, 2)
        lookup = {tuple(p[i] for i in S): p for p in pts}
        ring = [lookup[q] for q in _hull2d(list(lookup))]
        edges = tuple((ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring)))
        if d == 2:
            return LatticePolytope(2, 2, tuple(ring), edges,
                                   tuple(((a, b), _outward2(a, b, ring)) for a, b in edges))
        return LatticePolytope(d, 2, tuple(ring), edges)
    return _hull3d(pts)


def _outward2(a, b, ring):
    e = _sub(b, a)
    n = primitive((e[1], -e[0]))
    if any(_dot(n, _sub(c, a)) > 0 for c in ring):
        n = tuple(-x for x in n)
    return n


def _hull3d(pts: list[tuple]) -> LatticePolytope:
    planes = {}
    for a, b, c in itertools.combinations(pts, 3):
        n = _cross(_sub(b, a), _sub(c, a))
        if not any(n):
            continue
        n = primitive(n)
        off = _dot(n, a)
        vals = [_dot(n, p) - off for p in pts]
        if all(x <= 0 for x in vals):
            planes[(n, off)] = None
        elif all(x >= 0 for x in vals):
            planes[(tuple(-x for x in n), -off)] = None
    facets = []
    verts = set()
    edges = set()
    for n, off in planes:
        on = [p for p in pts if _dot(n, p) == off]
        S = _injective_coords(on, 2)
        lookup = {tuple(p[i] for i in S): p for p in on}
        ring = [lookup[q] for q in _hull2d(list(lookup))]
        facets.append((tuple(ring), n))
        verts.update(ring)
        for i in range(len(ring)):
            a, b = ring[i], ring[(i + 1) % len(ring)]
            edges.add((min(a, b), max(a, b)))
    V, E, F = len(verts), len(edges), len(facets)
    if V - E + F != 2:
        raise AssertionError(f"Euler relation failed: {V}-{E}+{F}")
    return LatticePolytope(3, 3, tuple(sorted(verts)), tuple(sorted(edges)),
                           tuple(sorted(facets, key=lambda f: f[1])))


def spherical_dual(p: LatticePolytope) -> "SphericalSet":
    """Relatively open normal cones of all faces, labeled by face."""
    if p.degenerate:
        raise ValueError("spherical_dual needs a full-dimensional polytope")
    cells = [p.normal_cone([v], closed=False) for v in p.vertices]
    cells += [p.normal_cone(f, closed=False) for f in p.faces()]
    return SphericalSet(p.dim, cells)


# ---------------------------------------------------------------------------
# exact cells

@dataclass(frozen=True)
class Cell:
    dim: int
    eqs: tuple
    ineqs: tuple            # (normal, strict)
    label: str = ""

    @classmethod
    def make(cls, dim, eqs=(), ineqs=(), label=""):
        eqs = tuple(sorted({_canon(primitive(e)) for e in eqs if any(e)}))
        ins = {}
        for n, strict in ineqs:
            if not any(n):
                if strict:
                    ins[(0,) * dim] = True  # 0 > 0: empty cell
                continue
            pn = primitive(n)
            ins[pn] = ins.get(pn, False) or bool(strict)
        return cls(dim, eqs, tuple(sorted(ins.items())), label)

    @classmethod
    def point(cls, v: Sequence[int], label=""):
        v = primitive(v)
        d = len(v)
        eqs = _complement_basis(v)
        return cls.make(d, eqs, [(v, False)], label)

    def intersect(self, other: "Cell") -> "Cell":
        label = "&".join(x for x in (self.label, other.label) if x)
        return Cell.make(self.dim, self.eqs + other.eqs, self.ineqs + other.ineqs, label)

    def contains(self, v) -> bool:
        v = as_direction(v)
        if v.witness is not None:
            w = v.witness
            if any(_dot(e, w) != 0 for e in self.eqs):
                return False
            for n, strict in self.ineqs:
                s = _dot(n, w)
                if s < 0 or (strict and s == 0):
                    return False
            return True
        u = v.unit
        for e in self.eqs:
            if abs(_dot(e, u)) > FLOAT_TOL * math.sqrt(_dot(e, e)):
                return False
        for n, strict in self.ineqs:
            s = _dot(n, u) / math.sqrt(_dot(n, n))
            if s < -FLOAT_TOL or (strict and s <= FLOAT_TOL):
                return False
        return True

    def distance_ok(self, u, tol) -> bool:
        """Membership with an absolute slack ``tol`` (sine of an angle)."""
        for e in self.eqs:
            if abs(_dot(e, u)) > tol * math.sqrt(_dot(e, e)):
                return False
        for n, strict in self.ineqs:
            if _dot(n, u) / math.sqrt(_dot(n, n)) < -tol:
                return False
        return True

    def _candidates(self):
        d = self.dim
        normals = list(self.eqs) + [n for n, _ in self.ineqs]
        basis = [tuple(int(i == j) for j in range(d)) for i in range(d)]
        cand = set()
        for b in basis + normals:
            cand.add(primitive(b))
        if d == 2:
            for n in normals + basis:
                cand.add(primitive((-n[1], n[0])))
        elif d == 3:
            for a, b in itertools.combinations(normals + basis, 2):
                c = _cross(a, b)
                if any(c):
                    cand.add(primitive(c))
        cand |= {tuple(-x for x in c) for c in cand}
        return cand

    def generators(self) -> list[tuple]:
        """Integer vectors in the closed cone whose conic hull is the closed cone."""
        out = []
        for c in sorted(self._candidates()):
            if all(_dot(e, c) == 0 for e in self.eqs) and all(_dot(n, c) >= 0 for n, _ in self.ineqs):
                out.append(c)
        return out

    def interior_point(self) -> tuple | None:
        """An integer vector in the relative interior satisfying the strict
        constraints, or None when the cell is empty."""
        gens = self.generators()
        if not gens:
            return None
        s = tuple(sum(g[i] for g in gens) for i in range(self.dim))
        if not any(s):
            # cone is a linear subspace: any generator is interior
            s = gens[0]
        if all(_dot(n, s) > 0 for n, strict in self.ineqs if strict):
            return primitive(s)
        return None

    def is_empty(self) -> bool:
        return self.interior_point() is None

    def cone_dim(self) -> int:
        return _rank(self.generators())

    @property
    def kind(self) -> str:
        if not self.eqs and not self.ineqs:
            return "full"
        k = self.cone_dim()
        return {0: "empty", 1: "point", 2: "arc", 3: "polygon"}.get(k, "region") if self.dim > 1 else "point"

    def extreme_rays(self) -> list[tuple]:
        gens = self.generators()
        out = []
        for g in gens:
            others = [h for h in gens if h != g]
            # g is extreme if it is not a nonnegative combination of two others
            if not _in_cone_of(g, others):
                out.append(g)
        return out

    def to_dict(self):
        return {"eqs": [list(e) for e in self.eqs],
                "ineqs": [[list(n), bool(s)] for n, s in self.ineqs],
                "label": self.label, "kind": self.kind}

    @classmethod
    def from_dict(cls, dim, obj):
        return cls.make(dim, [tuple(e) for e in obj["eqs"]],
                        [(tuple(n), s) for n, s in obj["ineqs"]], obj.get("label", ""))


def _in_cone_of(g, others) -> bool:
    if any(primitive(h) == g for h in others):
        return True
    gg = np.array(g, float)
    for a, b in itertools.combinations(others, 2):
        M = np.array([a, b], float).T
        sol, *_ = np.linalg.lstsq(M, gg, rcond=None)
        if np.allclose(M @ sol, gg, atol=1e-9) and (sol >= -1e-12).all() and (sol > 1e-12).sum() == 2:
            return True
    return False


def _complement_basis(v) -> list[tuple]:
    """Integer vectors spanning the orthogonal complement of v."""
    d = len(v)
    if d == 1:
        return []
    if d == 2:
        return [(-v[1], v[0])]
    out = []
    for i in range(d):
        e = tuple(int(i == j) for j in range(d))
        c = _cross(v, e)
        if any(c) and _rank(out + [c]) > len(out):
            out.append(c)
        if len(out) == d - 1:
            break
    return out


# ---------------------------------------------------------------------------
# sampled masks

class SampledMask:
    """Unit vectors with in/out/undecided flags and refinement depths."""

    def __init__(self, dim: int, dirs, flags, depths=None, resolution: float = math.radians(0.5),
                 in_only: bool = False, parts: Sequence["SampledMask"] = ()):
        # in_only: only members were recorded, so a direction with no sample
        # within the resolution is out.  parts: union of masks.
        self.dim = dim
        self.in_only = in_only
        self.parts = list(parts)
        dirs = np.asarray(dirs, dtype=float).reshape(-1, dim)
        if len(dirs):
            dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
        self.dirs = dirs
        self.flags = np.asarray(flags, dtype=np.int8).reshape(-1)   # 1 in, 0 out, -1 undecided
        self.depths = (np.zeros(len(self.flags), dtype=np.int16) if depths is None
                       else np.asarray(depths, dtype=np.int16).reshape(-1))
        self.resolution = float(resolution)
        self._tree = None

    def __len__(self):
        return len(self.flags)

    def tree(self):
        if self._tree is None and len(self.dirs):
            from scipy.spatial import cKDTree

            self._tree = cKDTree(self.dirs)
        return self._tree

    def query(self, u) -> str:
        if self.parts:
            res = [m.query(u) for m in self.parts]
            return IN if IN in res else (UNDECIDED if UNDECIDED in res else OUT)
        if not len(self.dirs):
            return OUT
        u = np.asarray(u, float)
        u = u / np.linalg.norm(u)
        chord = 2 * math.sin(min(self.resolution, math.pi) / 2)
        idx = self.tree().query_ball_point(u, chord + 1e-12)
        if not idx:
            if self.in_only:
                return OUT
            _, j = self.tree().query(u)
            idx = [j]
        f = self.flags[idx]
        if (f == 1).any():
            return IN
        if (f == -1).any():
            return UNDECIDED
        return OUT

    def query_many(self, U) -> list[str]:
        return [self.query(u) for u in np.asarray(U, float)]

    def leaves(self) -> list["SampledMask"]:
        return [x for m in self.parts for x in m.leaves()] if self.parts else [self]

    def merged(self, other: "SampledMask") -> "SampledMask":
        parts = self.leaves() + other.leaves()
        return SampledMask(self.dim, np.vstack([m.dirs for m in parts]),
                           np.concatenate([m.flags for m in parts]),
                           np.concatenate([m.depths for m in parts]),
                           max(m.resolution for m in parts), parts=parts)

    def in_dirs(self):
        return self.dirs[self.flags == 1]

    def to_dict(self):
        if self.parts:
            return {"union": [m.to_dict() for m in self.parts]}
        return {"resolution": self.resolution, "in_only": self.in_only,
                "points": [[[round(float(x), 12) for x in u], int(f), int(dp)]
                           for u, f, dp in zip(self.dirs, self.flags, self.depths)]}

    @classmethod
    def from_dict(cls, dim, obj):
        if "union" in obj:
            parts = [cls.from_dict(dim, o) for o in obj["union"]]
            return parts[0].merged(parts[1]) if len(parts) == 2 else \
                cls(dim, np.vstack([m.dirs for m in parts]), np.concatenate([m.flags for m in parts]),
                    np.concatenate([m.depths for m in parts]), max(m.resolution for m in parts),
                    parts=parts)
        pts = obj["points"]
        return cls(dim, [p[0] for p in pts] or np.zeros((0, dim)), [p[1] for p in pts],
                   [p[2] for p in pts], obj["resolution"], obj.get("in_only", False))


# ---------------------------------------------------------------------------
# spherical sets

class SphericalSet:
    """Union of exact cells and (optionally) a sampled mask on S^{d-1}."""

    def __init__(self, dim: int, cells: Sequence[Cell] = (), mask: SampledMask | None = None,
                 closed: bool = True, notes: Sequence[str] = ()):
        self.dim = dim
        self.cells = [c for c in cells if not c.is_empty()]
        self.mask = mask
        self.closed = closed
        self.notes = list(notes)

    @classmethod
    def empty(cls, dim):
        return cls(dim)

    @classmethod
    def full(cls, dim, label="full"):
        return cls(dim, [Cell.make(dim, (), (), label)])

    @classmethod
    def points(cls, dim, vecs, labels=None):
        labels = labels or [""] * len(vecs)
        return cls(dim, [Cell.point(v, l) for v, l in zip(vecs, labels)])

    @classmethod
    def closed_arc(cls, a: Sequence[int], b: Sequence[int], label=""):
        """Closed arc of S^1 swept counterclockwise from a to b (less than pi)."""
        a, b = primitive(a), primitive(b)
        if a[0] * b[1] - a[1] * b[0] <= 0:
            raise ValueError("arc must turn counterclockwise by less than pi")
        # v = s a + t b with s, t >= 0
        ineqs = [((-a[1], a[0]), False), ((b[1], -b[0]), False)]
        return cls(2, [Cell.make(2, (), ineqs, label)])

    @property
    def mode(self) -> str:
        if self.mask is None:
            return "exact"
        return "sampled" if not self.cells else "mixed"

    def is_empty(self) -> bool:
        return not self.cells and (self.mask is None or not (self.mask.flags == 1).any())

    def contains(self, v) -> str:
        v = as_direction(v)
        if v.dim != self.dim:
            raise ValueError("dimension mismatch")
        if any(c.contains(v) for c in self.cells):
            return IN
        if self.mask is not None:
            return self.mask.query(v.unit)
        return OUT

    def contains_exact_cells(self, v) -> bool:
        return any(c.contains(v) for c in self.cells)

    def kinds(self) -> list[str]:
        return [c.kind for c in self.cells]

    def isolated_points(self) -> list[tuple]:
        out = []
        for c in self.cells:
            if c.kind == "point":
                out.append(c.interior_point())
        return out

    def simplified(self) -> "SphericalSet":
        """Drop exact cells contained in another cell (checked on generators and
        an interior point, which is exact for closed polyhedral cones)."""
        keep: list[Cell] = []
        cells = sorted(self.cells, key=lambda c: -c.cone_dim())
        for c in cells:
            probe = c.generators() + [c.interior_point()]
            if any(all(k.contains(p) for p in probe if p) for k in keep
                   if not any(s for _, s in k.ineqs)):
                continue
            keep.append(c)
        return SphericalSet(self.dim, keep, self.mask, self.closed, self.notes)

    def to_dict(self):
        return {"dim": self.dim, "mode": self.mode, "closed": self.closed,
                "cells": [c.to_dict() for c in self.cells],
                "mask": None if self.mask is None else self.mask.to_dict(),
                "notes": self.notes}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, obj):
        d = obj["dim"]
        mask = None if obj.get("mask") is None else SampledMask.from_dict(d, obj["mask"])
        return cls(d, [Cell.from_dict(d, c) for c in obj["cells"]], mask,
                   obj.get("closed", True), obj.get("notes", ()))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def describe(self) -> str:
        parts = []
        for c in self.cells:
            if self.dim == 2:
                parts.append(_describe_cell_2d(c))
            else:
                parts.append(f"{c.kind}[{c.label}]")
        if self.mask is not None:
            parts.append(f"sampled({int((self.mask.flags == 1).sum())}/{len(self.mask)} in, "
                         f"res {math.degrees(self.mask.resolution):.3g} deg)")
        return " U ".join(parts) if parts else "empty"

    def __repr__(self):
        return f"SphericalSet(dim={self.dim}, {self.describe()})"


def _describe_cell_2d(c: Cell) -> str:
    k = c.kind
    if k == "point":
        p = c.interior_point()
        return f"{{{math.degrees(math.atan2(p[1], p[0])) % 360:.6g} deg}}"
    if k == "full":
        return "S^1"
    rays = c.extreme_rays()
    angs = sorted(math.degrees(math.atan2(r[1], r[0])) % 360 for r in rays)
    if len(angs) == 2:
        a, b = angs
        ip = c.interior_point()
        m = math.degrees(math.atan2(ip[1], ip[0])) % 360
        if not a <= m <= b:
            a, b = b, a
        return f"[{a:.6g}, {b:.6g}] deg"
    return f"{k}[{c.label}]"


def sset_union(a: SphericalSet, b: SphericalSet) -> SphericalSet:
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    if a.mask is None:
        mask = b.mask
    elif b.mask is None:
        mask = a.mask
    else:
        mask = a.mask.merged(b.mask)
    return SphericalSet(a.dim, a.cells + b.cells, mask, a.closed and b.closed, a.notes + b.notes)


def sset_intersect(a: SphericalSet, b: SphericalSet) -> SphericalSet:
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    cells = [x.intersect(y) for x in a.cells for y in b.cells]
    mask = None

    def filtered(m: SampledMask, other: SphericalSet):
        flags = m.flags.copy()
        for i, u in enumerate(m.dirs):
            if flags[i] == 1:
                r = other.contains(Direction(tuple(float(x) for x in u)))
                flags[i] = 1 if r == IN else (-1 if r == UNDECIDED else 0)
        return SampledMask(m.dim, m.dirs, flags, m.depths, m.resolution, m.in_only)

    def filtered_all(m: SampledMask, other: SphericalSet):
        leaves = [filtered(x, other) for x in m.leaves()]
        out = leaves[0]
        for x in leaves[1:]:
            out = out.merged(x)
        return out

    if a.mask is not None:
        mask = filtered_all(a.mask, b)
    if b.mask is not None:
        mb = filtered_all(b.mask, a)
        mask = mb if mask is None else mask.merged(mb)
    return SphericalSet(a.dim, cells, mask, a.closed and b.closed, a.notes + b.notes)


def sset_contains(s: SphericalSet, v) -> str:
    return s.contains(v)


# ---------------------------------------------------------------------------
# sampling helpers

def circle_directions(n: int, offset: float = 0.0) -> np.ndarray:
    th = offset + 2 * math.pi * np.arange(n) / n
    return np.stack([np.cos(th), np.sin(th)], axis=1)


def fibonacci_sphere(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    phi = np.arccos(1 - 2 * i / n)
    th = math.pi * (1 + 5 ** 0.5) * i
    return np.stack([np.cos(th) * np.sin(phi), np.sin(th) * np.sin(phi), np.cos(phi)], axis=1)


def random_directions(n: int, d: int, rng) -> np.ndarray:
    x = rng.normal(size=(n, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def great_circle_points(normal: Sequence[int], step_deg: float = 1.0, scale: int = 10 ** 6) -> list[tuple]:
    """Integer vectors exactly on the great circle normal.v = 0, at roughly
    ``step_deg`` spacing (integer combinations of a lattice basis of the plane)."""
    normal = primitive(normal)
    basis = _plane_lattice_basis(normal)
    a, b = (np.array(x, float) for x in basis)
    # orthonormal frame for angle parameterisation
    e1 = a / np.linalg.norm(a)
    bb = b - (b @ e1) * e1
    e2 = bb / np.linalg.norm(bb)
    M = np.array([a, b]).T
    out = set()
    n = int(round(360 / step_deg))
    for k in range(n):
        th = 2 * math.pi * k / n
        target = math.cos(th) * e1 + math.sin(th) * e2
        coef, *_ = np.linalg.lstsq(M, target, rcond=None)
        s = scale / max(1e-300, np.abs(coef).max())
        ij = np.round(coef * s).astype(object)
        v = tuple(int(ij[0]) * x + int(ij[1]) * y for x, y in zip(basis[0], basis[1]))
        if any(v):
            out.add(primitive(v))
    return sorted(out)


def _plane_lattice_basis(normal) -> list[tuple]:
    # the last two columns of a unimodular column reduction span the kernel
    from .groebner import _column_reduce

    Q = _column_reduce([list(normal)], 3)
    return [tuple(Q[i][j] for i in range(3)) for j in (1, 2)]


def rational_approx(u: Sequence[float], scale: int = 1000) -> tuple:
    """Primitive integer vector close in angle to u (error about 1/scale)."""
    u = np.asarray(u, float)
    v = np.round(u / np.abs(u).max() * scale).astype(int)
    if not v.any():
        raise ValueError("cannot approximate the zero vector")
    return primitive(tuple(int(x) for x in v))


def adaptive_refine(test: Callable[[Direction], object], dim: int, budget: int = 20000,
                    seed_res_deg: float = 5.0, target_res_deg: float = 0.5,
                    scale: int = 1000) -> tuple[SphericalSet, bool]:
    """Sample ``test`` on the sphere, subdividing where neighbouring flags
    differ, until the angular target or the evaluation budget is reached.

    ``test`` returns True, False or None (undecided).  Returns the sampled set
    and whether the budget was exhausted.
    """
    def flag(x):
        return 1 if x is True else (0 if x is False else -1)

    evals = 0
    cache: dict = {}

    def ev(u, depth):
        nonlocal evals
        w = rational_approx(u, scale)
        if w not in cache:
            evals += 1
            cache[w] = (flag(test(Direction.from_ints(w))), depth)
        return cache[w][0]

    exhausted = False
    if dim == 1:
        for s in (1, -1):
            ev((s,), 0)
        dirs = [np.array(w, float) for w in cache]
        mask = SampledMask(1, dirs, [cache[w][0] for w in cache], [cache[w][1] for w in cache],
                           math.pi / 2)
        return SphericalSet(1, mask=mask), False
    if dim == 2:
        n0 = max(4, int(math.ceil(360 / seed_res_deg)))
        angles = [2 * math.pi * k / n0 for k in range(n0)]
        vals = {a: ev((math.cos(a), math.sin(a)), 0) for a in angles}
        depth = 0
        gap = 2 * math.pi / n0
        target = math.radians(target_res_deg)
        while gap > target and not exhausted:
            depth += 1
            srt = sorted(vals)
            new = {}
            for i, a in enumerate(srt):
                b = srt[(i + 1) % len(srt)]
                if vals[a] != vals[b] or vals[a] == -1:
                    m = a + ((b - a) % (2 * math.pi)) / 2
                    new[m] = ev((math.cos(m), math.sin(m)), depth)
                if evals >= budget:
                    exhausted = True
                    break
            vals.update(new)
            gap /= 2
        dirs, flags, depths = [], [], []
        for w, (f, dp) in cache.items():
            dirs.append(w)
            flags.append(f)
            depths.append(dp)
        mask = SampledMask(2, dirs, flags, depths, max(target, gap))
        return SphericalSet(2, mask=mask), exhausted
    # d >= 3: Fibonacci seed then local refinement around disagreeing neighbours
    n0 = int(4 * math.pi / math.radians(seed_res_deg) ** 2)
    pts = list(fibonacci_sphere(n0)) if dim == 3 else list(random_directions(n0, dim, np.random.default_rng(0)))
    flags = [ev(u, 0) for u in pts]
    res = math.radians(seed_res_deg)
    depth = 0
    target = math.radians(target_res_deg)
    from scipy.spatial import cKDTree

    while res > target and not exhausted:
        depth += 1
        P = np.array(pts)
        tree = cKDTree(P)
        F = np.array(flags)
        new = []
        for i, u in enumerate(P):
            nb = tree.query_ball_point(u, 2 * math.sin(res))
            if (F[nb] != F[i]).any() or F[i] == -1:
                for j in nb:
                    if j > i:
                        m = P[i] + P[j]
                        if np.linalg.norm(m) > 1e-9:
                            new.append(m / np.linalg.norm(m))
        if not new:
            break
        for u in new:
            pts.append(u)
            flags.append(ev(u, depth))
            if evals >= budget:
                exhausted = True
                break
        res /= 2
    mask = SampledMask(dim, list(cache), [cache[w][0] for w in cache],
                       [cache[w][1] for w in cache], max(res, target))
    return SphericalSet(dim, mask=mask), exhausted


# ---------------------------------------------------------------------------
# k-planes

@dataclass(frozen=True)
class KPlane:
    k: int
    basis: tuple              # integer vectors (rational) or orthonormal floats
    rational: bool

    @classmethod
    def from_ints(cls, vecs: Sequence[Sequence[int]]) -> "KPlane":
        vecs = tuple(tuple(int(x) for x in v) for v in vecs)
        if vecs and _rank(vecs) != len(vecs):
            raise ValueError("basis vectors are dependent")
        return cls(len(vecs), vecs, True)

    @classmethod
    def from_floats(cls, vecs) -> "KPlane":
        M = np.array(vecs, float)
        if len(M) and np.linalg.matrix_rank(M) != len(M):
            raise ValueError("basis vectors are dependent")
        Q, _ = np.linalg.qr(M.T)
        return cls(len(M), tuple(tuple(float(x) for x in q) for q in Q.T), False)

    @property
    def dim(self) -> int:
        return len(self.basis[0]) if self.basis else 0

    def orthonormal(self) -> np.ndarray:
        if not self.basis:
            return np.zeros((0, 0))
        Q, _ = np.linalg.qr(np.array(self.basis, float).T)
        return Q.T

    def complement(self, d: int | None = None) -> np.ndarray:
        """Orthonormal basis of the orthogonal complement (rows)."""
        d = d or self.dim
        if self.k == 0:
            return np.eye(d)
        B = self.orthonormal()
        _, _, Vt = np.linalg.svd(B, full_matrices=True)
        return Vt[self.k:]

    def contains_vector(self, x, tol=1e-9) -> bool:
        x = np.asarray(x, float)
        B = self.orthonormal()
        return np.linalg.norm(x - B.T @ (B @ x)) <= tol * max(1.0, np.linalg.norm(x))
