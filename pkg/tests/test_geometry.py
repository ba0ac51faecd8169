import math

import numpy as np
import pytest

from expsub.geometry import (IN, OUT, Cell, KPlane, SampledMask, SphericalSet, adaptive_refine,
                             circle_directions, convex_hull, fibonacci_sphere, sset_contains,
                             sset_intersect, sset_union, spherical_dual)
from expsub.laurent import Direction, exposed_vertex, parse_poly


def at(deg):
    t = math.radians(deg)
    return Direction.from_vector((math.cos(t), math.sin(t)))


def test_hull_triangle():
    h = convex_hull([(0, 0), (1, 0), (0, 1)])
    assert sorted(h.vertices) == [(0, 0), (0, 1), (1, 0)]
    assert h.edge_normal_directions() == [(-1, 0), (0, -1), (1, 1)]


def test_hull_square_and_interior_point():
    f = parse_poly("5 + u + u^-1 + v + v^-1", ("u", "v"))
    h = convex_hull(f.terms)
    assert sorted(h.vertices) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert len(h.edges) == 4


def test_hull_tetrahedron():
    h = convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert len(h.vertices) == 4 and len(h.edges) == 6 and len(h.facets) == 4


def test_hull_idempotent():
    rng = np.random.default_rng(1)
    for d in (2, 3):
        pts = [tuple(int(x) for x in rng.integers(-3, 4, size=d)) for _ in range(15)]
        h = convex_hull(pts)
        assert convex_hull(h.vertices).vertices == h.vertices


def test_dual_of_simplex_points():
    s = spherical_dual(convex_hull([(0, 0), (1, 0), (0, 1)]))
    pts = sorted(tuple(c.extreme_rays()[0]) for c in s.cells if c.kind == "point")
    assert pts == [(-1, 0), (0, -1), (1, 1)]
    assert sum(c.kind == "arc" for c in s.cells) == 3


def test_dual_of_square():
    s = spherical_dual(convex_hull([(1, 0), (-1, 0), (0, 1), (0, -1)]))
    assert sum(c.kind == "point" for c in s.cells) == 4
    assert sum(c.kind == "arc" for c in s.cells) == 4


def test_dual_of_tetrahedron_skeleton():
    s = spherical_dual(convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]))
    assert sum(c.kind == "arc" for c in s.cells) == 6


def test_dual_partition_and_labels():
    f = parse_poly("1 + u + v + u*v^2", ("u", "v"))
    h = convex_hull(f.terms)
    s = spherical_dual(h)
    for th in np.random.default_rng(2).uniform(0, 2 * math.pi, 200):
        v = Direction.from_vector((math.cos(th), math.sin(th)))
        hits = [c for c in s.cells if c.contains(v.unit)]
        assert len(hits) == 1
        c = hits[0]
        if c.label.startswith("vertex:"):
            assert exposed_vertex(f, v) in h.vertices
            assert c.label == "vertex:" + ",".join(map(str, exposed_vertex(f, v))).join("()")


def test_quarter_circle_intersection():
    left = SphericalSet(2, [Cell.make(2, (), [((-1, 0), False)])])     # v.e1 <= 0
    down = SphericalSet(2, [Cell.make(2, (), [((0, -1), False)])])     # v.e2 <= 0
    q = sset_intersect(left, down)
    assert q.contains(at(225)) == IN and q.contains(at(180)) == IN and q.contains(at(270)) == IN
    assert q.contains(at(179)) == OUT and q.contains(at(271)) == OUT and q.contains(at(45)) == OUT


def test_union_examples():
    arc = SphericalSet.closed_arc((-1, 0), (0, -1))
    pt = SphericalSet.points(2, [(1, 1)])
    u = sset_union(arc, pt)
    assert len(u.cells) == 2
    assert u.contains(at(45)) == IN and u.contains(at(200)) == IN and u.contains(at(100)) == OUT
    assert sset_union(arc, SphericalSet.empty(2)).contains(at(200)) == IN


def test_contains_ledrappier_and_empty():
    n = SphericalSet.points(2, [(1, 1), (-1, 0), (0, -1)])
    assert sset_contains(n, at(90)) == OUT
    assert sset_contains(n, at(180)) == IN
    assert sset_contains(SphericalSet.empty(2), at(12)) == OUT


def test_union_law_random_masks():
    rng = np.random.default_rng(3)
    for _ in range(5):
        a = SphericalSet(2, mask=SampledMask(2, circle_directions(90), rng.integers(0, 2, 90),
                                             None, math.radians(4)))
        b = SphericalSet.closed_arc((1, 0), (0, 1))
        u = sset_union(a, b)
        for th in rng.uniform(0, 2 * math.pi, 100):
            v = Direction.from_vector((math.cos(th), math.sin(th)))
            assert (u.contains(v) == IN) == (a.contains(v) == IN or b.contains(v) == IN)


def test_adaptive_refine_constants():
    s, _ = adaptive_refine(lambda v: False, 2)
    assert s.contains(at(10)) == OUT
    s, _ = adaptive_refine(lambda v: True, 2)
    assert all(s.contains(at(d)) == IN for d in range(0, 360, 7))


def test_adaptive_refine_upper_hemisphere():
    s, exhausted = adaptive_refine(lambda v: v.unit[1] >= 0, 2, target_res_deg=0.5)
    assert not exhausted
    for deg in np.arange(1.0, 179.5, 0.5):
        assert s.contains(at(deg)) == IN
    for deg in np.arange(181.0, 359.5, 0.5):
        assert s.contains(at(deg)) == OUT


def test_serialization_roundtrip():
    rng = np.random.default_rng(4)
    sets = [SphericalSet.points(2, [(1, 1), (-1, 0)]),
            sset_union(SphericalSet.closed_arc((-1, 0), (0, -1)),
                       SphericalSet(2, mask=SampledMask(2, circle_directions(72), rng.integers(0, 2, 72),
                                                        None, math.radians(5))))]
    U = fibonacci_sphere(200)
    sets.append(SphericalSet(3, mask=SampledMask(3, U, (U[:, 2] > 0).astype(int), None, math.radians(8))))
    for s in sets:
        t = SphericalSet.from_json(s.to_json())
        for _ in range(1000):
            v = rng.normal(size=s.dim)
            d = Direction.from_vector(tuple(v / np.linalg.norm(v)))
            assert s.contains(d) == t.contains(d)


def test_kplane_basics():
    V = KPlane.from_ints([(1, 1, 0), (0, 0, 1)])
    assert V.k == 2 and V.rational
    assert V.contains_vector((2, 2, 5)) and not V.contains_vector((1, 0, 0))
    B = V.complement()
    assert B.shape == (1, 3) and abs(abs(B[0] @ np.array([1, -1, 0])) - math.sqrt(2)) < 1e-9


def test_cell_rejects_bad_dimension():
    with pytest.raises(ValueError):
        SphericalSet.closed_arc((0, -1), (-1, 0))
