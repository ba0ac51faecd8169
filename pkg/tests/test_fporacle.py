import math

import numpy as np
import pytest

from expsub.fporacle import (FpSystem, WindowProblem, box, codes, direction_expansive_empirical,
                             kernel_basis)
from expsub.groebner import Ideal
from expsub.laurent import Direction, parse_poly

LED = FpSystem(2, 2, [parse_poly("1 + u + v", None, 2)])


def test_kernel_dimensions():
    # a 2x2 box holds one translate of the triangle: 4 sites, 1 relation
    assert kernel_basis(LED, box((0, 0), (1, 1)))[0].shape[0] == 3
    # a 1x3 column holds none
    assert kernel_basis(LED, box((0, 0), (0, 2)))[0].shape[0] == 3
    # a unit relation kills everything
    unit = FpSystem(3, 1, [parse_poly("1", None, 1)])
    assert kernel_basis(unit, box((0,), (4,)))[0].shape[0] == 0
    seg = FpSystem(2, 1, [parse_poly("1 + u", None, 1)])
    assert kernel_basis(seg, box((0,), (4,)))[0].shape[0] == 1


def test_kernel_vectors_satisfy_relations():
    basis, sites = kernel_basis(LED, box((0, 0), (3, 3)))
    idx = {s: i for i, s in enumerate(sites)}
    for x in basis:
        for i in range(3):
            for j in range(3):
                assert (x[idx[(i, j)]] + x[idx[(i + 1, j)]] + x[idx[(i, j + 1)]]) % 2 == 0


def test_triangle_coding():
    for w in range(1, 9):
        tri = [(i, j) for i in range(w + 1) for j in range(w + 1 - i)]
        left = [(0, j) for j in range(w + 1)]
        bottom = [(i, 0) for i in range(w + 1)]
        assert codes(LED, WindowProblem(tri, left, tri))
        assert codes(LED, WindowProblem(tri, bottom, tri))


def test_column_does_not_code_neighbour():
    win = box((0, 0), (1, 4))
    col = [(0, j) for j in range(5)]
    nxt = [(1, j) for j in range(5)]
    assert not codes(LED, WindowProblem(win, col, nxt))


def test_full_known_set_codes_everything():
    win = box((0, 0), (3, 3))
    assert codes(LED, WindowProblem(win, win, win))


def test_coding_is_monotone_and_translation_invariant():
    win = box((0, 0), (4, 4))
    E = [(0, j) for j in range(5)]
    F = [(1, j) for j in range(4)]
    base = codes(LED, WindowProblem(win, E, F))
    assert base
    assert codes(LED, WindowProblem(win, E + [(2, 2)], F))
    sh = lambda S: [(a + 7, b - 3) for a, b in S]
    assert codes(LED, WindowProblem(sh(win), sh(E), sh(F))) == base


def test_problem_validation():
    with pytest.raises(ValueError):
        WindowProblem(box((0, 0), (1, 1)), [(5, 5)], [])


def test_direction_examples_2d():
    assert direction_expansive_empirical(LED, Direction.from_angle(math.pi / 2)).expansive
    assert not direction_expansive_empirical(LED, Direction.from_angle(math.pi)).expansive
    assert not direction_expansive_empirical(LED, Direction.from_ints((1, 1))).expansive
    assert direction_expansive_empirical(LED, Direction.from_angle(math.radians(100))).expansive


def test_direction_examples_3d():
    sys3 = FpSystem(2, 3, [parse_poly("1 + u + v + w", None, 3)])
    # N is the union of great arcs joining the normal rays (1,1,1), -e1, -e2, -e3
    r1 = np.ones(3) / math.sqrt(3)
    E = np.eye(3)
    mids = [r1 - E[0], -E[1] - E[2]]
    cents = [-r1, r1 - E[1] - E[2]]
    for m in mids:
        assert not direction_expansive_empirical(sys3, Direction.from_vector(tuple(m))).expansive
    for c in cents:
        assert direction_expansive_empirical(sys3, Direction.from_vector(tuple(c))).expansive


def test_from_ideal_and_validation():
    s = FpSystem.from_ideal(Ideal([parse_poly("2", None, 2), parse_poly("1 + u + v", None, 2)]))
    assert s.p == 2 and len(s.relations) == 1
    with pytest.raises(ValueError):
        FpSystem(4, 2, [parse_poly("1 + u", None, 2)])
    with pytest.raises(ValueError):
        FpSystem(257, 2, [parse_poly("1 + u", None, 2)])
    with pytest.raises(ValueError):
        FpSystem(2, 2, [parse_poly("2 + 4*u", None, 2)])
    with pytest.raises(ValueError):
        FpSystem.from_ideal(Ideal([parse_poly("1 + u + v", None, 2)]))
