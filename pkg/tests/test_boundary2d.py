import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from approxcount import oracle
from approxcount.boundary2d import BoundarySet, build_boundary
from approxcount.rankspace import PointSet
from conftest import clustered_grid, grid_queries, random_grid


@pytest.mark.parametrize("n,seed", [(1, 0), (2, 0), (3, 1), (17, 2), (64, 3), (200, 4)])
def test_every_level_is_a_boundary(n, seed):
    s = random_grid(n, 2, seed)
    bs = BoundarySet(s)
    for j, b in enumerate(bs.boundaries):
        t = 2 ** j
        assert b.t == t
        assert oracle.verify_boundary(s, b, t, 2)
        assert b.degenerate == (t > n)
        if not b.degenerate:
            assert oracle.boundary_covers(s, b, t)


def test_clustered_input():
    s = clustered_grid(300, 2, 5)
    for j, b in enumerate(BoundarySet(s).boundaries):
        assert oracle.verify_boundary(s, b, 2 ** j, 2)


def test_alpha_three():
    s = random_grid(150, 2, 6)
    bs = BoundarySet(s, alpha=3)
    for j, b in enumerate(bs.boundaries):
        assert oracle.verify_boundary(s, b, 3 ** j, 3)
        assert b.degenerate or oracle.boundary_covers(s, b, 3 ** j)


@settings(deadline=None, max_examples=50)
@given(st.integers(1, 80), st.integers(0, 10 ** 6))
def test_index_matches_naive_and_sandwich(n, seed):
    s = random_grid(n, 2, seed)
    bs = BoundarySet(s)
    for q in grid_queries(n, 2, 60, seed).tolist():
        hit = bs.min_dominated_index(q)
        clipped = (min(q[0], n), min(q[1], n))
        naive = bs.min_dominated_index_naive(clipped) if min(q) >= 1 else None
        assert (hit is None) == (naive is None)
        if hit is None:
            continue
        j, corner = hit
        assert j == naive[0]
        assert corner[0] <= clipped[0] and corner[1] <= clipped[1]
        assert corner in [tuple(c) for c in bs.boundaries[j].corners.tolist()]
        k = oracle.dominators(s, q)
        if j >= 1:
            assert 2 ** (j - 1) <= k <= 2 ** (j + 1)
        else:
            assert k <= 2


def test_top_corner_gives_level_zero():
    s = random_grid(100, 2, 7)
    assert BoundarySet(s).min_dominated_index((100, 100))[0] == 0


def test_staircase_shape():
    s = random_grid(500, 2, 8)
    for b in BoundarySet(s).boundaries:
        if b.degenerate:
            continue
        c = b.corners
        assert np.all(np.diff(c[:, 0]) > 0) and np.all(np.diff(c[:, 1]) < 0)
        assert c.min() >= 1 and c.max() <= 500


def test_degenerate_above_n():
    s = random_grid(5, 2, 9)
    assert build_boundary(s, 6).degenerate
    assert not build_boundary(s, 5).degenerate


def test_bad_parameters():
    s = random_grid(5, 2, 9)
    with pytest.raises(ValueError):
        build_boundary(s, 0)
    with pytest.raises(ValueError):
        build_boundary(s, 2, alpha=1)
    with pytest.raises(ValueError):
        BoundarySet(random_grid(5, 3, 0))


def test_empty_set():
    bs = BoundarySet(PointSet.empty(2))
    assert len(bs) == 0 and bs.min_dominated_index((1, 1)) is None


def test_pred():
    s = random_grid(50, 2, 10)
    b = build_boundary(s, 4)
    x0 = int(b.corners[0, 0])
    assert b.pred(x0 - 1) is None
    assert b.pred(x0) == tuple(b.corners[0].tolist())


def test_dump_format():
    s = random_grid(8, 2, 11)
    bs = BoundarySet(s)
    buf = io.StringIO()
    bs.dump(buf)
    blocks = buf.getvalue().strip("\n").split("\n\n")
    assert len(blocks) == len(bs)
    head = blocks[0].splitlines()
    assert head[0] == "0 1" and len(head) == 1 + len(bs.boundaries[0].corners)
