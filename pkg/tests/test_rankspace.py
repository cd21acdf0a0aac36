import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from approxcount import oracle
from approxcount.rankspace import (
    PointSet,
    map_interval,
    map_point,
    map_query,
    read_points,
    reduce_to_rank_space,
    reflect,
    reflect_point,
    write_points,
)


def test_order_isomorphism_1d():
    s, m = reduce_to_rank_space([(10,), (30,), (20,)])
    assert s.points[:, 0].tolist() == [1, 3, 2]
    assert m.axes[0].tolist() == [10, 20, 30]


def test_permutation_input_is_identity():
    raw = np.array([[3, 1], [1, 2], [2, 3]])
    s, _ = reduce_to_rank_space(raw)
    assert np.array_equal(s.points, raw)


def test_empty_input_gives_empty_set():
    s, m = reduce_to_rank_space([], dim=2)
    assert s.n == 0 and s.dim == 2 and m.n == 0


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        reduce_to_rank_space([(1, 2)], dim=3)


def test_duplicates_break_ties_by_input_order():
    s, _ = reduce_to_rank_space([(5, 5), (5, 5), (1, 5)])
    assert s.is_permutation_grid()
    assert s.points[:, 0].tolist() == [2, 3, 1]
    assert s.points[:, 1].tolist() == [1, 2, 3]


def test_map_query_examples():
    _, m = reduce_to_rank_space([(10,), (20,), (30,)])
    assert map_query([(15, 25)], m) == [(2, 2)]
    assert map_query([(5, 9)], m) == [(1, 0)]
    assert map_query([(25, 15)], m) == [(1, 0)]
    assert map_interval(10, 30, m.axes[0]) == (1, 3)


def test_map_query_rejects_wrong_arity():
    _, m = reduce_to_rank_space([(1, 2)])
    with pytest.raises(ValueError):
        map_query([(0, 1)], m)


def test_reflect_example():
    s = PointSet(2, [[1, 3], [2, 1], [3, 4], [4, 2]])
    r = reflect(s, (True, True))
    assert r.points[0].tolist() == [4, 2]
    assert reflect(s, (False, False)) == s


@settings(deadline=None, max_examples=60)
@given(
    st.lists(st.tuples(st.integers(-50, 50), st.integers(-50, 50)), min_size=1, max_size=40),
    st.lists(st.tuples(st.integers(-60, 60), st.integers(-60, 60), st.integers(-60, 60), st.integers(-60, 60)),
             min_size=1, max_size=20),
)
def test_counts_survive_reduction(raw, rects):
    s, m = reduce_to_rank_space(raw)
    assert s.is_permutation_grid()
    for a, b, c, d in rects:
        rect = [(a, b), (c, d)]
        assert oracle.exact_count(np.array(raw), rect) == oracle.exact_count(s, map_query(rect, m))


def test_counts_survive_reduction_seeded():
    rng = np.random.default_rng(7)
    raw = rng.integers(0, 1000, size=(64, 2))
    s, m = reduce_to_rank_space(raw)
    for _ in range(200):
        lo = rng.integers(-10, 1010, size=2)
        hi = lo + rng.integers(-5, 600, size=2)
        rect = list(zip(lo.tolist(), hi.tolist()))
        assert oracle.exact_count(raw, rect) == oracle.exact_count(s, map_query(rect, m))


@settings(deadline=None, max_examples=40)
@given(st.integers(1, 30), st.integers(0, 10 ** 6), st.lists(st.booleans(), min_size=3, max_size=3))
def test_reflect_involution_and_counts(n, seed, flip):
    rng = np.random.default_rng(seed)
    s = PointSet(3, np.column_stack([rng.permutation(n) + 1 for _ in range(3)]))
    r = reflect(s, flip)
    assert reflect(r, flip) == s
    full = reflect(s, (True, True, True))
    for q in rng.integers(0, n + 2, size=(20, 3)).tolist():
        assert oracle.dominators(s, q) == oracle.dominated(full, reflect_point(q, n, (True, True, True)))


def test_map_point_preserves_dominance():
    rng = np.random.default_rng(3)
    raw = rng.integers(0, 50, size=(40, 2))
    s, m = reduce_to_rank_space(raw)
    for q in rng.integers(-5, 55, size=(100, 2)).tolist():
        assert oracle.dominators(raw, q) == oracle.dominators(s, map_point(q, m))
        assert oracle.dominated(raw, q) == oracle.dominated(s, map_point(q, m, upper=True))


def test_point_file_roundtrip(tmp_path):
    path = tmp_path / "pts.txt"
    rows = [(3, -1), (0, 7), (12, 12)]
    write_points(path, 2, rows)
    assert read_points(path) == (2, rows)
    path.write_text("# comment\n2 1\n4 5  # trailing\n")
    assert read_points(path) == (2, [(4, 5)])
    path.write_text("2 2\n1 1\n")
    with pytest.raises(ValueError):
        read_points(path)
