import numpy as np
import pytest

from approxcount.rankspace import PointSet, reduce_to_rank_space


def random_grid(n, dim, seed):
    """Permutation grid with ``n`` points, one random permutation per axis."""
    rng = np.random.default_rng(seed)
    if n == 0:
        return PointSet.empty(dim)
    return PointSet(dim, np.column_stack([rng.permutation(n) + 1 for _ in range(dim)]))


def clustered_grid(n, dim, seed):
    rng = np.random.default_rng(seed)
    centers = rng.integers(0, 1 << 20, size=(4, dim))
    raw = centers[rng.integers(0, 4, size=n)] + rng.integers(-500, 500, size=(n, dim))
    return reduce_to_rank_space(raw)[0]


def grid_queries(n, dim, count, seed):
    rng = np.random.default_rng(seed)
    return rng.integers(0, n + 2, size=(count, dim))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def displace_corner(s, boundary, seed):
    """Push one inward corner up past points until fewer than ``t`` dominate it."""
    from approxcount.boundary2d import StaircaseBoundary

    rng = np.random.default_rng(seed)
    c = boundary.corners.copy()
    i = int(rng.integers(len(c)))
    x, y = c[i]
    pts = s.points
    while y <= s.n and np.count_nonzero((pts[:, 0] >= x) & (pts[:, 1] >= y)) >= boundary.t:
        y += 1
    c[i, 1] = y
    return StaircaseBoundary(boundary.t, boundary.alpha, c)


def essential_apexes(s, level):
    """Apexes that alone cover some grid point with at most ``t`` dominated points.

    Brute force over the whole grid with explicit loops over apexes; kept
    separate from the verifier under test.
    """
    n = s.n
    g = np.stack(np.meshgrid(*[np.arange(1, n + 1)] * 3, indexing="ij"), axis=-1).reshape(-1, 3)
    below = np.array([np.count_nonzero(np.all(s.points <= p, axis=1)) for p in g])
    low = g[below <= level.t]
    hits = np.zeros(len(low), dtype=np.int64)
    owner = np.full(len(low), -1)
    for i, a in enumerate(level.apexes):
        cov = np.all(low <= a, axis=1)
        hits += cov
        owner[cov] = i
    return sorted(set(owner[hits == 1].tolist()))
