"""Brute-force reference counts and structural verifiers.

Everything here is a linear scan on purpose: these functions are the ground
truth the fast structures are checked against.
"""

from __future__ import annotations

import numpy as np

from .rankspace import PointSet

_CHUNK = 1 << 20


def _as_array(s):
    return s.points if isinstance(s, PointSet) else np.asarray(s, dtype=np.int64)


def exact_count(s, rect) -> int:
    """Number of points inside the closed box ``rect = [(lo, hi), ...]``."""
    pts = _as_array(s)
    if any(lo > hi for lo, hi in rect):
        return 0
    lo = np.array([r[0] for r in rect])
    hi = np.array([r[1] for r in rect])
    return int(np.count_nonzero(np.all((pts >= lo) & (pts <= hi), axis=1)))


def dominators(s, q) -> int:
    """Points ``p`` with ``p >= q`` componentwise."""
    pts = _as_array(s)
    return int(np.count_nonzero(np.all(pts >= np.asarray(q), axis=1)))


def dominated(s, q) -> int:
    """Points ``p`` with ``p <= q`` componentwise."""
    pts = _as_array(s)
    return int(np.count_nonzero(np.all(pts <= np.asarray(q), axis=1)))


def dominators_many(s, queries) -> np.ndarray:
    pts = _as_array(s)
    qs = np.asarray(queries, dtype=np.int64).reshape(-1, pts.shape[1])
    out = np.empty(len(qs), dtype=np.int64)
    step = max(1, _CHUNK // max(1, len(pts)))
    for i in range(0, len(qs), step):
        block = qs[i:i + step]
        out[i:i + step] = np.all(pts[None, :, :] >= block[:, None, :], axis=2).sum(axis=1)
    return out


def dominated_many(s, queries) -> np.ndarray:
    pts = _as_array(s)
    qs = np.asarray(queries, dtype=np.int64).reshape(-1, pts.shape[1])
    out = np.empty(len(qs), dtype=np.int64)
    step = max(1, _CHUNK // max(1, len(pts)))
    for i in range(0, len(qs), step):
        block = qs[i:i + step]
        out[i:i + step] = np.all(pts[None, :, :] <= block[:, None, :], axis=2).sum(axis=1)
    return out


def outward_corners(corners: np.ndarray) -> np.ndarray:
    """Outer staircase vertices between consecutive inward corners (sorted by x)."""
    if len(corners) < 2:
        return np.zeros((0, 2), dtype=np.int64)
    return np.column_stack([corners[1:, 0], corners[:-1, 1]])


def verify_boundary(s, b, t: int, alpha: int) -> bool:
    """Check a staircase: every inward and outward corner has ``t..alpha*t`` dominators.

    Counts are antitone, so along each segment the extremes sit at its two
    end corners; checking corners bounds the whole polyline.
    """
    if b.degenerate:
        return t > len(_as_array(s))
    c = np.asarray(b.corners, dtype=np.int64).reshape(-1, 2)
    if len(c) == 0:
        return False
    if np.any(np.diff(c[:, 0]) <= 0) or np.any(np.diff(c[:, 1]) >= 0):
        return False
    probe = np.vstack([c, outward_corners(c)])
    counts = dominators_many(s, probe)
    return bool(np.all((counts >= t) & (counts <= alpha * t)))


def boundary_covers(s, b, t: int) -> bool:
    """Every grid point with at most ``t`` dominators dominates some corner.

    Exhaustive over the ``n x n`` grid; meant for small ``n``.
    """
    pts = _as_array(s)
    n = len(pts)
    if n == 0:
        return True
    grid = np.zeros((n + 2, n + 2), dtype=np.int64)
    np.add.at(grid, (pts[:, 0], pts[:, 1]), 1)
    dom = grid[::-1, ::-1].cumsum(0).cumsum(1)[::-1, ::-1]
    cover = np.zeros((n + 2, n + 2), dtype=bool)
    if not b.degenerate:
        c = np.asarray(b.corners)
        cover[np.clip(c[:, 0], 0, n + 1), np.clip(c[:, 1], 0, n + 1)] = True
    cover = np.maximum.accumulate(np.maximum.accumulate(cover, axis=0), axis=1)
    need = dom[1:n + 1, 1:n + 1] <= t
    return bool(np.all(cover[1:n + 1, 1:n + 1] | ~need))


def _dominated_grid(pts: np.ndarray, n: int) -> np.ndarray:
    grid = np.zeros((n + 1, n + 1, n + 1), dtype=np.int32)
    np.add.at(grid, (pts[:, 0], pts[:, 1], pts[:, 2]), 1)
    return grid.cumsum(0).cumsum(1).cumsum(2)


def _covered(apexes: np.ndarray, sample: np.ndarray) -> np.ndarray:
    if len(apexes) == 0:
        return np.zeros(len(sample), dtype=bool)
    out = np.empty(len(sample), dtype=bool)
    step = max(1, _CHUNK // len(apexes))
    for i in range(0, len(sample), step):
        g = sample[i:i + step]
        out[i:i + step] = np.all(apexes[None, :, :] >= g[:, None, :], axis=2).any(axis=1)
    return out


def level_frontier(pts: np.ndarray, n: int, t: int, columns: np.ndarray, axis: int = 2) -> np.ndarray:
    """Highest point along ``axis`` over each column with at most ``t`` dominated points.

    ``columns`` holds the two remaining coordinates.  Columns whose frontier
    falls below the grid are dropped.
    """
    others = [a for a in range(3) if a != axis]
    out = []
    for u, v in columns:
        mask = (pts[:, others[0]] <= u) & (pts[:, others[1]] <= v)
        zs = np.sort(pts[mask, axis])
        top = n if len(zs) <= t else int(zs[t]) - 1
        if top >= 1:
            g = [0, 0, 0]
            g[others[0]], g[others[1]], g[axis] = int(u), int(v), top
            out.append(g)
    return np.array(out, dtype=np.int64).reshape(-1, 3)


def verify_level(s, level, t: int, alpha: int, samples: int = 2000, extra=None, seed: int = 0) -> bool:
    """Check the two defining properties of an approximate ``t``-level.

    (a) every apex has at most ``alpha * t`` dominated points;
    (b) every grid point with at most ``t`` dominated points lies below an apex.
    (b) is exhaustive for ``n <= 64``; otherwise it probes random points plus
    the low-count frontier of random columns along each axis, plus the
    frontier just past each apex's projections, where a gap is most likely.
    """
    pts = _as_array(s)
    n = len(pts)
    apexes = np.asarray(level.apexes, dtype=np.int64).reshape(-1, 3)
    if n == 0:
        return True
    if np.any(dominated_many(pts, apexes) > alpha * t):
        return False
    if n <= 64:
        low = _dominated_grid(pts, n)[1:, 1:, 1:] <= t
        mark = np.zeros((n + 2, n + 2, n + 2), dtype=bool)
        if len(apexes):
            a = np.clip(apexes, 0, n + 1)
            mark[a[:, 0], a[:, 1], a[:, 2]] = True
        for ax in range(3):
            mark = np.flip(np.maximum.accumulate(np.flip(mark, ax), axis=ax), ax)
        ok = bool(np.all(mark[1:n + 1, 1:n + 1, 1:n + 1] | ~low))
        if not ok or extra is None:
            return ok
    rng = np.random.default_rng(seed)
    parts = [rng.integers(1, n + 1, size=(samples, 3))]
    for ax in range(3):
        cols = rng.integers(1, n + 1, size=(samples // 3 + 1, 2))
        parts.append(level_frontier(pts, n, t, cols, axis=ax))
    if len(apexes):
        pick = apexes[rng.permutation(len(apexes))[:samples]]
        for ax in range(3):
            others = [a for a in range(3) if a != ax]
            uv = pick[:, others]
            cols = np.vstack([uv, uv + [1, 0], uv + [0, 1]])
            cols = cols[np.all((cols >= 1) & (cols <= n), axis=1)]
            parts.append(level_frontier(pts, n, t, cols, axis=ax))
    if extra is not None:
        parts.append(np.asarray(extra, dtype=np.int64).reshape(-1, 3))
    sample = np.vstack(parts)
    need = dominated_many(pts, sample) <= t
    return bool(np.all(_covered(apexes, sample[need])))
