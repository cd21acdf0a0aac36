"""Rank-space reduction, query snapping and grid reflections.

Every static structure in this package works on a permutation grid: ``n``
points in ``d`` dimensions whose coordinates along each axis are exactly
``1..n``.  Coordinates ``0`` and ``n + 1`` are sentinels meaning "below
everything" / "above everything".
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class PointSet:
    """Points of a ``dim``-dimensional rank-space grid, shape ``(n, dim)``."""

    dim: int
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.int64).reshape(-1, self.dim)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return (
            isinstance(other, PointSet)
            and self.dim == other.dim
            and np.array_equal(self.points, other.points)
        )

    @classmethod
    def empty(cls, dim: int) -> "PointSet":
        return cls(dim, np.zeros((0, dim), dtype=np.int64))

    def is_permutation_grid(self) -> bool:
        expected = np.arange(1, self.n + 1)
        return all(
            np.array_equal(np.sort(self.points[:, i]), expected)
            for i in range(self.dim)
        )


@dataclass(frozen=True, eq=False)
class RankMap:
    """Per-axis sorted original coordinates; rank ``r`` maps to ``axes[i][r-1]``."""

    axes: tuple

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def n(self) -> int:
        return len(self.axes[0]) if self.axes else 0

    def to_universe(self, ranks: Sequence[int]) -> tuple:
        return tuple(int(self.axes[i][r - 1]) for i, r in enumerate(ranks))


def reduce_to_rank_space(raw: Iterable[Sequence[int]], dim: int | None = None):
    """Map raw integer points to a permutation grid.

    Equal coordinates are made distinct by input order (stable sort), which
    keeps every axis-aligned range count unchanged.  Returns
    ``(PointSet, RankMap)``; an empty input yields an empty point set.
    """
    arr = np.asarray(list(raw) if not isinstance(raw, np.ndarray) else raw, dtype=np.int64)
    if arr.size == 0:
        d = dim if dim is not None else (arr.shape[1] if arr.ndim == 2 else 1)
        return PointSet.empty(d), RankMap(tuple(np.zeros(0, dtype=np.int64) for _ in range(d)))
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(f"expected {dim}-dimensional points, got {arr.shape[1]}")
    n, d = arr.shape
    ranks = np.empty_like(arr)
    axes = []
    for i in range(d):
        order = np.argsort(arr[:, i], kind="stable")
        ranks[order, i] = np.arange(1, n + 1)
        axes.append(arr[order, i].copy())
    return PointSet(d, ranks), RankMap(tuple(axes))


def map_interval(lo: int, hi: int, axis: np.ndarray) -> tuple[int, int]:
    """Snap a closed universe interval to the closed rank interval it covers.

    An empty result is returned as ``(1, 0)``.
    """
    if lo > hi:
        return 1, 0
    r_lo = bisect_left(axis, lo) + 1
    r_hi = bisect_right(axis, hi)
    if r_lo > r_hi:
        return 1, 0
    return r_lo, r_hi


def map_query(rect: Sequence[tuple[int, int]], m: RankMap) -> list[tuple[int, int]]:
    """Snap a box given as closed ``(lo, hi)`` per axis into grid units.

    If any axis is empty the whole box collapses to ``[(1, 0)] * d``.
    """
    if len(rect) != m.dim:
        raise ValueError(f"query has {len(rect)} axes, rank map has {m.dim}")
    out = [map_interval(lo, hi, axis) for (lo, hi), axis in zip(rect, m.axes)]
    if any(lo > hi for lo, hi in out):
        return [(1, 0)] * m.dim
    return out


def map_point(q: Sequence[int], m: RankMap, upper: bool = False) -> tuple:
    """Snap a dominance corner: ``p >= q`` (or ``p <= q`` if ``upper``) is preserved."""
    if upper:
        return tuple(bisect_right(axis, v) for v, axis in zip(q, m.axes))
    return tuple(bisect_left(axis, v) + 1 for v, axis in zip(q, m.axes))


def reflect(s: PointSet, flip: Sequence[bool]) -> PointSet:
    """Mirror the flagged axes, ``x -> n + 1 - x``.  Involutive."""
    if len(flip) != s.dim:
        raise ValueError("orientation arity must equal the dimension")
    pts = s.points.copy()
    for i, f in enumerate(flip):
        if f:
            pts[:, i] = s.n + 1 - pts[:, i]
    return PointSet(s.dim, pts)


def reflect_point(q: Sequence[int], n: int, flip: Sequence[bool]) -> tuple:
    return tuple(n + 1 - v if f else v for v, f in zip(q, flip))


def read_points(path) -> tuple[int, list[tuple]]:
    """Read the line-oriented point file: header ``d n``, then one point per line."""
    rows = []
    header = None
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            vals = tuple(int(v) for v in line.split())
            if header is None:
                header = vals
                if len(header) != 2:
                    raise ValueError("header must be 'd n'")
                continue
            if len(vals) != header[0]:
                raise ValueError(f"point {vals} does not have {header[0]} coordinates")
            rows.append(vals)
    if header is None:
        raise ValueError(f"{path}: missing header")
    if len(rows) != header[1]:
        raise ValueError(f"{path}: header announces {header[1]} points, found {len(rows)}")
    return header[0], rows


def write_points(path, dim: int, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(f"{dim} {len(rows)}\n")
        for row in rows:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")
