"""Approximate staircase boundaries for 2-D dominance counting.

A boundary for threshold ``t`` is a staircase whose inward corners are each
dominated by between ``t`` and ``alpha * t`` points, and such that every grid
point dominated by at most ``t`` points dominates one of its corners.  A stack
of boundaries for ``t = alpha ** j`` pins any dominance count between two
consecutive powers of ``alpha``.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .rankspace import PointSet


@dataclass(frozen=True)
class StaircaseBoundary:
    t: int
    alpha: int
    # inward corners, x strictly increasing and y strictly decreasing
    corners: np.ndarray = field(repr=False)

    @property
    def degenerate(self) -> bool:
        return len(self.corners) == 0

    def pred(self, qx: int):
        """Inward corner with the largest x not exceeding ``qx``, or None."""
        i = bisect_right(self._xs, qx) - 1
        return None if i < 0 else (int(self.corners[i, 0]), int(self.corners[i, 1]))

    def __post_init__(self):
        c = np.asarray(self.corners, dtype=np.int64).reshape(-1, 2)
        object.__setattr__(self, "corners", c)
        object.__setattr__(self, "_xs", c[:, 0].tolist())


def _columns(s: PointSet):
    n = s.n
    ycol = [0] * (n + 2)
    xrow = [0] * (n + 2)
    for x, y in s.points.tolist():
        ycol[x] = y
        xrow[y] = x
    return ycol, xrow


def build_boundary(s: PointSet, t: int, alpha: int = 2, _cols=None) -> StaircaseBoundary:
    """Trace a ``t``-boundary with slack ``alpha`` on a permutation grid.

    Start at the origin and move right until at most ``alpha*t`` points
    dominate the walker.  Then alternate: move up while more than ``t``
    points dominate it, move left while no more than ``alpha*t`` do.  The
    turning points of the left moves are the inward corners.  For ``t > n``
    the boundary is degenerate (no grid point has that many dominators).
    """
    if t < 1 or alpha < 2:
        raise ValueError("need t >= 1 and alpha >= 2")
    n = s.n
    if t > n:
        return StaircaseBoundary(t, alpha, np.zeros((0, 2), dtype=np.int64))
    ycol, xrow = _cols if _cols is not None else _columns(s)
    hi = alpha * t
    x = y = 1
    d = n
    while d > hi:
        d -= ycol[x] >= y
        x += 1
    walk = [(x, y)]
    while True:
        while d > t:
            d -= xrow[y] >= x
            y += 1
        while x > 1 and d + (ycol[x - 1] >= y) <= hi:
            x -= 1
            d += ycol[x] >= y
        walk.append((x, y))
        if x == 1:
            break
    # stalls at the walls repeat a row or column; keep only minimal corners
    return StaircaseBoundary(t, alpha, _minimal(np.array(walk, dtype=np.int64)))


def _minimal(corners: np.ndarray) -> np.ndarray:
    """Minimal elements (staircase) of a set of 2-D corners."""
    if len(corners) == 0:
        return corners
    order = np.lexsort((corners[:, 1], corners[:, 0]))
    out = []
    best = math.inf
    for x, y in corners[order].tolist():
        if y < best:
            out.append((x, y))
            best = y
    return np.array(out, dtype=np.int64)


class BoundarySet:
    """Boundaries for ``t = alpha**j``, ``j = 0..ceil(log_alpha n)``, plus a lookup index.

    The lookup works on cumulative staircases (the minimal corners of
    boundaries ``0..j``) so that "q dominates level j" is monotone in ``j``
    and can be binary searched; the minimal index is unchanged by this.
    The x-axis is cut into intervals of width about ``log2 n``.  For each
    interval ``A[s][j]`` holds the y of the last cumulative corner left of
    the interval, and ``L[s]`` maps level indexes having a corner inside the
    interval to those corners.
    """

    def __init__(self, s: PointSet, alpha: int = 2):
        if s.dim != 2:
            raise ValueError("BoundarySet needs 2-D points")
        self.alpha = alpha
        self.n = n = s.n
        top = 0 if n <= 1 else math.ceil(math.log(n, alpha) - 1e-12)
        cols = _columns(s) if n else None
        self.boundaries = [
            build_boundary(s, alpha ** j, alpha, _cols=cols) for j in range(top + 1)
        ] if n else []
        self._build_index()

    def __len__(self):
        return len(self.boundaries)

    def _build_index(self):
        n = self.n
        self.width = w = n if n < 4 else max(2, math.ceil(math.log2(n)))
        n_int = max(1, -(-n // w)) if n else 0
        sentinel = n + 2
        self.A = np.full((n_int, len(self.boundaries)), sentinel, dtype=np.int64)
        self.L = [dict() for _ in range(n_int)]
        acc = np.zeros((0, 2), dtype=np.int64)
        for j, b in enumerate(self.boundaries):
            acc = _minimal(np.vstack([acc, b.corners]))
            xs = acc[:, 0]
            for s_ in range(n_int):
                a = 1 + s_ * w
                i = int(np.searchsorted(xs, a, side="left")) - 1
                if i >= 0:
                    self.A[s_, j] = acc[i, 1]
            slot = np.minimum((xs - 1) // w, n_int - 1)
            for s_ in np.unique(slot).tolist():
                sel = acc[slot == s_]
                self.L[s_][j] = (sel[:, 0].tolist(), sel[:, 1].tolist())

    def _dominates_level(self, s_: int, j: int, qx: int, qy: int) -> bool:
        if self.A[s_, j] <= qy:
            return True
        hit = self.L[s_].get(j)
        if hit is None:
            return False
        i = bisect_right(hit[0], qx) - 1
        return i >= 0 and hit[1][i] <= qy

    def min_dominated_index(self, q):
        """Smallest ``j`` whose boundary has an inward corner dominated by ``q``.

        Returns ``(j, corner)`` or None when ``q`` dominates no boundary.
        """
        if not self.boundaries:
            return None
        qx, qy = min(int(q[0]), self.n), min(int(q[1]), self.n)
        if qx < 1 or qy < 1:
            return None
        s_ = min((qx - 1) // self.width, len(self.L) - 1)
        lo, hi = 0, len(self.boundaries)
        while lo < hi:
            mid = (lo + hi) // 2
            if self._dominates_level(s_, mid, qx, qy):
                hi = mid
            else:
                lo = mid + 1
        if lo == len(self.boundaries):
            return None
        corner = self.boundaries[lo].pred(qx)
        assert corner is not None and corner[1] <= qy
        return lo, corner

    def min_dominated_index_naive(self, q):
        for j, b in enumerate(self.boundaries):
            c = b.corners
            hit = np.nonzero((c[:, 0] <= q[0]) & (c[:, 1] <= q[1]))[0]
            if len(hit):
                return j, (int(c[hit[0], 0]), int(c[hit[0], 1]))
        return None

    def corner_count(self) -> int:
        return sum(len(b.corners) for b in self.boundaries)

    def dump(self, fh) -> None:
        """Line format: ``j t`` then ``x y`` per corner; boundaries separated by a blank line."""
        for j, b in enumerate(self.boundaries):
            fh.write(f"{j} {b.t}\n")
            for x, y in b.corners.tolist():
                fh.write(f"{x} {y}\n")
            fh.write("\n")


def build_boundary_set(s: PointSet, alpha: int = 2) -> BoundarySet:
    return BoundarySet(s, alpha)
