"""2-D dominance counting with constant-factor and additive ``k**rho`` error.

The boundary stack locates the smallest ``j`` such that the query dominates
an inward corner ``c`` of ``M_j``; then ``2**(j-1) < k <= |D(c)|`` where
``D(c)`` is the set of points dominating ``c`` (at most ``2**(j+1)``
points).  Every point dominating the query also dominates ``c``, so a slab
tree over ``D(c)`` alone refines the count with error relative to ``|D(c)|``
and hence to ``k``.
"""

from __future__ import annotations

import numpy as np

from .boundary2d import BoundarySet
from .rankspace import PointSet, map_point, reduce_to_rank_space
from .slabgrid import Adaptive, FixedError, SlabTree2


class _Local:
    """Slab tree over a corner's dominator set, in that set's own rank space."""

    __slots__ = ("size", "points", "rank_map", "tree")

    def __init__(self, pts: np.ndarray, regime, exact: bool):
        self.size = len(pts)
        self.points = pts if exact else None
        self.rank_map = self.tree = None
        if not exact:
            local, self.rank_map = reduce_to_rank_space(pts, dim=2)
            self.tree = SlabTree2(local, regime)

    def query(self, q, rho):
        if self.tree is None:
            return int(np.count_nonzero((self.points[:, 0] >= q[0]) & (self.points[:, 1] >= q[1]))), 0
        lq = map_point(q, self.rank_map)
        if isinstance(self.tree.regime, FixedError):
            return self.tree.query(lq)
        return self.tree.query_rho(lq, rho)


class Dominance2D:
    """Counts the points dominating a query, ``p >= q`` componentwise.

    ``regime`` is :class:`Adaptive` (error chosen per query through ``rho``)
    or :class:`FixedError` (error fixed at build time, linear space).
    """

    def __init__(self, s: PointSet, regime=None, alpha: int = 2):
        if s.dim != 2:
            raise ValueError("Dominance2D needs 2-D points")
        self.regime = regime if regime is not None else Adaptive()
        self.alpha = alpha
        self.n = s.n
        self.points = s.points
        self.bs = BoundarySet(s, alpha)
        pts = s.points
        self.local = []
        for j, b in enumerate(self.bs.boundaries):
            row = {}
            for cx, cy in b.corners.tolist():
                dom = pts[(pts[:, 0] >= cx) & (pts[:, 1] >= cy)]
                row[cx] = _Local(dom, self.regime, exact=(j == 0))
            self.local.append(row)
        # top of the range: queries dominating no corner have k > alpha**j_max
        self.top = max((j for j, b in enumerate(self.bs.boundaries) if not b.degenerate), default=-1)
        self.fallback = SlabTree2(s, self.regime) if self.n else None

    def _clip(self, q):
        q = [int(v) for v in q]
        if len(q) != 2:
            raise ValueError("expected a 2-D query point")
        if self.n == 0 or q[0] > self.n or q[1] > self.n:
            return None
        return max(q[0], 1), max(q[1], 1)

    def locate(self, q):
        """``(j, corner)`` of the smallest boundary ``q`` dominates, or None."""
        q = self._clip(q)
        return None if q is None else self.bs.min_dominated_index(q)

    def count_constant_factor(self, q):
        """``(lo, hi)`` with ``lo <= k <= hi``; exact when ``k`` is 0 or ``j == 0``."""
        q = self._clip(q)
        if q is None:
            return 0, 0
        hit = self.bs.min_dominated_index(q)
        if hit is None:
            return self.alpha ** self.top + 1, self.n
        j, (cx, _) = hit
        loc = self.local[j][cx]
        if j == 0:
            k, _ = loc.query(q, None)
            return k, k
        return self.alpha ** (j - 1) + 1, loc.size

    def count(self, q, rho: float | None = None):
        """``(estimate, bound)`` with ``|estimate - k| <= bound``."""
        if isinstance(self.regime, Adaptive) and (rho is None or not 0 < rho < 1):
            raise ValueError(f"rho must lie in (0, 1), got {rho}")
        q = self._clip(q)
        if q is None:
            return 0, 0
        hit = self.bs.min_dominated_index(q)
        if hit is None:
            if isinstance(self.regime, FixedError):
                est, bound = self.fallback.query(q)
            else:
                est, bound = self.fallback.query_rho(q, rho)
            lo = self.alpha ** self.top + 1
            return _clamp(est, bound, lo, self.n)
        j, (cx, _) = hit
        loc = self.local[j][cx]
        est, bound = loc.query(q, rho)
        if j == 0:
            return est, bound
        return _clamp(est, bound, self.alpha ** (j - 1) + 1, loc.size)

    def envelope(self, k: int, rho: float) -> float:
        """Documented guarantee ``4 * max(k, 1)**rho`` (``|D| <= 4k`` slack)."""
        return 4 * max(k, 1) ** rho

    # space accounting

    @property
    def stored_points(self) -> int:
        return sum(loc.size for row in self.local for loc in row.values())

    @property
    def table_entries(self) -> int:
        total = sum(loc.tree.table_entries for row in self.local for loc in row.values() if loc.tree)
        return total + (self.fallback.table_entries if self.fallback else 0)

    @property
    def total_entries(self) -> int:
        """Stored points, table cells and corners across every substructure."""
        verbatim = sum(loc.tree.stored_points for row in self.local for loc in row.values() if loc.tree)
        j0 = sum(loc.size for loc in self.local[0].values()) if self.local else 0
        fb = self.fallback.stored_points if self.fallback else 0
        return self.table_entries + verbatim + j0 + fb + self.bs.corner_count()


def _clamp(est, bound, lo, hi):
    # k is known to lie in [lo, hi]; pulling the estimate into it never hurts
    clamped = min(max(est, lo), hi)
    return clamped, min(bound, hi - lo) if lo <= hi else bound


def build(s: PointSet, regime=None) -> Dominance2D:
    return Dominance2D(s, regime)


def count_constant_factor(d: Dominance2D, q):
    return d.count_constant_factor(q)


def count(d: Dominance2D, q, rho: float | None = None):
    return d.count(q, rho)

