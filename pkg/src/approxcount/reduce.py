"""General orthogonal range counting on top of a dominance counter.

A multi-level range tree splits a box at the lowest common ancestor of its
two endpoints on every axis, leaving at most ``2**d`` pieces.  Each piece is
a dominance query (``>=`` on axes reached through a left child, ``<=`` through
a right child) over the points of one tree node, called a canonical subset.
Each canonical subset is reflected so its piece becomes a plain dominators
query, reduced to its own rank space and handed to a caller-supplied factory.

Tree positions run over ``0..m+1`` where ``0`` and ``m+1`` are sentinels, so
the endpoints ``lo - 1`` and ``hi + 1`` always sit in different subtrees.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right

import numpy as np

from .rankspace import PointSet, map_point, reduce_to_rank_space

SCAN_BELOW = 8


class _Exact:
    def __init__(self, s: PointSet):
        self.points = s.points

    def count(self, q, rho=None):
        return int(np.count_nonzero(np.all(self.points >= np.asarray(q), axis=1))), 0


def exact_factory(s: PointSet):
    """Oracle-grade dominators counter; isolates decomposition from approximation."""
    return _Exact(s)


def dominance2d_factory(regime=None):
    from .approx2d import Dominance2D

    def make(s: PointSet):
        return Dominance2D(s, regime)

    return make


def levelset3d_factory(regime=None):
    from .level3d import Dominators3D

    def make(s: PointSet):
        return Dominators3D(s, regime)

    return make


class _Canonical:
    __slots__ = ("flips", "size", "points", "rank_map", "struct", "n")

    def __init__(self, pts: np.ndarray, flips: tuple, n: int, factory):
        self.flips = flips
        self.size = len(pts)
        self.n = n
        self.points = self.rank_map = self.struct = None
        if len(pts) < SCAN_BELOW:
            self.points = pts
            return
        mirrored = np.where(np.array(flips), n + 1 - pts, pts)
        local, self.rank_map = reduce_to_rank_space(mirrored, dim=pts.shape[1])
        self.struct = factory(local)

    def count(self, corner, rho):
        if self.struct is None:
            ok = np.ones(len(self.points), dtype=bool)
            for ax, (c, f) in enumerate(zip(corner, self.flips)):
                ok &= (self.points[:, ax] <= c) if f else (self.points[:, ax] >= c)
            return int(np.count_nonzero(ok)), 0
        q = [self.n + 1 - c if f else c for c, f in zip(corner, self.flips)]
        return self.struct.count(map_point(q, self.rank_map), rho)


class _AxisTree:
    """Range tree over one axis; children carry the next axis or a canonical subset."""

    def __init__(self, pts: np.ndarray, axis: int, flips: tuple, ctx):
        self.axis = axis
        order = np.argsort(pts[:, axis], kind="stable")
        pts = pts[order]
        self.vals = pts[:, axis].tolist()
        self.span = len(pts) + 2
        self.children = {}
        last = axis == ctx["dim"] - 1
        stack = [(0, self.span)]
        while stack:
            lo, hi = stack.pop()
            if hi - lo < 2:
                continue
            mid = (lo + hi) // 2
            for side, (a, b) in enumerate(((lo, mid), (mid, hi))):
                # positions 1..m hold points; clip away the sentinels
                sub = pts[max(a, 1) - 1:min(b, self.span - 1) - 1]
                if len(sub):
                    f = flips + (bool(side),)
                    if last:
                        self.children[(a, b)] = _Canonical(sub, f, ctx["n"], ctx["factory"])
                        ctx["stored"] += len(sub)
                        ctx["subsets"] += 1
                    else:
                        self.children[(a, b)] = _AxisTree(sub, axis + 1, f, ctx)
                stack.append((a, b))

    def pieces(self, rect, corner, out):
        lo, hi = rect[self.axis]
        a = bisect_left(self.vals, lo)
        b = bisect_right(self.vals, hi) + 1
        if b - a < 2:
            return
        left, right = 0, self.span
        while True:
            mid = (left + right) // 2
            if b < mid:
                right = mid
            elif a >= mid:
                left = mid
            else:
                break
        for key, val in (((left, mid), lo), ((mid, right), hi)):
            child = self.children.get(key)
            if child is None:
                continue
            c = corner + (val,)
            if isinstance(child, _Canonical):
                out.append((child, c))
            else:
                child.pieces(rect, c, out)


class DecompositionTree:
    """Range counting in 2-D or 3-D through dominance counters on canonical subsets.

    ``factory(PointSet)`` must return an object whose ``count(q, rho)``
    estimates the number of points dominating ``q`` as ``(estimate, bound)``.
    """

    def __init__(self, s: PointSet, factory=exact_factory):
        if s.dim not in (2, 3):
            raise ValueError("decomposition supports 2-D and 3-D points")
        self.dim = s.dim
        self.n = s.n
        self.ctx = {"dim": s.dim, "n": s.n, "factory": factory, "stored": 0, "subsets": 0}
        self.root = _AxisTree(s.points, 0, (), self.ctx) if s.n else None

    def pieces(self, rect):
        """Canonical subsets and dominance corners that make up ``rect``."""
        rect = [(int(lo), int(hi)) for lo, hi in rect]
        if len(rect) != self.dim:
            raise ValueError(f"expected {self.dim} intervals")
        out = []
        if self.root is None or any(lo > hi for lo, hi in rect):
            return out
        self.root.pieces(rect, (), out)
        return out

    def query(self, rect, rho=None):
        """``(estimate, bound, piece_count)``; the bound is the sum of piece bounds."""
        est = bound = 0
        parts = self.pieces(rect)
        for node, corner in parts:
            e, b = node.count(corner, rho)
            est += e
            bound += b
        return est, bound, len(parts)

    @property
    def stored_points(self) -> int:
        return self.ctx["stored"]

    @property
    def subsets(self) -> int:
        return self.ctx["subsets"]


def build_general(s: PointSet, factory=exact_factory) -> DecompositionTree:
    return DecompositionTree(s, factory)


def query_general(t: DecompositionTree, rect, rho=None):
    return t.query(rect, rho)
