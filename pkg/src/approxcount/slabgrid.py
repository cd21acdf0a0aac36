"""Recursive slab grids for 2-D and 3-D dominance-count estimation.

A node cuts each axis into slabs at occupancy quantiles and stores, for
every vertex of the resulting grid, the exact number of its points that
dominate the vertex.  A query ``q`` snaps to the grid vertex just above it;
the points it misses are exactly the points of ``q``'s slab on each axis
that are still above the snapped coordinates of the earlier axes, and those
are themselves dominance queries on the slab's own structure.  Recursing
``v`` levels trades time for an additive error of ``d**v * m**(((d-1)/d)**v)``.

Two regimes exist:

* :class:`Adaptive` - slabs hold ``m**((d-1)/d)`` points, recursion to
  exhaustion, small nodes stored verbatim; the depth is picked per query.
* :class:`FixedError` - slabs hold ``m**((d-1)/d + eps)`` points, only slabs
  larger than ``max(m_root**f, floor)`` recurse, at most ``g`` levels deep, and
  no points are kept (except a root of at most ``base`` points), so only the
  tables take space and the error is fixed at build time.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .rankspace import PointSet


@dataclass(frozen=True)
class Adaptive:
    base: int = 16


@dataclass(frozen=True)
class FixedError:
    c: float = 0.5
    eps: float = 0.1
    base: int = 16
    # slabs at or below max(m**f, floor) points are not refined; None means 1
    # in 2-D and ``base`` in 3-D, where g is large and tiny tables multiply
    floor: int | None = None

    def __post_init__(self):
        if not 0 < self.c < 1:
            raise ValueError(f"c must lie in (0, 1), got {self.c}")
        if self.eps <= 0:
            raise ValueError("eps must be positive")

    def f(self, dim: int) -> float:
        # 2-D: c/4, 3-D: c/16
        return self.c / (4 if dim == 2 else 16)

    def g(self, dim: int) -> int:
        share = Fraction(dim - 1, dim) + Fraction(self.eps).limit_denominator(10 ** 6)
        return math.ceil(math.log(1 / self.f(dim)) / math.log(1 / float(share)) - 1e-12)

    def min_slab(self, dim: int) -> int:
        if self.floor is not None:
            return self.floor
        return 1 if dim == 2 else self.base

    def slab_exponent(self, dim: int) -> float:
        return (dim - 1) / dim + self.eps


def _slab_capacity(m: int, dim: int, regime) -> int:
    if isinstance(regime, FixedError):
        return max(1, math.ceil(m ** regime.slab_exponent(dim) - 1e-9))
    if dim == 2:
        return max(1, math.isqrt(m))
    # largest s with s**3 <= m**2
    s = int(round(m ** (2 / 3)))
    while s ** 3 > m * m:
        s -= 1
    while (s + 1) ** 3 <= m * m:
        s += 1
    return max(1, s)


class _Node:
    __slots__ = ("m", "points", "cuts", "sizes", "table", "children")

    def __init__(self, pts: np.ndarray, dim: int, regime, depth: int, ctx):
        self.m = m = len(pts)
        self.points = None
        self.children = None
        if m <= ctx["verbatim"] and (depth == 0 or ctx["inner_verbatim"]):
            self.points = pts
            ctx["stored_points"] += m
            return
        s = _slab_capacity(m, dim, regime)
        r = max(2, -(-m // s)) if m > 1 else 1
        starts = np.array([(k * m) // r for k in range(r)] + [m])
        sizes = np.diff(starts)
        top = int(pts.max()) + 1
        self.cuts = []
        self.sizes = sizes.tolist()
        slab_of = np.empty((m, dim), dtype=np.int64)
        order_by_axis = []
        for ax in range(dim):
            order = np.argsort(pts[:, ax], kind="stable")
            vals = pts[order, ax]
            self.cuts.append(vals[starts[:-1]].tolist() + [top])
            ids = np.empty(m, dtype=np.int64)
            ids[order] = np.repeat(np.arange(r), sizes)
            slab_of[:, ax] = ids
            order_by_axis.append(order)
        hist = np.zeros((r + 1,) * dim, dtype=np.int64)
        np.add.at(hist, tuple(slab_of.T), 1)
        for ax in range(dim):
            hist = np.flip(np.cumsum(np.flip(hist, ax), axis=ax), ax)
        self.table = hist
        ctx["table_entries"] += hist.size
        ctx["nodes"] += 1

        threshold = ctx["min_slab"]
        if ctx["max_depth"] is not None and depth + 1 >= ctx["max_depth"]:
            return
        self.children = []
        for ax in range(dim):
            row = []
            for k in range(r):
                if sizes[k] > threshold:
                    sel = order_by_axis[ax][starts[k]:starts[k + 1]]
                    row.append(_Node(pts[sel], dim, regime, depth + 1, ctx))
                else:
                    row.append(None)
            self.children.append(row)

    def query(self, q, v: int):
        """Return ``(estimate, bound)`` for the dominators of ``q`` in this node."""
        if self.points is not None:
            if self.m == 0:
                return 0, 0
            return int(np.count_nonzero(np.all(self.points >= np.asarray(q), axis=1))), 0
        dim = len(q)
        q = list(q)
        idx = []
        for ax in range(dim):
            cut = self.cuts[ax]
            if q[ax] > cut[-1] - 1:
                return 0, 0
            if q[ax] < cut[0]:
                q[ax] = cut[0]
            idx.append(bisect_left(cut, q[ax]))
        est = int(self.table[tuple(idx)])
        terms = []
        for ax in range(dim):
            a = idx[ax]
            if self.cuts[ax][a] == q[ax]:
                continue
            probe = [self.cuts[i][idx[i]] for i in range(ax)] + q[ax:]
            terms.append((ax, a - 1, probe))
        if not terms:
            return est, 0
        table_bound = min(self.m, sum(self.sizes[k] for _, k, _ in terms))
        if v <= 0 or self.children is None:
            return est, table_bound
        rec_est, rec_bound = est, 0
        for ax, k, probe in terms:
            child = self.children[ax][k]
            if child is None:
                rec_bound += self.sizes[k]
                continue
            e, b = child.query(probe, v - 1)
            rec_est += e
            rec_bound += b
        if rec_bound <= table_bound:
            return rec_est, rec_bound
        return est, table_bound


def _worst_bound(node) -> int:
    if node.points is not None:
        return 0
    total = 0
    for ax, row in enumerate(node.cuts):
        total += max(
            size if node.children is None or node.children[ax][k] is None
            else min(size, _worst_bound(node.children[ax][k]))
            for k, size in enumerate(node.sizes)
        )
    return min(node.m, total)


class SlabTree:
    """Slab grid over a point set; ``dim`` is 2 or 3.

    Points need distinct coordinates per axis (rank space guarantees it).
    ``query(q, v)`` estimates how many points dominate ``q`` using ``v``
    recursion levels and returns the additive error it can vouch for.
    """

    dim: int = 0

    def __init__(self, s, regime=None):
        pts = s.points if isinstance(s, PointSet) else np.asarray(s, dtype=np.int64)
        pts = pts.reshape(-1, self.dim) if self.dim else pts
        if self.dim == 0:
            self.dim = pts.shape[1]
        if self.dim not in (2, 3):
            raise ValueError("slab grids support 2-D and 3-D points")
        self.regime = regime = regime if regime is not None else Adaptive()
        self.m = len(pts)
        self.ctx = ctx = {"table_entries": 0, "stored_points": 0, "nodes": 0}
        if isinstance(regime, FixedError):
            ctx["verbatim"] = regime.base
            ctx["inner_verbatim"] = False
            ctx["min_slab"] = max(math.floor(self.m ** regime.f(self.dim)), regime.min_slab(self.dim)) if self.m else 0
            ctx["max_depth"] = regime.g(self.dim)
        else:
            ctx["verbatim"] = regime.base
            ctx["inner_verbatim"] = True
            ctx["min_slab"] = 0
            ctx["max_depth"] = None
        self.root = _Node(pts, self.dim, regime, 0, ctx)

    def query(self, q, v: int | None = None):
        if v is None or isinstance(self.regime, FixedError):
            v = 1 << 30
        if v < 0:
            raise ValueError("depth must be non-negative")
        q = [int(c) for c in q]
        if len(q) != self.dim:
            raise ValueError(f"expected a {self.dim}-D query point")
        return self.root.query(q, v)

    def depth_for(self, rho: float) -> int:
        if not 0 < rho < 1:
            raise ValueError(f"rho must lie in (0, 1), got {rho}")
        if self.dim == 2:
            return math.ceil(math.log2(1 / rho) - 1e-12) + 2
        return math.ceil(math.log(1 / rho) / math.log(1.5) - 1e-12) + 2

    def query_rho(self, q, rho: float):
        return self.query(q, self.depth_for(rho))

    def nominal_bound(self, v: int | None = None) -> float:
        """Error guarantee implied by the tree's size alone.

        Adaptive: ``d**v * m**(((d-1)/d)**v)``.  Fixed error: the smaller of
        ``d**g * max(m**f, s_g)`` (``s_g`` the slab size after ``g`` rounds)
        and the worst case over the tree actually built.
        """
        d, m = self.dim, self.m
        if self.root.points is not None:
            return 0.0
        if isinstance(self.regime, FixedError):
            g = self.regime.g(d)
            size = m
            for _ in range(g):
                size = -(-size // max(2, -(-size // _slab_capacity(size, d, self.regime))))
            formula = d ** g * max(math.floor(m ** self.regime.f(d)), self.regime.min_slab(d), size)
            return float(min(formula, _worst_bound(self.root)))
        share = (d - 1) / d
        return d ** v * m ** (share ** v)

    @property
    def table_entries(self) -> int:
        return self.ctx["table_entries"]

    @property
    def stored_points(self) -> int:
        return self.ctx["stored_points"]


class SlabTree2(SlabTree):
    dim = 2


class SlabTree3(SlabTree):
    dim = 3


def build2(s, regime=None) -> SlabTree2:
    return SlabTree2(s, regime)


def build3(s, regime=None) -> SlabTree3:
    return SlabTree3(s, regime)


def query2(t: SlabTree2, q, v: int):
    return t.query(q, v)


def query3(t: SlabTree3, q, v: int):
    return t.query(q, v)


def query2_rho(t: SlabTree2, q, rho: float):
    return t.query_rho(q, rho)


def query3_rho(t: SlabTree3, q, rho: float):
    return t.query_rho(q, rho)
