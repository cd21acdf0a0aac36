"""3-D dominance counting through approximate levels.

Here ``k(q)`` is the number of points *dominated by* ``q``.  An approximate
``t``-level is a set of apexes, each dominating at most ``2t`` points, such
that every grid point with ``k <= t`` lies below some apex.  Levels for
``t = 2**j`` are nested (each level's apexes also cover everything the lower
levels cover), so the smallest covering level is found by binary search and
brackets ``k`` within a factor of four.  A slab tree over the points below
the covering apex then refines the estimate.

Levels are built by slicing along z.  At slice height ``Z`` every point with
``z <= Z`` is projected to the plane and a staircase walk finds apexes
``(X, Y, Z)`` covering all ``(x, y)`` with at most ``t + delta - 1`` points
below, while each apex has at most ``2t`` below.  A query with height in
``(Z - delta, Z]`` gains at most ``delta - 1`` points when lifted to ``Z``,
so it is covered.  Apexes dominated by other apexes are dropped.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

import numpy as np

from .rankspace import PointSet, map_point, reduce_to_rank_space, reflect_point
from .slabgrid import Adaptive, FixedError, SlabTree3


def _maxima(cands) -> list:
    """Apexes not dominated by another apex (duplicates collapse)."""
    cands = sorted(set(cands), key=lambda a: (-a[2], -a[0], -a[1]))
    xs, ys, out = [], [], []  # staircase over (x, y): x ascending, y descending
    for a in cands:
        x, y, _ = a
        i = bisect_left(xs, x)
        if i < len(xs) and ys[i] >= y:
            continue
        out.append(a)
        # drop staircase entries now dominated in (x, y)
        lo = i
        while lo > 0 and ys[lo - 1] <= y:
            lo -= 1
        hi = i + 1 if i < len(xs) and xs[i] == x else i
        xs[lo:hi] = [x]
        ys[lo:hi] = [y]
    return out


def _slice_walk(cols, n: int, z_cap: int, low: int, hi: int):
    """Corners covering every ``(x, y)`` with at most ``low`` slice points below.

    Works in the reflected plane (``x -> n + 1 - x``) so the count becomes a
    dominators count and the boundary walk applies.  Only points with
    ``z <= z_cap`` belong to the slice.
    """
    ycol, zcol, xrow, zrow = cols
    x = y = 1
    d = z_cap
    while d > hi:
        d -= ycol[x] >= y and zcol[x] <= z_cap
        x += 1
    walk = [(x, y)]
    while True:
        while d > low:
            d -= xrow[y] >= x and zrow[y] <= z_cap
            y += 1
        while x > 1 and d + (ycol[x - 1] >= y and zcol[x - 1] <= z_cap) <= hi:
            x -= 1
            d += ycol[x] >= y and zcol[x] <= z_cap
        walk.append((x, y))
        if x == 1:
            break
    out = []
    best = math.inf
    for cx, cy in sorted(walk):
        if cy < best:
            best = cy
            if cx <= n and cy <= n:
                out.append((n + 1 - cx, n + 1 - cy, z_cap))
    return out


def _reflected_columns(pts: np.ndarray, n: int):
    ycol = [0] * (n + 2)
    zcol = [0] * (n + 2)
    xrow = [0] * (n + 2)
    zrow = [0] * (n + 2)
    for x, y, z in pts.tolist():
        rx, ry = n + 1 - x, n + 1 - y
        ycol[rx], zcol[rx] = ry, z
        xrow[ry], zrow[ry] = rx, z
    return ycol, zcol, xrow, zrow


class _Membership:
    """Merge-sort tree over x-sorted apexes: each node keeps its apexes by y
    with the suffix maximum of z, so "some apex >= q" is a few binary searches."""

    def __init__(self, apexes: np.ndarray):
        a = apexes[np.lexsort((apexes[:, 1], apexes[:, 0]))] if len(apexes) else apexes
        self.apexes = a
        self.xs = a[:, 0].tolist()
        self.size = size = max(1, len(a))
        self.nodes = {}
        self._build(1, 0, size)

    def _build(self, node, lo, hi):
        part = self.apexes[lo:hi]
        if len(part) == 0:
            return
        order = np.argsort(part[:, 1], kind="stable")
        ys = part[order, 1]
        zs = part[order, 2]
        best = np.maximum.accumulate(zs[::-1])[::-1]
        arg = np.empty(len(zs), dtype=np.int64)
        cur = len(zs) - 1
        for i in range(len(zs) - 1, -1, -1):
            if zs[i] >= zs[cur]:
                cur = i
            arg[i] = cur
        self.nodes[node] = (ys.tolist(), best.tolist(), (order[arg] + lo).tolist())
        if hi - lo > 1:
            mid = (lo + hi) // 2
            self._build(2 * node, lo, mid)
            self._build(2 * node + 1, mid, hi)

    def find(self, q):
        i = bisect_left(self.xs, q[0])
        if i >= len(self.xs):
            return None
        return self._find(1, 0, self.size, i, q)

    def _find(self, node, lo, hi, i, q):
        if hi <= i or node not in self.nodes:
            return None
        if lo >= i:
            ys, best, idx = self.nodes[node]
            p = bisect_left(ys, q[1])
            if p < len(ys) and best[p] >= q[2]:
                return tuple(int(v) for v in self.apexes[idx[p]])
            return None
        mid = (lo + hi) // 2
        return self._find(2 * node, lo, mid, i, q) or self._find(2 * node + 1, mid, hi, i, q)


@dataclass(frozen=True, eq=False)
class ApproxLevel:
    t: int
    alpha: int
    apexes: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.asarray(self.apexes, dtype=np.int64).reshape(-1, 3)
        object.__setattr__(self, "apexes", a)
        object.__setattr__(self, "_index", _Membership(a))

    def __len__(self):
        return len(self.apexes)

    def find(self, q):
        """Some apex dominating ``q`` (componentwise ``>=``), or None."""
        return self._index.find([int(v) for v in q])

    def find_naive(self, q):
        hit = np.nonzero(np.all(self.apexes >= np.asarray(q), axis=1))[0]
        return None if len(hit) == 0 else tuple(int(v) for v in self.apexes[hit[0]])

    def is_antichain(self) -> bool:
        a = self.apexes
        for i in range(len(a)):
            ge = np.all(a >= a[i], axis=1)
            ge[i] = False
            if ge.any():
                return False
        return True


def _level_candidates(pts: np.ndarray, n: int, t: int, alpha: int, cols=None):
    if t >= n:
        return [(n, n, n)]
    cols = cols if cols is not None else _reflected_columns(pts, n)
    delta = max(1, t // 2)
    low = min(t + delta - 1, alpha * t)
    hi = alpha * t
    cands = []
    heights = list(range(delta, n, delta)) + [n]
    for z_cap in heights:
        if z_cap <= low:
            cands.append((n, n, z_cap))
        else:
            cands.extend(_slice_walk(cols, n, z_cap, low, hi))
    return cands


def build_level(s: PointSet, t: int, alpha: int = 2) -> ApproxLevel:
    """Approximate ``t``-level of a 3-D permutation grid."""
    if s.dim != 3:
        raise ValueError("levels need 3-D points")
    if t < 1 or alpha < 2:
        raise ValueError("need t >= 1 and alpha >= 2")
    n = s.n
    if n == 0:
        return ApproxLevel(t, alpha, np.zeros((0, 3), dtype=np.int64))
    return ApproxLevel(t, alpha, np.array(_maxima(_level_candidates(s.points, n, t, alpha)), dtype=np.int64))


def dominated_by_level(level: ApproxLevel, q):
    return level.find(q)


class _Below:
    """Points below one apex, reflected so that a dominators tree counts them."""

    __slots__ = ("size", "points", "n", "rank_map", "tree")

    def __init__(self, pts: np.ndarray, n: int, regime, exact: bool):
        self.size = len(pts)
        self.n = n
        self.points = pts if exact else None
        self.rank_map = self.tree = None
        if not exact:
            local, self.rank_map = reduce_to_rank_space(n + 1 - pts, dim=3)
            self.tree = SlabTree3(local, regime)

    def query(self, q, rho):
        if self.tree is None:
            return int(np.count_nonzero(np.all(self.points <= np.asarray(q), axis=1))), 0
        lq = map_point(reflect_point(q, self.n, (True, True, True)), self.rank_map)
        if isinstance(self.tree.regime, FixedError):
            return self.tree.query(lq)
        return self.tree.query_rho(lq, rho)


class LevelSet3D:
    """Counts the points dominated by a query, ``p <= q`` componentwise.

    Levels ``t = 2**j`` for ``j = 0..ceil(log2 n)``, each made to cover the
    previous one, and one refinement structure per apex.
    """

    def __init__(self, s: PointSet, regime=None, alpha: int = 2):
        if s.dim != 3:
            raise ValueError("LevelSet3D needs 3-D points")
        self.regime = regime if regime is not None else Adaptive()
        self.alpha = alpha
        self.n = n = s.n
        self.points = pts = s.points
        top = 0 if n <= 1 else math.ceil(math.log2(n) - 1e-12)
        self.levels = []
        self.below = []
        if n == 0:
            self.fallback = None
            return
        cols = _reflected_columns(pts, n)
        prev = []
        for j in range(top + 1):
            t = alpha ** j
            # nesting: the previous level's apexes are valid here too
            apexes = _maxima(_level_candidates(pts, n, t, alpha, cols) + prev)
            prev = apexes
            level = ApproxLevel(t, alpha, np.array(apexes, dtype=np.int64))
            self.levels.append(level)
            row = {}
            for a in apexes:
                under = pts[np.all(pts <= np.asarray(a), axis=1)]
                row[a] = _Below(under, n, self.regime, exact=(j == 0))
            self.below.append(row)
        # every query is covered by the top level; kept for malformed inputs
        self.fallback = _Below(pts, n, self.regime, exact=False)

    def __len__(self):
        return len(self.levels)

    def _clip(self, q):
        q = [int(v) for v in q]
        if len(q) != 3:
            raise ValueError("expected a 3-D query point")
        if self.n == 0 or min(q) < 1:
            return None
        return tuple(min(v, self.n) for v in q)

    def locate(self, q):
        """``(j, apex)`` for the smallest level covering ``q``, or None."""
        q = self._clip(q)
        if q is None:
            return None
        lo, hi = 0, len(self.levels)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.levels[mid].find(q) is not None:
                hi = mid
            else:
                lo = mid + 1
        if lo == len(self.levels):
            return None
        return lo, self.levels[lo].find(q)

    def locate_naive(self, q):
        q = self._clip(q)
        if q is None:
            return None
        for j, level in enumerate(self.levels):
            a = level.find_naive(q)
            if a is not None:
                return j, a
        return None

    def count_constant_factor(self, q):
        q = self._clip(q)
        if q is None:
            return 0, 0
        hit = self.locate(q)
        if hit is None:
            return 1, self.n
        j, a = hit
        under = self.below[j][a]
        if j == 0:
            k, _ = under.query(q, None)
            return k, k
        return self.alpha ** (j - 1) + 1, under.size

    def count(self, q, rho: float | None = None):
        """``(estimate, bound)`` for the points dominated by ``q``."""
        if isinstance(self.regime, Adaptive) and (rho is None or not 0 < rho < 1):
            raise ValueError(f"rho must lie in (0, 1), got {rho}")
        q = self._clip(q)
        if q is None:
            return 0, 0
        hit = self.locate(q)
        if hit is None:
            return self.fallback.query(q, rho)
        j, a = hit
        under = self.below[j][a]
        est, bound = under.query(q, rho)
        if j == 0:
            return est, bound
        lo, hi = self.alpha ** (j - 1) + 1, under.size
        return min(max(est, lo), hi), min(bound, hi - lo)

    @property
    def apex_count(self) -> int:
        return sum(len(level) for level in self.levels)

    @property
    def stored_points(self) -> int:
        return sum(b.size for row in self.below for b in row.values())

    @property
    def table_entries(self) -> int:
        total = sum(b.tree.table_entries for row in self.below for b in row.values() if b.tree)
        return total + (self.fallback.tree.table_entries if self.fallback else 0)


class Dominators3D:
    """Counts points dominating ``q`` as points dominated by the mirrored ``q``."""

    def __init__(self, s: PointSet, regime=None):
        self.m = s.n
        self.ls = LevelSet3D(PointSet(3, s.n + 1 - s.points), regime)

    def count(self, q, rho: float | None = None):
        return self.ls.count([self.m + 1 - int(v) for v in q], rho)


def build_level_set(s: PointSet, regime=None) -> LevelSet3D:
    return LevelSet3D(s, regime)


def count3(ls: LevelSet3D, q, rho: float | None = None):
    return ls.count(q, rho)
