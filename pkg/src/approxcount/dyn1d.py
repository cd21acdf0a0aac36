"""Dynamic 1-D approximate range counting.

Elements live in two places.  A list of sorted groups answers short ranges
exactly: when the first element at or after ``a`` and the last element at or
before ``b`` sit in the same or adjacent groups, counting is two binary
searches per group.  Longer ranges go to an exponential tree whose nodes keep
a *snapshot* of the prefix sums of their children's sizes.  The snapshot is
refreshed only after ``n_v**(3/c)/2`` updates below the node, so a range sum
read from it is off by at most the node's drift counter.  A query adds up the
drift of the nodes whose snapshots it reads and reports that as its bound.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right, insort

LEAF_CAP = 32


class GroupList:
    """Sorted multiset cut into groups of ``g/2 .. 2g`` consecutive elements."""

    def __init__(self, g: int):
        self.g = max(1, g)
        self.groups: list[list] = []
        self.mins: list = []
        self.maxs: list = []
        self.n = 0

    def _sync(self, i):
        self.mins[i] = self.groups[i][0]
        self.maxs[i] = self.groups[i][-1]

    def _split(self, i):
        grp = self.groups[i]
        if len(grp) <= 2 * self.g:
            return
        half = len(grp) // 2
        self.groups[i:i + 1] = [grp[:half], grp[half:]]
        self.mins[i:i + 1] = [None, None]
        self.maxs[i:i + 1] = [None, None]
        self._sync(i)
        self._sync(i + 1)

    def insert(self, x):
        self.n += 1
        if not self.groups:
            self.groups.append([x])
            self.mins.append(x)
            self.maxs.append(x)
            return
        i = min(bisect_left(self.maxs, x), len(self.groups) - 1)
        insort(self.groups[i], x)
        self._sync(i)
        self._split(i)

    def find(self, x):
        """Index of a group holding ``x``, or -1."""
        i = bisect_left(self.maxs, x)
        if i < len(self.groups):
            grp = self.groups[i]
            j = bisect_left(grp, x)
            if j < len(grp) and grp[j] == x:
                return i
        return -1

    def delete(self, x):
        i = self.find(x)
        if i < 0:
            raise KeyError(x)
        grp = self.groups[i]
        del grp[bisect_left(grp, x)]
        self.n -= 1
        if not grp:
            del self.groups[i], self.mins[i], self.maxs[i]
            return
        self._sync(i)
        if len(grp) * 2 < self.g and len(self.groups) > 1:
            j = i + 1 if i + 1 < len(self.groups) else i - 1
            lo, hi = min(i, j), max(i, j)
            self.groups[lo:hi + 1] = [self.groups[lo] + self.groups[hi]]
            del self.mins[hi], self.maxs[hi]
            self._sync(lo)
            self._split(lo)

    def span(self, a, b):
        """Group indexes of ``succ(a)`` and ``pred(b)``; ``None`` if the range is empty."""
        ia = bisect_left(self.maxs, a)
        ib = bisect_right(self.mins, b) - 1
        if ia >= len(self.groups) or ib < 0 or ia > ib:
            return None
        return ia, ib

    def count(self, a, b, ia, ib) -> int:
        return sum(bisect_right(g, b) - bisect_left(g, a) for g in self.groups[ia:ib + 1])

    def __iter__(self):
        for grp in self.groups:
            yield from grp


class _Leaf:
    __slots__ = ("keys", "built")

    def __init__(self, keys):
        self.keys = keys
        self.built = len(keys)

    @property
    def size(self):
        return len(self.keys)


class _Node:
    __slots__ = ("children", "seps", "sizes", "snapshot", "drift", "size", "built")


def _cuts(keys, parts):
    """Split points of ``keys`` into about ``parts`` runs without breaking equal keys."""
    m = len(keys)
    out = []
    for k in range(1, parts):
        p = (k * m) // parts
        while 0 < p < m and keys[p] == keys[p - 1]:
            p += 1
        if 0 < p < m and (not out or p > out[-1]):
            out.append(p)
    return out


class ExponentialTree:
    """Multiset of integers with approximate range counts.

    ``c`` is the requested error exponent (``|count - k| <= k**(1/c)``);
    the tree works with ``c_eff = max(ceil(5c), 5)``.  ``capacity_hint``
    sizes the groups; ``group_size`` overrides the group size (for
    exercising the tree on small inputs).
    """

    def __init__(self, c: float = 2.0, capacity_hint: int = 1 << 16, group_size: int | None = None):
        if not c > 1:
            raise ValueError(f"c must exceed 1, got {c}")
        self.c_user = c
        self.c_eff = max(math.ceil(5 * c - 1e-12), 5)
        hint = max(4, int(capacity_hint))
        if group_size is None:
            loglog = math.log2(max(2.0, math.log2(hint)))
            group_size = min(hint, max(4, math.ceil(loglog ** self.c_eff)))
        self.g = group_size
        self.groups = GroupList(group_size)
        self.root = _Leaf([])

    # sizing rules

    def child_target(self, n_v: int) -> int:
        return max(1, math.ceil(n_v ** ((self.c_eff - 1) / self.c_eff)))

    def drift_limit(self, n_v: int) -> float:
        return n_v ** (3 / self.c_eff) / 2

    def _build(self, keys):
        m = len(keys)
        if m <= LEAF_CAP:
            return _Leaf(keys)
        target = self.child_target(m)
        cuts = _cuts(keys, max(2, -(-m // target)))
        if not cuts:
            return _Leaf(keys)
        bounds = [0] + cuts + [m]
        node = _Node()
        node.children = [self._build(keys[bounds[i]:bounds[i + 1]]) for i in range(len(bounds) - 1)]
        node.seps = [keys[p] for p in cuts]
        node.sizes = [bounds[i + 1] - bounds[i] for i in range(len(bounds) - 1)]
        node.size = node.built = m
        self._refresh(node)
        return node

    def _refresh(self, node):
        snap = [0]
        for s in node.sizes:
            snap.append(snap[-1] + s)
        node.snapshot = snap
        node.drift = 0

    def _keys(self, node, out):
        if isinstance(node, _Leaf):
            out.extend(node.keys)
        else:
            for ch in node.children:
                self._keys(ch, out)
        return out

    # updates

    def __len__(self):
        return self.groups.n

    def insert(self, x: int) -> None:
        x = int(x)
        self.groups.insert(x)
        self.root = self._update(self.root, x, +1)

    def delete(self, x: int) -> None:
        x = int(x)
        self.groups.delete(x)  # raises KeyError when absent
        self.root = self._update(self.root, x, -1)

    def _update(self, node, x, sign):
        if isinstance(node, _Leaf):
            if sign > 0:
                insort(node.keys, x)
            else:
                del node.keys[bisect_left(node.keys, x)]
            if node.size > max(2 * node.built, LEAF_CAP):
                return self._build(node.keys)
            return node
        i = bisect_right(node.seps, x)
        node.children[i] = self._update(node.children[i], x, sign)
        node.sizes[i] += sign
        node.size += sign
        if node.size >= 2 * node.built or node.size * 2 <= node.built:
            return self._build(self._keys(node, []))
        if self._rebalance(node, i):
            if len(node.children) == 1:
                return node.children[0]
            self._refresh(node)
            return node
        node.drift += 1
        if node.drift >= self.drift_limit(node.size):
            self._refresh(node)
        return node

    def _rebalance(self, node, i) -> bool:
        """Split child ``i`` above ``2L`` or merge it below ``L/2``; True if children changed."""
        target = self.child_target(node.size)
        size = node.sizes[i]
        if size > 2 * target:
            keys = self._keys(node.children[i], [])
            cuts = _cuts(keys, 2)
            if not cuts:
                return False
            p = cuts[0]
            node.children[i:i + 1] = [self._build(keys[:p]), self._build(keys[p:])]
            node.sizes[i:i + 1] = [p, len(keys) - p]
            node.seps.insert(i, keys[p])
            return True
        if size * 2 < target and len(node.children) > 1:
            j = i + 1 if i + 1 < len(node.children) else i - 1
            lo, hi = min(i, j), max(i, j)
            keys = self._keys(node.children[lo], []) + self._keys(node.children[hi], [])
            del node.seps[lo]
            if len(keys) > 2 * target:
                cuts = _cuts(keys, 2)
                if cuts:
                    p = cuts[0]
                    node.children[lo:hi + 1] = [self._build(keys[:p]), self._build(keys[p:])]
                    node.sizes[lo:hi + 1] = [p, len(keys) - p]
                    node.seps.insert(lo, keys[p])
                    return True
            node.children[lo:hi + 1] = [self._build(keys)]
            node.sizes[lo:hi + 1] = [len(keys)]
            return True
        return False

    # queries

    def approx_count_bounded(self, a: int, b: int):
        """``(count, bound)``: the bound is the drift of every snapshot read (0 if exact)."""
        a, b = int(a), int(b)
        if a > b:
            return 0, 0
        span = self.groups.span(a, b)
        if span is None:
            return 0, 0
        ia, ib = span
        if ib - ia <= 1:
            return self.groups.count(a, b, ia, ib), 0
        est, bound = self._range(self.root, a, b)
        return max(0, est), bound

    def approx_count(self, a: int, b: int) -> int:
        return self.approx_count_bounded(a, b)[0]

    def _range(self, node, a, b):
        while not isinstance(node, _Leaf):
            ia = bisect_right(node.seps, a)
            ib = bisect_right(node.seps, b)
            if ia != ib:
                break
            node = node.children[ia]
        if isinstance(node, _Leaf):
            return bisect_right(node.keys, b) - bisect_left(node.keys, a), 0
        est, bound = 0, 0
        if ib - ia >= 2:
            est += node.snapshot[ib] - node.snapshot[ia + 1]
            bound += node.drift
        e1, b1 = self._suffix(node.children[ia], a)
        e2, b2 = self._prefix(node.children[ib], b)
        return est + e1 + e2, bound + b1 + b2

    def _suffix(self, node, a):
        est = bound = 0
        while not isinstance(node, _Leaf):
            i = bisect_right(node.seps, a)
            if i + 1 < len(node.children):
                est += node.snapshot[-1] - node.snapshot[i + 1]
                bound += node.drift
            node = node.children[i]
        return est + len(node.keys) - bisect_left(node.keys, a), bound

    def _prefix(self, node, b):
        est = bound = 0
        while not isinstance(node, _Leaf):
            i = bisect_right(node.seps, b)
            if i > 0:
                est += node.snapshot[i]
                bound += node.drift
            node = node.children[i]
        return est + bisect_right(node.keys, b), bound

    def exact_count(self, a: int, b: int) -> int:
        span = self.groups.span(int(a), int(b))
        return 0 if span is None else self.groups.count(a, b, *span)

    # maintenance and audits

    def refresh_all(self) -> None:
        """Force exact snapshots everywhere (the tree then counts exactly)."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, _Node):
                self._refresh(node)
                stack.extend(node.children)

    def keys(self) -> list:
        """In-order traversal of the tree."""
        return self._keys(self.root, [])

    def nodes(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            if isinstance(node, _Node):
                stack.extend(node.children)

    def node_count(self) -> int:
        return sum(1 for _ in self.nodes())

    def max_path_drift(self) -> int:
        """Largest possible query bound: twice the heaviest root-to-leaf drift sum."""
        def walk(node):
            if isinstance(node, _Leaf):
                return 0
            return node.drift + max(walk(ch) for ch in node.children)
        return 2 * walk(self.root)

    def _longest_run(self, node) -> int:
        keys = self._keys(node, [])
        best = run = 0
        for i, k in enumerate(keys):
            run = run + 1 if i and keys[i - 1] == k else 1
            best = max(best, run)
        return best

    def audit(self, slack: float = 4.0) -> list:
        """Structural invariant check; returns a list of violation messages."""
        bad = []
        if self.keys() != list(self.groups):
            bad.append("tree and groups disagree")
        for node in self.nodes():
            if isinstance(node, _Leaf):
                continue
            true_sizes = [ch.size for ch in node.children]
            if true_sizes != node.sizes or sum(true_sizes) != node.size:
                bad.append("child sizes out of date")
            limit = self.drift_limit(node.size)
            if node.drift and node.drift >= limit:
                bad.append(f"drift {node.drift} >= {limit:.3f}")
            snap = node.snapshot
            if len(snap) != len(node.children) + 1 or any(x > y for x, y in zip(snap, snap[1:])):
                bad.append("snapshot shape")
            else:
                exact = [0]
                for s in true_sizes:
                    exact.append(exact[-1] + s)
                for i in range(len(exact)):
                    for j in range(i, len(exact)):
                        if abs((snap[j] - snap[i]) - (exact[j] - exact[i])) > node.drift:
                            bad.append("snapshot drift exceeds counter")
                            break
            # a run of equal keys cannot be cut, so it and its neighbours are exempt
            target = self.child_target(node.size)
            runs = [self._longest_run(ch) * 2 * slack >= target for ch in node.children]
            for i, s in enumerate(true_sizes):
                if runs[i] or (i > 0 and runs[i - 1]) or (i + 1 < len(runs) and runs[i + 1]):
                    continue
                if s > slack * 2 * target:
                    bad.append(f"child of {s} above {2 * target}")
                elif len(node.children) > 1 and s * 2 * slack < target:
                    bad.append(f"child of {s} below {target / 2}")
        g = self.groups
        for grp in g.groups:
            if len(grp) > 2 * g.g or (len(g.groups) > 1 and len(grp) * 2 < g.g):
                bad.append(f"group of {len(grp)} outside [{g.g / 2}, {2 * g.g}]")
        return bad


def new(c: float, capacity_hint: int, group_size: int | None = None) -> ExponentialTree:
    return ExponentialTree(c, capacity_hint, group_size)
