"""Command line harness: ``gen``, ``verify``, ``bench`` and ``audit``.

Queries are drawn in the file's own coordinates and checked against a
linear scan over the raw points, so rank reduction and query snapping are
part of every end-to-end check.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from bisect import bisect_left, bisect_right

import numpy as np

from . import oracle
from .rankspace import PointSet, map_point, map_query, read_points, reduce_to_rank_space, write_points

DISTS = ("uniform", "clustered", "permutation-grid")
UNIVERSE = 1 << 20


def generate(d: int, n: int, dist: str, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    if dist == "permutation-grid":
        return np.column_stack([rng.permutation(n) + 1 for _ in range(d)]).reshape(n, d)
    if dist == "uniform":
        return rng.integers(0, UNIVERSE, size=(n, d))
    if dist == "clustered":
        k = max(1, int(np.sqrt(n)) // 2)
        centers = rng.integers(0, UNIVERSE, size=(k, d))
        spread = UNIVERSE / (8 * k)
        pts = centers[rng.integers(0, k, size=n)] + rng.normal(0, spread, size=(n, d))
        return np.clip(np.rint(pts), 0, UNIVERSE - 1).astype(np.int64)
    raise ValueError(f"unknown distribution {dist!r}")


# structures: how to build one, ask it, and ask the oracle

class _Runner:
    dim = 2
    shape = "dominance"

    def __init__(self, raw: np.ndarray, rho: float, c: float | None):
        self.raw = raw
        self.rho = rho
        self.c = c
        self.s, self.rank_map = reduce_to_rank_space(raw, dim=self.dim)
        self.build()

    def queries(self, rng, count):
        if len(self.raw):
            lo = self.raw.min(axis=0) - 1
            hi = self.raw.max(axis=0) + 1
        else:
            lo, hi = np.zeros(self.dim, dtype=np.int64), np.ones(self.dim, dtype=np.int64)
        cols = [rng.integers(lo[i], hi[i] + 1, size=count) for i in range(self.dim)]
        if self.shape == "rectangle" or self.shape == "interval":
            cols2 = [rng.integers(lo[i], hi[i] + 1, size=count) for i in range(self.dim)]
            out = []
            for i in range(self.dim):
                out += [np.minimum(cols[i], cols2[i]), np.maximum(cols[i], cols2[i])]
            return np.column_stack(out).tolist()
        return np.column_stack(cols).tolist()

    def exact(self, q) -> int:
        if self.shape == "dominance":
            return oracle.dominators(self.raw, q)
        if self.shape == "dominated":
            return oracle.dominated(self.raw, q)
        rect = [(q[2 * i], q[2 * i + 1]) for i in range(self.dim)]
        return oracle.exact_count(self.raw, rect)

    def audit(self) -> list:
        return []

    def space(self) -> dict:
        return {}


def _fixed(c):
    from .slabgrid import FixedError

    return FixedError(c=0.5 if c is None else c)


class _Slab(_Runner):
    fixed = False

    def build(self):
        from .slabgrid import Adaptive, SlabTree

        self.tree = SlabTree(self.s, _fixed(self.c) if self.fixed else Adaptive())

    def ask(self, q):
        lq = map_point(q, self.rank_map)
        return self.tree.query(lq) if self.fixed else self.tree.query_rho(lq, self.rho)

    def space(self):
        return {"table_entries": self.tree.table_entries, "stored_points": self.tree.stored_points}


class _Slab2(_Slab):
    dim = 2


class _Slab3(_Slab):
    dim = 3


class _Slab2Fixed(_Slab2):
    fixed = True


class _Dom2(_Runner):
    fixed = False

    def build(self):
        from .approx2d import Dominance2D

        self.d = Dominance2D(self.s, _fixed(self.c) if self.fixed else None)

    def ask(self, q):
        return self.d.count(map_point(q, self.rank_map), self.rho)

    def audit(self):
        return _boundary_audit(self.s, self.d.bs)

    def space(self):
        return {"total_entries": self.d.total_entries, "stored_points": self.d.stored_points,
                "corners": self.d.bs.corner_count()}


class _Dom2Fixed(_Dom2):
    fixed = True


class _Boundary(_Runner):
    """Constant-factor bracket only: the estimate is the bracket's midpoint."""

    def build(self):
        from .boundary2d import BoundarySet

        self.bs = BoundarySet(self.s)
        self.top = max((j for j, b in enumerate(self.bs.boundaries) if not b.degenerate), default=-1)

    def ask(self, q):
        lq = map_point(q, self.rank_map)
        if max(lq) > self.s.n:
            return 0, 0
        hit = self.bs.min_dominated_index((max(lq[0], 1), max(lq[1], 1)))
        if hit is None:
            lo, hi = 2 ** self.top + 1, self.s.n
        elif hit[0] == 0:
            lo, hi = 0, 2
        else:
            lo, hi = 2 ** (hit[0] - 1) + 1, 2 ** (hit[0] + 1)
        return (lo + hi) // 2, (hi - lo + 1) // 2

    def audit(self):
        return _boundary_audit(self.s, self.bs)

    def space(self):
        return {"corners": self.bs.corner_count(), "boundaries": len(self.bs)}


class _Level(_Runner):
    dim = 3
    shape = "dominated"
    fixed = False

    def build(self):
        from .level3d import LevelSet3D

        self.ls = LevelSet3D(self.s, _fixed(self.c) if self.fixed else None)

    def ask(self, q):
        return self.ls.count(map_point(q, self.rank_map, upper=True), self.rho)

    def audit(self):
        bad = []
        for j, level in enumerate(self.ls.levels):
            if not oracle.verify_level(self.s, level, level.t, 2):
                bad.append(f"level {j} (t={level.t}) fails verification")
            if not level.is_antichain():
                bad.append(f"level {j} is not an antichain")
        return bad

    def space(self):
        return {"apexes": self.ls.apex_count, "stored_points": self.ls.stored_points,
                "table_entries": self.ls.table_entries}


class _LevelFixed(_Level):
    fixed = True


class _Range(_Runner):
    shape = "rectangle"
    fixed = False

    def build(self):
        from .reduce import DecompositionTree, dominance2d_factory, levelset3d_factory

        regime = _fixed(self.c) if self.fixed else None
        make = dominance2d_factory(regime) if self.dim == 2 else levelset3d_factory(regime)
        self.tree = DecompositionTree(self.s, make)

    def ask(self, q):
        rect = map_query([(q[2 * i], q[2 * i + 1]) for i in range(self.dim)], self.rank_map)
        est, bound, _ = self.tree.query(rect, self.rho)
        return est, bound

    def space(self):
        return {"stored_points": self.tree.stored_points, "subsets": self.tree.subsets}


class _Range2(_Range):
    dim = 2


class _Range3(_Range):
    dim = 3


class _Dyn(_Runner):
    dim = 1
    shape = "interval"

    def __init__(self, raw, rho, c):
        self.raw = raw
        self.rho = rho
        self.c = 2.0 if c is None else c
        self.build()

    def build(self):
        from .dyn1d import ExponentialTree

        values = self.raw[:, 0].tolist()
        self.tree = ExponentialTree(self.c, max(4, len(values)))
        for v in values:
            self.tree.insert(v)
        self.sorted = sorted(values)

    def ask(self, q):
        return self.tree.approx_count_bounded(q[0], q[1])

    def exact(self, q):
        return bisect_right(self.sorted, q[1]) - bisect_left(self.sorted, q[0])

    def audit(self):
        return self.tree.audit()

    def space(self):
        return {"nodes": self.tree.node_count(), "group_size": self.tree.g}


STRUCTURES = {
    "dyn1d": _Dyn,
    "boundary2d": _Boundary,
    "slabtree2": _Slab2,
    "slabtree2-fixed": _Slab2Fixed,
    "slabtree3": _Slab3,
    "dominance2d": _Dom2,
    "dominance2d-fixed": _Dom2Fixed,
    "level3d": _Level,
    "level3d-fixed": _LevelFixed,
    "range2d": _Range2,
    "range3d": _Range3,
}


def _boundary_audit(s: PointSet, bs) -> list:
    bad = []
    for j, b in enumerate(bs.boundaries):
        if not oracle.verify_boundary(s, b, b.t, bs.alpha):
            bad.append(f"boundary {j} (t={b.t}) fails verification")
    rng = np.random.default_rng(0)
    for q in rng.integers(1, max(2, s.n + 1), size=(200, 2)).tolist():
        got, want = bs.min_dominated_index(q), bs.min_dominated_index_naive(q)
        if (got is None) != (want is None) or (got and (got[0] != want[0] or got[1][0] > q[0] or got[1][1] > q[1])):
            bad.append(f"index disagrees with scan at {tuple(q)}")
    for s_, entries in enumerate(bs.L):
        for j, (xs, _) in entries.items():
            if any((x - 1) // bs.width != s_ and s_ != len(bs.L) - 1 for x in xs):
                bad.append(f"corner registered in the wrong interval {s_}")
    return bad


# commands

def _load(parser, args):
    cls = STRUCTURES[args.structure]
    try:
        d, rows = read_points(args.infile)
    except (OSError, ValueError) as exc:
        parser.error(str(exc))
    if d != cls.dim:
        parser.error(f"structure {args.structure} needs {cls.dim}-D points, file has {d}-D")
    raw = np.array(rows, dtype=np.int64).reshape(-1, d)
    t0 = time.perf_counter()
    runner = cls(raw, getattr(args, "rho", 0.5), getattr(args, "c", None))
    return runner, (time.perf_counter() - t0) * 1e3


def _rows(runner, count, seed, timing=True):
    rng = np.random.default_rng(seed)
    for i, q in enumerate(runner.queries(rng, count)):
        t0 = time.perf_counter_ns()
        est, bound = runner.ask(q)
        dt = time.perf_counter_ns() - t0
        k = runner.exact(q)
        yield i, q, k, int(est), int(bound), dt if timing else 0


def cmd_gen(parser, args):
    if args.d not in (1, 2, 3):
        parser.error("--d must be 1, 2 or 3")
    if args.n < 0:
        parser.error("--n must be non-negative")
    pts = generate(args.d, args.n, args.dist, args.seed)
    write_points(args.out, args.d, pts.tolist())
    return 0


def cmd_verify(parser, args):
    runner, _ = _load(parser, args)
    bad = 0
    for i, q, k, est, bound, _ in _rows(runner, args.queries, args.seed, timing=False):
        if abs(est - k) > bound:
            bad += 1
            print(f"violation query={i} q={q} exact={k} estimate={est} bound={bound}")
    print(f"{args.structure}: {args.queries} queries, {bad} violations")
    return 1 if bad else 0


def cmd_bench(parser, args):
    runner, build_ms = _load(parser, args)
    if args.no_timing:
        build_ms = 0.0
    with open(args.csv, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["query_id", "k_exact", "estimate", "bound", "abs_error", "build_ms", "query_ns"])
        for i, _, k, est, bound, dt in _rows(runner, args.queries, args.seed, timing=not args.no_timing):
            w.writerow([i, k, est, bound, abs(est - k), f"{build_ms:.3f}", dt])
    return 0


def cmd_audit(parser, args):
    runner, build_ms = _load(parser, args)
    bad = runner.audit()
    for msg in bad:
        print(f"violation {msg}")
    for key, val in runner.space().items():
        print(f"{key} {val}")
    print(f"{args.structure}: {len(bad)} violations")
    return 1 if bad else 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="approxcount", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a random point file")
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--dist", choices=DISTS, default="uniform")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    def common(sp):
        sp.add_argument("--structure", choices=sorted(STRUCTURES), required=True)
        sp.add_argument("--in", dest="infile", required=True)
        sp.add_argument("--c", type=float, default=None,
                        help="error exponent: in (0,1) for fixed regimes, > 1 for dyn1d")

    v = sub.add_parser("verify", help="check every estimate against the oracle")
    common(v)
    v.add_argument("--queries", type=int, default=1000)
    v.add_argument("--rho", type=float, default=0.5)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="per-query error and timing as CSV")
    common(b)
    b.add_argument("--queries", type=int, default=1000)
    b.add_argument("--rho", type=float, default=0.5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--csv", required=True)
    b.add_argument("--no-timing", action="store_true", help="write zeros in the timing columns")
    b.set_defaults(func=cmd_bench)

    a = sub.add_parser("audit", help="structural invariant walks and space counts")
    common(a)
    a.set_defaults(func=cmd_audit)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if getattr(args, "rho", 0.5) is not None and not 0 < getattr(args, "rho", 0.5) < 1:
        parser.error("--rho must lie in (0, 1)")
    if getattr(args, "queries", 0) < 0:
        parser.error("--queries must be non-negative")
    return args.func(parser, args)


if __name__ == "__main__":
    sys.exit(main())
