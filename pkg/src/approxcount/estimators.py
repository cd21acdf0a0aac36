"""scikit-learn style front ends.

``fit`` takes raw integer points (any coordinates, duplicates allowed),
reduces them to rank space and builds the structure; ``predict`` maps raw
queries the same way and returns estimates.  ``predict_bounds`` also returns
the additive error each estimate is guaranteed to be within.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .dyn1d import ExponentialTree
from .rankspace import PointSet, map_point, map_query, reduce_to_rank_space
from .slabgrid import Adaptive, FixedError


def _regime(kind: str, c: float):
    if kind == "adaptive":
        return Adaptive()
    if kind == "fixed":
        return FixedError(c=c)
    raise ValueError(f"unknown regime {kind!r}; use 'adaptive' or 'fixed'")


def _int_array(X, **kw):
    X = check_array(X, dtype=None, **kw)
    if not np.issubdtype(X.dtype, np.integer):
        if not np.all(np.mod(X, 1) == 0):
            raise ValueError("coordinates must be integers")
    return X.astype(np.int64)


class DominanceCounter(BaseEstimator):
    """Approximate count of training points dominating each query row (``p >= q``).

    Two columns use the boundary structure, three columns the level structure.
    """

    def __init__(self, regime="adaptive", rho=0.5, c=0.5):
        self.regime = regime
        self.rho = rho
        self.c = c

    def fit(self, X, y=None):
        X = _int_array(X, ensure_min_samples=1)
        if X.shape[1] not in (2, 3):
            raise ValueError("DominanceCounter needs 2 or 3 columns")
        regime = _regime(self.regime, self.c)
        s, self.rank_map_ = reduce_to_rank_space(X)
        self.n_features_in_ = X.shape[1]
        self.n_ = s.n
        if X.shape[1] == 2:
            from .approx2d import Dominance2D

            self.structure_ = Dominance2D(s, regime)
        else:
            from .level3d import Dominators3D

            self.structure_ = Dominators3D(s, regime)
        return self

    def predict_bounds(self, Q):
        check_is_fitted(self, "structure_")
        Q = _int_array(Q)
        if Q.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {Q.shape[1]}")
        out = np.array([self.structure_.count(map_point(q, self.rank_map_), self.rho) for q in Q.tolist()],
                       dtype=np.int64).reshape(-1, 2)
        return out[:, 0], out[:, 1]

    def predict(self, Q):
        return self.predict_bounds(Q)[0]


class RangeCounter(BaseEstimator):
    """Approximate count of training points inside closed boxes.

    Boxes are passed as an array of shape ``(m, 2 * d)``: ``lo_1, hi_1, lo_2,
    hi_2, ...``.  ``exact=True`` swaps in an exact dominance counter.
    """

    def __init__(self, regime="adaptive", rho=0.5, c=0.5, exact=False):
        self.regime = regime
        self.rho = rho
        self.c = c
        self.exact = exact

    def fit(self, X, y=None):
        from .reduce import DecompositionTree, dominance2d_factory, exact_factory, levelset3d_factory

        X = _int_array(X, ensure_min_samples=1)
        if X.shape[1] not in (2, 3):
            raise ValueError("RangeCounter needs 2 or 3 columns")
        s, self.rank_map_ = reduce_to_rank_space(X)
        self.n_features_in_ = X.shape[1]
        if self.exact:
            factory = exact_factory
        else:
            regime = _regime(self.regime, self.c)
            factory = dominance2d_factory(regime) if X.shape[1] == 2 else levelset3d_factory(regime)
        self.tree_ = DecompositionTree(s, factory)
        return self

    def predict_bounds(self, R):
        check_is_fitted(self, "tree_")
        R = _int_array(R)
        d = self.n_features_in_
        if R.shape[1] != 2 * d:
            raise ValueError(f"expected {2 * d} columns (lo, hi per axis), got {R.shape[1]}")
        est, bound = [], []
        for row in R.tolist():
            rect = map_query([(row[2 * i], row[2 * i + 1]) for i in range(d)], self.rank_map_)
            e, b, _ = self.tree_.query(rect, self.rho)
            est.append(e)
            bound.append(b)
        return np.array(est, dtype=np.int64), np.array(bound, dtype=np.int64)

    def predict(self, R):
        return self.predict_bounds(R)[0]


class DynamicCounter(BaseEstimator):
    """Dynamic 1-D counter: ``fit``/``partial_fit`` insert, ``remove`` deletes,
    ``predict`` answers intervals given as rows ``(a, b)``."""

    def __init__(self, c=2.0, capacity_hint=1 << 16, group_size=None):
        self.c = c
        self.capacity_hint = capacity_hint
        self.group_size = group_size

    def fit(self, X, y=None):
        self.tree_ = ExponentialTree(self.c, self.capacity_hint, self.group_size)
        return self.partial_fit(X)

    def partial_fit(self, X, y=None):
        if not hasattr(self, "tree_"):
            self.tree_ = ExponentialTree(self.c, self.capacity_hint, self.group_size)
        X = _int_array(np.asarray(X).reshape(-1, 1), ensure_min_samples=0)
        for x in X[:, 0].tolist():
            self.tree_.insert(x)
        return self

    def remove(self, X):
        check_is_fitted(self, "tree_")
        for x in np.asarray(X, dtype=np.int64).ravel().tolist():
            self.tree_.delete(x)
        return self

    def predict_bounds(self, intervals):
        check_is_fitted(self, "tree_")
        iv = _int_array(intervals, ensure_min_samples=0)
        if iv.shape[1] != 2:
            raise ValueError("intervals need two columns (a, b)")
        out = np.array([self.tree_.approx_count_bounded(a, b) for a, b in iv.tolist()], dtype=np.int64)
        out = out.reshape(-1, 2)
        return out[:, 0], out[:, 1]

    def predict(self, intervals):
        return self.predict_bounds(intervals)[0]
