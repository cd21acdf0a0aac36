"""Approximate orthogonal range counting with additive error guarantees."""

from .approx2d import Dominance2D
from .boundary2d import BoundarySet, StaircaseBoundary, build_boundary, build_boundary_set
from .dyn1d import ExponentialTree
from .level3d import ApproxLevel, Dominators3D, LevelSet3D, build_level, count3, dominated_by_level
from .rankspace import PointSet, RankMap, map_query, reduce_to_rank_space, reflect
from .reduce import DecompositionTree, build_general, exact_factory, query_general
from .slabgrid import Adaptive, FixedError, SlabTree2, SlabTree3

__all__ = [
    "Adaptive",
    "ApproxLevel",
    "BoundarySet",
    "DecompositionTree",
    "Dominance2D",
    "Dominators3D",
    "ExponentialTree",
    "FixedError",
    "LevelSet3D",
    "PointSet",
    "RankMap",
    "SlabTree2",
    "SlabTree3",
    "StaircaseBoundary",
    "build_boundary",
    "build_boundary_set",
    "build_general",
    "build_level",
    "count3",
    "dominated_by_level",
    "exact_factory",
    "map_query",
    "query_general",
    "reduce_to_rank_space",
    "reflect",
]
