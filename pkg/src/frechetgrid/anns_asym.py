"""Near-neighbor index for curves when the query size ``k`` is fixed up front.

Every length-``k`` sequence of lattice points of a bounded grid is a
candidate proxy for a query.  At build time each such grid path gets a
bucket holding the curves within ``(1 + eps/2) delta`` of it; a query is
answered by rounding its vertices onto the lattice and reading one bucket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import freespace
from .errors import BudgetExceeded, DimensionMismatch, InvalidParameter, QuerySizeMismatch
from .geometry import Curve, approx_diameter, frechet_decide, vertices_of
from .grid import (
    DEFAULT_BUDGET,
    Grid,
    build_grid,
    enumerate_paths,
    lattice_near_polyline,
    round_to_lattice,
)

METRICS = ("continuous", "discrete")


@dataclass(frozen=True)
class QueryOutcome:
    """Curve ids found for a query, or a rejection certifying that every
    indexed curve is farther than ``delta`` from the query."""

    ids: tuple = ()
    rejected: bool = False


REJECTED = QueryOutcome(rejected=True)


@dataclass(eq=False)
class AsymIndex:
    delta: float
    eps: float
    k: int
    metric: str
    grid: Grid
    diameter_estimate: float
    buckets: dict
    curves: dict = field(repr=False)

    @property
    def dim(self):
        return self.grid.dim

    @property
    def radius(self):
        return (1.0 + self.eps / 2.0) * self.delta

    def capacities(self):
        R = self.grid.cells_per_axis
        points = (R + 1) ** self.dim
        return {
            "cells_per_axis": R,
            "lattice_points": points,
            "path_count": points ** self.k,
            "bucket_count": len(self.buckets),
            "stored_ids": sum(len(v) for v in self.buckets.values()),
        }


def grid_params(delta, eps, dim, diameter):
    """Side ``L'`` and cell ``ell`` of the bounded grid."""
    ell = eps * delta / (2.0 * math.sqrt(dim))
    L = 4.0 * delta if diameter <= delta else 4.0 * delta * diameter / eps
    return 2.0 * L, ell


def as_curves(curves):
    """Normalise a collection of curves / vertex arrays into ``Curve`` objects."""
    out = [c if isinstance(c, Curve) else Curve(str(i), c) for i, c in enumerate(curves)]
    if not out:
        raise InvalidParameter("need at least one curve")
    dims = {c.dim for c in out}
    if len(dims) != 1:
        raise DimensionMismatch(f"curves have mixed dimensions {sorted(dims)}")
    ids = [c.id for c in out]
    if len(set(ids)) != len(ids):
        raise InvalidParameter("curve ids must be unique")
    return out


def check_params(k, delta, eps):
    if k < 1:
        raise InvalidParameter("k must be >= 1")
    if not delta > 0:
        raise InvalidParameter("delta must be positive")
    if not 0 < eps <= delta:
        raise InvalidParameter(f"need 0 < eps <= delta, got eps={eps}, delta={delta}")


def setup_grid(curves, k, delta, eps, budget):
    """Diameter estimate and grid shared by the asymmetric and subtrajectory
    builders; raises ``BudgetExceeded`` before any enumeration."""
    check_params(k, delta, eps)
    allv = np.concatenate([c.vertices for c in curves])
    diam = approx_diameter(allv, seed=0)
    L_prime, ell = grid_params(delta, eps, allv.shape[1], diam)
    grid = build_grid(allv[0], L_prime, ell)
    required = grid.point_count ** k
    if required > budget:
        raise BudgetExceeded(required, budget)
    return grid, diam


def build_asym_index(curves, k, delta, eps, budget=DEFAULT_BUDGET, metric="continuous",
                     exhaustive=False):
    """Build the bucket map over all length-``k`` grid paths.

    With ``exhaustive=True`` every grid path is enumerated and each curve is
    tested by a full Fréchet decision; the default search prunes grid-path
    prefixes whose free space is already blocked and yields the same buckets.
    """
    if metric not in METRICS:
        raise InvalidParameter(f"metric must be one of {METRICS}")
    curves = as_curves(curves)
    grid, diam = setup_grid(curves, k, delta, eps, budget)
    r = (1.0 + eps / 2.0) * delta
    buckets = {}

    if exhaustive:
        lattice = [tuple(int(c) for c in p) for p in grid.lattice_points()]
        for path in enumerate_paths([lattice] * k, budget):
            C = grid.embed(path)
            for P in curves:
                if frechet_decide(P, C, r, metric):
                    buckets.setdefault(path, []).append(P.id)
    else:
        mode = freespace.WHOLE if metric == "continuous" else freespace.DISCRETE
        for P in curves:
            lat = lattice_near_polyline(grid, P.vertices, r, vertices_only=(mode == freespace.DISCRETE))
            found = freespace.matching_paths(P.vertices, grid.embed(lat), r, k, mode)
            pts = [tuple(int(c) for c in p) for p in lat]
            for row in found.tolist():
                buckets.setdefault(tuple(pts[i] for i in row), []).append(P.id)

    return AsymIndex(
        delta=float(delta),
        eps=float(eps),
        k=int(k),
        metric=metric,
        grid=grid,
        diameter_estimate=diam,
        buckets={key: tuple(sorted(ids)) for key, ids in buckets.items()},
        curves={c.id: c.vertices for c in curves},
    )


def round_query(grid, Q, counter=None):
    """Lattice path of ``Q``'s vertices or ``None`` if any falls outside."""
    path = []
    for q in Q:
        lp = round_to_lattice(grid, q, counter)
        if lp is None:
            return None
        path.append(lp)
    return tuple(path)


def query_asym(index, Q, counter=None):
    """Curves within ``(1 + eps) delta`` of ``Q``, guaranteed to include all
    curves within ``delta``; ``REJECTED`` if ``Q`` leaves the grid."""
    Q = vertices_of(Q)
    if len(Q) != index.k:
        raise QuerySizeMismatch(f"query has {len(Q)} vertices, index expects {index.k}")
    if Q.shape[1] != index.dim:
        raise DimensionMismatch(f"query dimension {Q.shape[1]}, index {index.dim}")
    path = round_query(index.grid, Q, counter)
    if path is None:
        return REJECTED
    if counter is not None:
        counter.keys += 1
        counter.lookups += 1
    return QueryOutcome(ids=index.buckets.get(path, ()))
