"""Near-neighbor index under the discrete Fréchet distance when the query
size is only known at query time.

Each vertex ``p_j`` of an indexed curve gets the set ``g_j`` of lattice
points within ``3(1 + e/2) delta`` of it.  Every complete path through
``g_1, ..., g_l`` (one point per vertex) becomes a bucket key.  A query is
rounded onto the lattice, simplified with ``mu = 2(1 + e/2) delta`` and
looked up; the internal slack ``e = eps / 3`` makes the returned curves
lie within ``(5 + eps) delta``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .anns_asym import as_curves
from .errors import BudgetExceeded, DimensionMismatch, InvalidParameter
from .geometry import simplify_indices, vertices_of
from .grid import DEFAULT_BUDGET, ball_lattice_points, floor_index


@dataclass(eq=False)
class SymIndex:
    delta: float
    eps: float
    dim: int
    buckets: dict
    curve_lengths: dict
    curves: dict = field(repr=False)

    @property
    def eps_internal(self):
        return self.eps / 3.0

    @property
    def cell(self):
        return self.eps_internal * self.delta / (2.0 * math.sqrt(max(self.dim, 1)))

    @property
    def r_outer(self):
        return 3.0 * (1.0 + self.eps_internal / 2.0) * self.delta

    @property
    def r_marked(self):
        return (1.0 + self.eps_internal / 2.0) * self.delta

    @property
    def mu(self):
        return 2.0 * (1.0 + self.eps_internal / 2.0) * self.delta

    def capacities(self):
        return {
            "bucket_count": len(self.buckets),
            "stored_ids": sum(len(v) for v in self.buckets.values()),
            "cell": self.cell,
            "r_outer": self.r_outer,
        }


def vertex_point_sets(vertices, r_outer, cell):
    return [sorted(ball_lattice_points(p, r_outer, cell)) for p in vertices]


def build_sym_index(curves, delta, eps, budget=DEFAULT_BUDGET):
    if not delta > 0 or not eps > 0:
        raise InvalidParameter("delta and eps must be positive")
    curves = list(curves)
    if not curves:
        # nothing indexed: every query misses, whatever its dimension
        return SymIndex(float(delta), float(eps), 0, {}, {}, {})
    curves = as_curves(curves)
    dim = curves[0].dim
    index = SymIndex(
        delta=float(delta),
        eps=float(eps),
        dim=dim,
        buckets={},
        curve_lengths={c.id: len(c) for c in curves},
        curves={c.id: c.vertices for c in curves},
    )
    # size every curve first so an oversized one fails before any work
    point_sets = {}
    for P in curves:
        sets = vertex_point_sets(P.vertices, index.r_outer, index.cell)
        required = math.prod(len(s) for s in sets)
        if required > budget:
            raise BudgetExceeded(required, budget, curve_id=P.id)
        point_sets[P.id] = sets
    # inserting in id order keeps every bucket's id tuple sorted
    buckets = {}
    get = buckets.get
    for P in sorted(curves, key=lambda c: c.id):
        pid = (P.id,)
        for path in itertools.product(*point_sets[P.id]):
            ids = get(path)
            if ids is None:
                buckets[path] = pid
            elif ids[-1] != P.id:
                buckets[path] = ids + pid
    index.buckets = buckets
    return index


def query_path(index, Q, counter=None):
    """Rounded and simplified lattice path used as the bucket key for ``Q``."""
    Q = vertices_of(Q)
    if index.dim and Q.shape[1] != index.dim:
        raise DimensionMismatch(f"query dimension {Q.shape[1]}, index {index.dim}")
    lattice = floor_index(Q / index.cell)
    if counter is not None:
        counter.roundings += lattice.size
    kept = simplify_indices(lattice * index.cell, index.mu, keep_last=False)
    return tuple(tuple(int(c) for c in lattice[i]) for i in kept)


def query_sym(index, Q, counter=None):
    """Ids of curves whose bucket matches the simplified rounded query."""
    key = query_path(index, Q, counter)
    if counter is not None:
        counter.keys += 1
        counter.lookups += 1
    return index.buckets.get(key, ())
