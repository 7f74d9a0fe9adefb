"""Axis-aligned lattices, rounding, grid-path keys and path enumeration."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch, InvalidParameter, OutOfBounds

DEFAULT_BUDGET = 10_000_000

# fractional lattice coordinates this close to an integer snap onto it, so
# embedded lattice points round back to themselves
SNAP_TOL = 1e-9


@dataclass
class OpCounter:
    """Tally of the primitive steps a query performs."""

    roundings: int = 0
    clamps: int = 0
    keys: int = 0
    lookups: int = 0

    def as_dict(self):
        return {"roundings": self.roundings, "clamps": self.clamps,
                "keys": self.keys, "lookups": self.lookups}


@dataclass(frozen=True, eq=False)
class Grid:
    """Bounded lattice of pitch ``cell`` covering the hypercube of side
    ``side`` centred at ``origin``.

    Lattice point ``a`` (integers in ``[0, R]``) sits at
    ``min_corner + cell * a`` with ``R = ceil(side / cell)``.
    """

    origin: np.ndarray
    side: float
    cell: float

    @property
    def dim(self):
        return len(self.origin)

    @property
    def cells_per_axis(self):
        return math.ceil(self.side / self.cell)

    @property
    def min_corner(self):
        return self.origin - self.side / 2.0

    @property
    def max_corner(self):
        """Far corner of the lattice extent (at least ``min_corner + side``)."""
        return self.min_corner + self.cell * self.cells_per_axis

    @property
    def point_count(self):
        return (self.cells_per_axis + 1) ** self.dim

    def lattice_points(self):
        """All lattice points as an ``(N, d)`` int array, lexicographic order."""
        axis = np.arange(self.cells_per_axis + 1)
        mesh = np.meshgrid(*([axis] * self.dim), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def embed(self, coords):
        """Positions of integer lattice coordinates (vectorised)."""
        return self.min_corner + self.cell * np.asarray(coords, dtype=float)


def build_grid(center, L_prime, ell):
    center = np.array(center, dtype=float).reshape(-1)
    if not (ell > 0 and L_prime > 0):
        raise InvalidParameter("grid side and cell must be positive")
    if L_prime < ell:
        raise InvalidParameter(f"grid side {L_prime} is smaller than cell {ell}")
    center.setflags(write=False)
    return Grid(center, float(L_prime), float(ell))


def floor_index(x):
    """``floor`` that snaps values within ``SNAP_TOL`` of an integer onto it."""
    x = np.asarray(x, dtype=float)
    near = np.rint(x)
    return np.where(np.abs(x - near) <= SNAP_TOL, near, np.floor(x)).astype(np.int64)


def round_to_lattice(g, q, counter=None):
    """Lower-corner lattice point of the cell containing ``q``, or ``None``
    when ``q`` lies outside the (closed) lattice extent."""
    q = np.asarray(q, dtype=float).reshape(-1)
    if len(q) != g.dim:
        raise DimensionMismatch(f"point has dimension {len(q)}, grid has {g.dim}")
    if np.any(q < g.min_corner) or np.any(q > g.max_corner):
        return None
    a = floor_index((q - g.min_corner) / g.cell)
    if counter is not None:
        counter.roundings += g.dim
    return tuple(int(x) for x in np.clip(a, 0, g.cells_per_axis))


def lattice_to_point(g, lp):
    lp = np.asarray(lp)
    if len(lp) != g.dim:
        raise DimensionMismatch(f"lattice point has dimension {len(lp)}, grid has {g.dim}")
    if np.any(lp < 0) or np.any(lp > g.cells_per_axis):
        raise OutOfBounds(f"{tuple(lp)} outside [0, {g.cells_per_axis}]^{g.dim}")
    return g.embed(lp)


def enumerate_paths(point_sets, budget=DEFAULT_BUDGET):
    """Cartesian product of the lattice-point sets, lexicographic, after
    checking that its size fits the budget."""
    sets = [sorted(tuple(int(c) for c in p) for p in s) for s in point_sets]
    if not sets or any(len(s) == 0 for s in sets):
        raise InvalidParameter("need at least one non-empty point set")
    total = math.prod(len(s) for s in sets)
    if total > budget:
        raise BudgetExceeded(total, budget)
    return itertools.product(*sets)


def ball_lattice_points(center, radius, ell):
    """Points of the origin-anchored lattice of pitch ``ell`` in the closed
    ball ``B(center, radius)``, as a set of integer tuples."""
    if radius < 0 or ell <= 0:
        raise InvalidParameter("radius must be >= 0 and ell > 0")
    center = np.asarray(center, dtype=float).reshape(-1)
    lo = np.floor((center - radius) / ell).astype(np.int64)
    # one extra lattice line guards against floor landing an ulp short
    hi = np.floor((center + radius) / ell).astype(np.int64) + 1
    axes = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    diff = pts * ell - center
    inside = np.sqrt((diff * diff).sum(axis=1)) <= radius
    return {tuple(int(c) for c in p) for p in pts[inside]}


def path_key(seq):
    """Canonical text key ``a1,...,ad|b1,...,bd|...`` of a lattice sequence."""
    if len(seq) == 0:
        raise InvalidParameter("empty grid path")
    return "|".join(",".join(str(int(c)) for c in p) for p in seq)


def parse_path_key(key):
    return tuple(tuple(int(c) for c in part.split(",")) for part in key.split("|"))


def _segment_distance(pts, a, b):
    v = b - a
    vv = (v * v).sum(axis=-1)
    w = pts[:, None, :] - a[None]
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(vv > 0, (w * v[None]).sum(axis=-1) / vv, 0.0)
    t = np.clip(t, 0.0, 1.0)
    diff = w - t[..., None] * v[None]
    return np.sqrt((diff * diff).sum(axis=-1))


def lattice_near_polyline(g, P, radius, vertices_only=False):
    """Lattice points of ``g`` within ``radius`` of the polyline ``P`` (or of
    its vertices), as an ``(N, d)`` int array in lexicographic order.

    The radius is inflated by a relative 1e-9 so the result is a superset of
    what an exact free-space test at ``radius`` can accept.
    """
    P = np.asarray(P, dtype=float)
    reach = radius * (1.0 + 1e-9) + 1e-12
    R = g.cells_per_axis
    lo = np.floor((P.min(axis=0) - reach - g.min_corner) / g.cell).astype(np.int64) - 1
    hi = np.ceil((P.max(axis=0) + reach - g.min_corner) / g.cell).astype(np.int64) + 1
    lo, hi = np.clip(lo, 0, R), np.clip(hi, 0, R)
    axes = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    lat = np.stack([m.ravel() for m in mesh], axis=1)
    pos = g.embed(lat)
    if vertices_only or len(P) == 1:
        d = np.sqrt(((pos[:, None, :] - P[None]) ** 2).sum(axis=-1))
    else:
        d = _segment_distance(pos, P[:-1], P[1:])
    return lat[d.min(axis=1) <= reach]
