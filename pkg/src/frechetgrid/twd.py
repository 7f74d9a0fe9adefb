"""Approximate time-window queries over region-labelled timestamped points.

Times are shifted into ``I = [t_max, 2 t_max - t_min]``, which is cut into
steps of ``eps * t_max``.  Every window between two step endpoints gets a
bucket with the regions holding at least ``theta`` points inside it.  A
query window is snapped inwards and outwards onto the endpoints, giving an
inner answer ``S1`` and an outer answer ``S2`` with ``S1 ⊆ S* ⊆ S2``.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyInput, InvalidParameter, InvalidQuery

# fractional endpoint indices this close to an integer are snapped onto it
SNAP_TOL = 1e-9


@dataclass(frozen=True)
class StampedPoint:
    region: str
    t: float


@dataclass(eq=False)
class TwdIndex:
    theta: int
    eps: float
    t_min: float
    t_max: float
    endpoints: np.ndarray
    buckets: dict
    region_times: dict = field(repr=False)
    time_offset: float = 0.0
    time_scale: float = 1.0

    @property
    def shift(self):
        return self.t_max - self.t_min

    @property
    def step(self):
        return self.eps * self.t_max

    @property
    def interval(self):
        return (self.t_max, 2.0 * self.t_max - self.t_min)

    def window(self, i, j):
        """Bounds of the candidate window ``(i, j)`` in unshifted time."""
        return (self.t_min + i * self.step, self.t_min + j * self.step)

    @property
    def subintervals(self):
        return len(self.endpoints) - 1

    def capacities(self):
        c = self.subintervals
        return {
            "subintervals": c,
            "endpoints": c + 1,
            "windows": (c + 1) * (c + 2) // 2,
            "stored_regions": sum(len(v) for v in self.buckets.values()),
        }


def as_stamped(points):
    """Accept ``StampedPoint`` objects, ``(region, t)`` pairs or dicts."""
    out = []
    for p in points:
        if isinstance(p, StampedPoint):
            out.append(p)
        elif isinstance(p, dict):
            out.append(StampedPoint(str(p["region"]), float(p["t"])))
        else:
            region, t = p
            out.append(StampedPoint(str(region), float(t)))
    return out


def normalize_times(times):
    """Offset and scale mapping ``times`` into ``[0, 1)``.

    Times already in ``[0, 1)`` are left alone (offset 0, scale 1).
    Otherwise ``t' = (t - min) / (2 (max - min))``, which lands in ``[0, 1/2]``.
    """
    times = np.asarray(times, dtype=float)
    lo, hi = float(times.min()), float(times.max())
    if lo >= 0.0 and hi < 1.0:
        return 0.0, 1.0
    if hi == lo:
        raise InvalidParameter("all timestamps are equal; cannot rescale")
    return lo, 2.0 * (hi - lo)


def subinterval_count(t_min, t_max, eps):
    """Number of steps of length ``eps * t_max`` needed to cover ``I``."""
    return math.ceil((t_max - t_min) / (eps * t_max))


def build_twd(points, theta, eps, rescale=False):
    """Precompute the qualifying regions of every candidate window.

    Parameters
    ----------
    points : iterable
        ``StampedPoint`` objects, ``(region, t)`` pairs or ``{"region", "t"}``
        dicts with ``0 <= t < 1``.
    theta : int
        Minimum number of points a region needs inside a window.
    eps : float
        Step factor; must satisfy ``0 < eps < 1/t_max - 1``.
    rescale : bool
        Map times outside ``[0, 1)`` into range first (see
        :func:`normalize_times`); queries are then given in original units.
    """
    pts = as_stamped(points)
    if not pts:
        raise EmptyInput("no points")
    if int(theta) != theta or theta < 1:
        raise InvalidParameter("theta must be a positive integer")
    times = np.array([p.t for p in pts], dtype=float)
    if not np.all(np.isfinite(times)):
        raise InvalidParameter("timestamps must be finite")
    offset, scale = normalize_times(times) if rescale else (0.0, 1.0)
    times = (times - offset) / scale
    if times.min() < 0.0 or times.max() >= 1.0:
        raise InvalidParameter("timestamps must lie in [0, 1)")
    t_min, t_max = float(times.min()), float(times.max())
    if t_max == 0.0:
        raise InvalidParameter("t_max is 0, the step eps * t_max would vanish")
    if not 0.0 < eps < 1.0 / t_max - 1.0:
        raise InvalidParameter(f"need 0 < eps < 1/t_max - 1 = {1.0 / t_max - 1.0}")

    per_region = {}
    for p, t in zip(pts, times.tolist()):
        per_region.setdefault(p.region, []).append(t)
    region_times = {r: np.sort(np.array(v)) for r, v in sorted(per_region.items())}

    # shifting by t_max - t_min maps [t_min, t_max] onto I; it is a pure
    # relabelling, so membership is decided on unshifted times where the
    # shifted endpoint c_i corresponds to t_min + i * step
    count = subinterval_count(t_min, t_max, eps)
    steps = np.arange(count + 1)
    step = eps * t_max
    endpoints = t_max + step * steps
    ends = (t_min + step * steps).tolist()

    buckets = {}
    for region, ts in region_times.items():
        ts = ts.tolist()
        lower = [bisect.bisect_left(ts, c) for c in ends]
        upper = [bisect.bisect_right(ts, c) for c in ends]
        for i in range(count + 1):
            for j in range(i, count + 1):
                if upper[j] - lower[i] >= theta:
                    buckets.setdefault((i, j), []).append(region)
    full = {}
    for i in range(count + 1):
        for j in range(i, count + 1):
            full[(i, j)] = tuple(buckets.get((i, j), ()))

    return TwdIndex(
        theta=int(theta),
        eps=float(eps),
        t_min=t_min,
        t_max=t_max,
        endpoints=endpoints,
        buckets=full,
        region_times=region_times,
        time_offset=offset,
        time_scale=scale,
    )


def _snap(x):
    near = round(x)
    return float(near) if abs(x - near) <= SNAP_TOL else x


def query_twd(index, q1, q2, counter=None):
    """Inner and outer answers ``(S1, S2)`` for the window ``[q1, q2]``.

    ``S1`` is exact for the window snapped inwards onto the endpoints and
    ``S2`` for the window snapped outwards, so ``S1 ⊆ S* ⊆ S2``.
    """
    if not q1 < q2:
        raise InvalidQuery(f"need q1 < q2, got [{q1}, {q2}]")
    q1 = (q1 - index.time_offset) / index.time_scale
    q2 = (q2 - index.time_offset) / index.time_scale
    lo, hi = index.t_min, index.t_max
    misses = q2 < lo or q1 > hi
    # clamp to the endpoint span, which covers [t_min, t_max]; clamping to
    # t_max itself would move an aligned top endpoint off the lattice
    top = index.subintervals
    end = lo + top * index.step
    a, b = min(max(q1, lo), end), min(max(q2, lo), end)
    x1 = _snap((a - lo) / index.step)
    x2 = _snap((b - lo) / index.step)
    up1, down1 = min(math.ceil(x1), top), max(math.floor(x1), 0)
    up2, down2 = min(math.ceil(x2), top), max(math.floor(x2), 0)
    if counter is not None:
        counter.clamps += 2
        counter.roundings += 4
    if misses:
        return (), ()
    if counter is not None:
        counter.lookups += 2
    # an inverted inner window (up1 > down2) has no bucket and yields nothing
    inner = index.buckets.get((up1, down2), ())
    outer = index.buckets[(down1, up2)]
    return inner, outer
