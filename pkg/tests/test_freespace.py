import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import curves
from frechetgrid import freespace
from frechetgrid.geometry import continuous_frechet_decide, discrete_frechet


def dense(P, step):
    P = np.asarray(P, dtype=float)
    out = [P[0]]
    for a, b in zip(P[:-1], P[1:]):
        n = max(1, int(np.ceil(np.linalg.norm(b - a) / step)))
        out.extend(a + (b - a) * t / n for t in range(1, n))
        out.append(b)
    return np.array(out)


def test_segment_ball_interval_basic():
    lo, hi = freespace.segment_ball_interval(np.array([0.0, 0]), np.array([4.0, 0]), np.array([2.0, 0]), 1.0)
    assert (lo, hi) == (0.25, 0.75)


def test_segment_ball_interval_tangent_and_miss():
    a, b = np.array([0.0, 1.0]), np.array([2.0, 1.0])
    lo, hi = freespace.segment_ball_interval(a, b, np.array([1.0, 0.0]), 1.0)
    assert lo == pytest.approx(0.5) and hi == pytest.approx(0.5)
    lo, hi = freespace.segment_ball_interval(a, b, np.array([1.0, 0.0]), 0.99)
    assert lo > hi


def test_segment_ball_interval_degenerate_segment():
    p = np.array([1.0, 1.0])
    assert freespace.segment_ball_interval(p, p, np.array([1.0, 1.5]), 0.5) == (0.0, 1.0)
    lo, hi = freespace.segment_ball_interval(p, p, np.array([1.0, 1.6]), 0.5)
    assert lo > hi


@given(curves(max_size=4), curves(max_size=4))
def test_decision_brackets_sampled_distance(P, Q):
    """The discrete distance of dense resamplings is within one sample step
    of the continuous distance, so the decision must agree outside that band."""
    step = 0.05
    d = discrete_frechet(dense(P, step), dense(Q, step))
    assert continuous_frechet_decide(P, Q, d)
    if d > step:
        assert not continuous_frechet_decide(P, Q, d - step)


def _exhaustive(P, cand, r, k, mode):
    out = []
    for seq in itertools.product(range(len(cand)), repeat=k):
        C = cand[list(seq)]
        if mode == freespace.WHOLE:
            ok = continuous_frechet_decide(P, C, r)
        elif mode == freespace.DISCRETE:
            ok = discrete_frechet(P, C) <= r
        else:
            ok = _some_subcurve(P, C, r)
        if ok:
            out.append(seq)
    return sorted(out)


def _some_subcurve(P, C, r):
    P = freespace.as_polyline(P)
    V, lo, hi = freespace.column(P, C[0], r)
    R_lo, R_hi = lo, hi
    for j in range(1, len(C)):
        B = freespace.edge_rows(P, C[j - 1], C[j], r)
        V1, lo1, hi1 = freespace.column(P, C[j], r)
        R_lo, R_hi = freespace.forward_step(R_lo, R_hi, V, *B, V1, lo1, hi1)
        V = V1
    return bool(freespace.nonempty(R_lo, R_hi).any())


@pytest.mark.parametrize("mode", [freespace.WHOLE, freespace.SUB, freespace.DISCRETE])
@pytest.mark.parametrize("seed", range(4))
def test_pruned_search_equals_enumeration(mode, seed):
    rng = np.random.default_rng(seed)
    P = rng.uniform(0, 2, size=(int(rng.integers(1, 4)), 2))
    cand = rng.uniform(0, 2, size=(9, 2))
    k = int(rng.integers(1, 4))
    got = [tuple(row) for row in freespace.matching_paths(P, cand, 0.8, k, mode).tolist()]
    assert got == _exhaustive(P, cand, 0.8, k, mode)


def test_discrete_step_matches_dp():
    rng = np.random.default_rng(3)
    for _ in range(50):
        P = rng.uniform(0, 3, (int(rng.integers(1, 6)), 2))
        Q = rng.uniform(0, 3, (int(rng.integers(1, 6)), 2))
        d = discrete_frechet(P, Q)
        F = np.linalg.norm(Q[:, None] - P[None], axis=2) <= d
        reach = freespace.discrete_init(F[0])
        for j in range(1, len(Q)):
            reach = freespace.discrete_step(reach, F[j])
        assert reach[-1]
