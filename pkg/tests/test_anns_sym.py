import math

import numpy as np
import pytest

from frechetgrid.anns_sym import build_sym_index, query_path, query_sym
from frechetgrid.errors import BudgetExceeded, DimensionMismatch, InvalidParameter
from frechetgrid.geometry import Curve, discrete_frechet
from frechetgrid.grid import OpCounter, ball_lattice_points


def test_internal_parameters():
    idx = build_sym_index([[[0.0, 0.0]]], 1.0, 3.0)
    assert idx.eps_internal == 1.0
    assert idx.cell == pytest.approx(1.0 / (2 * math.sqrt(2)))
    assert idx.r_outer == pytest.approx(4.5)
    assert idx.mu == pytest.approx(3.0)


def test_single_vertex_bucket_count():
    p = [0.37, -0.21]
    idx = build_sym_index([[p]], 1.0, 0.6)
    assert len(idx.buckets) == len(ball_lattice_points(p, idx.r_outer, idx.cell))


def test_point_set_growth():
    sizes, areas = [], []
    for eps_int in (0.8, 0.4, 0.2):
        idx = build_sym_index([[[0.1, 0.1]]], 1.0, 3 * eps_int)
        sizes.append(len(idx.buckets))
        areas.append(math.pi * (idx.r_outer / idx.cell) ** 2)
    ratios = [b / a for a, b in zip(sizes, sizes[1:])]
    # the ball radius also shrinks with eps, so the ratio climbs toward 4
    assert 2.5 < ratios[0] < ratios[1] < 4.0
    assert all(abs(s / a - 1) < 0.02 for s, a in zip(sizes, areas))


def test_bucket_count_is_product():
    P = [[0.0, 0.0], [30.0, 0.0]]
    idx = build_sym_index([P], 1.0, 12.0)
    g = [ball_lattice_points(v, idx.r_outer, idx.cell) for v in P]
    assert len(idx.buckets) == len(g[0]) * len(g[1])


def test_identical_curves_share_buckets():
    P = [[0.0, 0.0], [40.0, 0.0]]
    idx = build_sym_index([Curve("a", P), Curve("b", P)], 1.0, 12.0)
    assert set(idx.buckets.values()) == {("a", "b")}


def test_budget_names_curve():
    with pytest.raises(BudgetExceeded) as info:
        build_sym_index([Curve("tiny", [[0, 0]]), Curve("big", [[0, 0], [50, 0], [100, 0]])], 1.0, 3.0, budget=10**5)
    assert info.value.curve_id == "big"


def test_invalid():
    with pytest.raises(InvalidParameter):
        build_sym_index([[[0, 0]]], 0.0, 1.0)


def test_empty_index():
    idx = build_sym_index([], 1.0, 3.0)
    assert query_sym(idx, [[0.0, 0.0], [1.0, 1.0]]) == ()


def test_dimension():
    idx = build_sym_index([[[0.0, 0.0]]], 1.0, 12.0)
    with pytest.raises(DimensionMismatch):
        query_sym(idx, [[0.0, 0.0, 0.0]])


def test_well_separated_self_query():
    delta, eps = 1.0, 12.0
    idx0 = build_sym_index([[[0.0, 0.0]]], delta, eps)
    gap = idx0.mu + 2 * idx0.cell * math.sqrt(2)
    P = np.array([[0.0, 0.0], [gap + 0.5, 0.3], [gap + 0.7, 2 * gap + 1.0]])
    idx = build_sym_index([Curve("p", P)], delta, eps)
    assert query_sym(idx, P) == ("p",)
    assert discrete_frechet(P, P) <= (5 + eps) * delta


def test_far_query_empty(rng):
    idx = build_sym_index([Curve("p", [[0.0, 0.0], [40.0, 0.0]])], 1.0, 12.0)
    for _ in range(50):
        Q = rng.uniform(200, 400, (int(rng.integers(1, 5)), 2))
        assert discrete_frechet(idx.curves["p"], Q) > 17.0
        assert query_sym(idx, Q) == ()


def test_simplified_key_edges(rng):
    idx = build_sym_index([[[0.0, 0.0]]], 1.0, 6.0)
    for _ in range(200):
        Q = rng.uniform(-20, 20, (int(rng.integers(1, 7)), 2))
        key = np.array(query_path(idx, Q)) * idx.cell
        assert np.all(np.linalg.norm(np.diff(key, axis=0), axis=1) > idx.mu)


def test_rounding_error_bound(rng):
    idx = build_sym_index([[[0.0, 0.0]]], 1.0, 6.0)
    for _ in range(200):
        q = rng.uniform(-20, 20, (1, 2))
        lp = np.array(query_path(idx, q)[0]) * idx.cell
        assert np.linalg.norm(lp - q[0]) <= idx.cell * math.sqrt(2) + 1e-12


def test_query_cost_constant_in_corpus(rng):
    costs = set()
    for n in (1, 5, 20):
        curves = [Curve(str(i), rng.uniform(0, 100, (1, 2))) for i in range(n)]
        idx = build_sym_index(curves, 1.0, 12.0)
        c = OpCounter()
        query_sym(idx, rng.uniform(0, 100, (3, 2)), c)
        costs.add(tuple(c.as_dict().values()))
    assert costs == {(6, 0, 1, 1)}


def _separated_curve(rng, m, sep, box):
    while True:
        P = rng.uniform(0, box, (m, 2))
        if m == 1 or np.all(np.linalg.norm(np.diff(P, axis=0), axis=1) > sep):
            return P


def _check(idx, rng, n_queries, delta, eps):
    bad = []
    curves = list(idx.curves.values())
    for _ in range(n_queries):
        k = int(rng.integers(1, 6))
        P = curves[int(rng.integers(len(curves)))]
        sel = np.sort(rng.integers(0, len(P), k))
        Q = P[sel] + rng.normal(scale=0.3 * delta, size=(k, 2))
        got = set(query_sym(idx, Q))
        for cid, C in idx.curves.items():
            d = discrete_frechet(C, Q)
            if (cid in got and d > (5 + eps) * delta) or (cid not in got and d <= delta):
                bad.append((cid, Q.tolist(), d))
    return bad


def test_guarantee_on_separated_curves():
    """Curves whose consecutive vertices are more than 3 r_outer apart."""
    rng = np.random.default_rng(21)
    delta = 1.0
    for eps in (12.0, 30.0):
        r_outer = 3 * (1 + eps / 6) * delta
        curves = [Curve(str(i), _separated_curve(rng, int(rng.integers(1, 3)), 2 * r_outer, 6 * r_outer))
                  for i in range(5)]
        idx = build_sym_index(curves, delta, eps)
        assert _check(idx, rng, 40, delta, eps) == []


def test_close_vertices_break_completeness():
    """A doubled vertex can never share a key with a one-vertex query, although
    the discrete distance is zero: the not-returned direction needs vertices
    of indexed curves to be far apart."""
    idx = build_sym_index([Curve("pp", [[0.0, 0.0], [0.0, 0.0]])], 1.0, 12.0)
    Q = [[0.0, 0.0]]
    assert discrete_frechet(idx.curves["pp"], Q) == 0.0
    assert query_sym(idx, Q) == ()


def test_returned_is_close_on_general_curves():
    rng = np.random.default_rng(8)
    curves = [Curve(str(i), rng.uniform(0, 10, (int(rng.integers(1, 3)), 2))) for i in range(4)]
    idx = build_sym_index(curves, 1.0, 12.0)
    for _ in range(60):
        Q = rng.uniform(0, 10, (int(rng.integers(1, 6)), 2))
        for cid in query_sym(idx, Q):
            assert discrete_frechet(idx.curves[cid], Q) <= 17.0
