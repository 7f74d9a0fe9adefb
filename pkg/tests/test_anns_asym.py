import math

import numpy as np
import pytest

from frechetgrid import oracle
from frechetgrid.anns_asym import build_asym_index, grid_params, query_asym
from frechetgrid.errors import (
    BudgetExceeded,
    DimensionMismatch,
    InvalidParameter,
    QuerySizeMismatch,
)
from frechetgrid.geometry import Curve
from frechetgrid.grid import OpCounter
from frechetgrid.workloads import bounding_box, near_query, random_curves

# frozen from scripts/derive_examples.py
FROZEN_R = 46
FROZEN_ELL = 0.17677669529663687


def test_grid_example():
    P = Curve("p", [[0.0, 0.0], [0.3, 0.2], [0.1, 0.4]])
    idx = build_asym_index([P], 1, 1.0, 0.5)
    assert idx.diameter_estimate <= 1.0
    assert idx.grid.side == 8.0
    assert idx.grid.cell == pytest.approx(FROZEN_ELL, rel=1e-15)
    assert idx.grid.cells_per_axis == FROZEN_R


def test_large_diameter_branch():
    L_prime, ell = grid_params(1.0, 0.5, 2, 3.0)
    assert L_prime == 2 * 4 * 1.0 * 3.0 / 0.5
    assert ell == 0.5 / (2 * math.sqrt(2))


def test_diameter_equal_delta_takes_small_branch():
    assert grid_params(1.0, 0.5, 2, 1.0)[0] == 8.0


def test_single_point_k1_buckets():
    p = np.array([[0.2, -0.1]])
    idx = build_asym_index([Curve("p", p)], 1, 1.0, 1.0)
    pts = idx.grid.embed(idx.grid.lattice_points())
    near = np.linalg.norm(pts - p[0], axis=1) <= 1.5
    expected = {(tuple(int(c) for c in lp),) for lp in idx.grid.lattice_points()[near]}
    assert set(idx.buckets) == expected
    assert all(v == ("p",) for v in idx.buckets.values())


def test_budget():
    with pytest.raises(BudgetExceeded) as info:
        build_asym_index([[[0, 0], [0.1, 0.1]]], 2, 1.0, 0.5, budget=10)
    assert info.value.required == (47 ** 2) ** 2


@pytest.mark.parametrize("eps,delta", [(0.0, 1.0), (-0.1, 1.0), (1.5, 1.0)])
def test_eps_range(eps, delta):
    with pytest.raises(InvalidParameter):
        build_asym_index([[[0, 0]]], 1, delta, eps)


def test_k_positive():
    with pytest.raises(InvalidParameter):
        build_asym_index([[[0, 0]]], 0, 1.0, 0.5)


def test_mixed_dimensions():
    with pytest.raises(DimensionMismatch):
        build_asym_index([[[0, 0]], [[0, 0, 0]]], 1, 1.0, 0.5)


def test_metric_flag():
    with pytest.raises(InvalidParameter):
        build_asym_index([[[0, 0]]], 1, 1.0, 0.5, metric="weak")


@pytest.fixture(scope="module")
def small_index():
    rng = np.random.default_rng(7)
    curves = random_curves(rng, 10, 4, box=0.6)
    return curves, build_asym_index(curves, 2, 1.0, 0.8)


def test_identity_query(small_index):
    curves, idx = small_index
    two = [c for c in curves if len(c) == 2]
    for c in two:
        assert c.id in query_asym(idx, c.vertices).ids


def test_far_query_rejected(small_index):
    _, idx = small_index
    far = idx.grid.origin + idx.grid.side * math.sqrt(2)
    out = query_asym(idx, [far, idx.grid.origin])
    assert out.rejected and out.ids == ()


def test_query_size(small_index):
    _, idx = small_index
    with pytest.raises(QuerySizeMismatch):
        query_asym(idx, [[0, 0]])
    with pytest.raises(DimensionMismatch):
        query_asym(idx, [[0, 0, 0], [0, 0, 0]])


def test_sandwich_randomized(small_index):
    curves, idx = small_index
    rng = np.random.default_rng(1)
    box = bounding_box(curves, 1.0)
    for _ in range(150):
        Q = near_query(rng, curves, 2, 0.4, box)
        out = query_asym(idx, Q)
        near, stretched = oracle.scan_near_neighbors(idx.curves, Q, idx.delta, idx.eps)
        if out.rejected:
            assert not near
            continue
        assert near <= set(out.ids) <= stretched


def test_query_cost_constant(small_index):
    _, idx = small_index
    rng = np.random.default_rng(2)
    seen = set()
    for _ in range(20):
        c = OpCounter()
        query_asym(idx, rng.uniform(0, 0.6, (2, 2)), c)
        seen.add(tuple(c.as_dict().values()))
    assert seen == {(4, 0, 1, 1)}


@pytest.mark.parametrize("metric", ["continuous", "discrete"])
def test_pruned_build_equals_exhaustive(metric):
    rng = np.random.default_rng(11)
    curves = random_curves(rng, 3, 3, box=0.5)
    # large eps relative to delta keeps the full enumeration small
    a = build_asym_index(curves, 2, 4.0, 4.0, metric=metric)
    b = build_asym_index(curves, 2, 4.0, 4.0, metric=metric, exhaustive=True)
    assert a.buckets == b.buckets


def test_discrete_metric_guarantee():
    rng = np.random.default_rng(5)
    curves = random_curves(rng, 6, 3, box=0.5)
    idx = build_asym_index(curves, 2, 1.0, 0.9, metric="discrete")
    box = bounding_box(curves, 1.0)
    for _ in range(100):
        Q = near_query(rng, curves, 2, 0.4, box)
        out = query_asym(idx, Q)
        near, stretched = oracle.scan_near_neighbors(idx.curves, Q, 1.0, 0.9, "discrete")
        if out.rejected:
            assert not near
        else:
            assert near <= set(out.ids) <= stretched


def test_bucket_count_bound(small_index):
    _, idx = small_index
    caps = idx.capacities()
    assert caps["bucket_count"] <= caps["path_count"] == ((idx.grid.cells_per_axis + 1) ** 2) ** 2
