"""A curve the symmetric index cannot return although it is at distance 0.

The stored key of ``<a, a>`` has two lattice points, while every query key
is simplified so that consecutive points are more than ``mu`` apart.  A
one-vertex query ``<a>`` therefore never reaches the bucket, even though the
discrete Fréchet distance is zero.  Curves whose consecutive vertices are far
apart do not have this problem; the second half of the script checks that.

    python3 scripts/sym_counterexample.py
"""

import numpy as np

from frechetgrid.anns_sym import build_sym_index, query_path, query_sym
from frechetgrid.geometry import Curve, discrete_frechet


def main():
    delta, eps = 1.0, 12.0
    a = [0.0, 0.0]
    idx = build_sym_index([Curve("doubled", [a, a])], delta, eps)
    Q = [a]
    print(f"distance <a,a> to <a>: {discrete_frechet([a, a], Q)}")
    print(f"query key: {query_path(idx, Q)}")
    print(f"stored keys have {len(next(iter(idx.buckets)))} points; returned: {query_sym(idx, Q)}")

    gap = 3 * idx.r_outer
    P = np.array([[0.0, 0.0], [gap, 0.0], [gap, gap]])
    idx = build_sym_index([Curve("spread", P)], delta, eps)
    rng = np.random.default_rng(0)
    missed = 0
    for _ in range(200):
        k = int(rng.integers(1, 6))
        sel = np.sort(rng.integers(0, 3, k))
        sel[0], sel[-1] = 0, 2
        Qs = P[sel] + rng.normal(scale=0.2, size=(k, 2))
        if discrete_frechet(P, Qs) <= delta and "spread" not in query_sym(idx, Qs):
            missed += 1
    print(f"separated curve: {missed} misses in 200 near queries")


if __name__ == "__main__":
    main()
