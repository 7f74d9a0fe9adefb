"""Compute the expected values of the worked examples with brute-force code.

Nothing here calls the package's Fréchet, grid or index code; the numbers
printed are the ones frozen into the test suite.

    python3 scripts/derive_examples.py
"""

import itertools
import json
import math

import numpy as np


def couplings(m, k):
    """All monotone couplings of index sequences 0..m-1 and 0..k-1."""
    def walk(i, j, path):
        if (i, j) == (m - 1, k - 1):
            yield path
            return
        for di, dj in ((1, 0), (0, 1), (1, 1)):
            a, b = i + di, j + dj
            if a < m and b < k:
                yield from walk(a, b, path + [(a, b)])
    yield from walk(0, 0, [(0, 0)])


def discrete_by_enumeration(P, Q):
    P, Q = np.asarray(P, float), np.asarray(Q, float)
    return min(max(np.linalg.norm(P[i] - Q[j]) for i, j in c) for c in couplings(len(P), len(Q)))


def resample_arclength(P, step):
    P = np.asarray(P, float)
    out = [P[0]]
    for a, b in zip(P[:-1], P[1:]):
        n = max(1, math.ceil(np.linalg.norm(b - a) / step))
        for t in range(1, n + 1):
            out.append(a + (b - a) * t / n)
    return np.array(out)


def discrete_dp(P, Q):
    d = np.linalg.norm(P[:, None, :] - Q[None, :, :], axis=2)
    m, k = d.shape
    D = np.full((m, k), np.inf)
    D[0, 0] = d[0, 0]
    for j in range(1, k):
        D[0, j] = max(D[0, j - 1], d[0, j])
    for i in range(1, m):
        D[i, 0] = max(D[i - 1, 0], d[i, 0])
        row, prev = D[i], D[i - 1]
        for j in range(1, k):
            row[j] = max(min(prev[j], prev[j - 1], row[j - 1]), d[i, j])
    return D[-1, -1]


def greedy_simplify_by_hand(P, mu):
    kept, cur = [P[0]], P[0]
    for v in P[1:]:
        if math.dist(v, cur) > mu:
            kept.append(v)
            cur = v
    if kept[-1] != P[-1]:
        kept.append(P[-1])
    return kept


def ball_scan(center, radius, ell):
    lo = [math.floor((c - radius) / ell) - 1 for c in center]
    hi = [math.floor((c + radius) / ell) + 1 for c in center]
    pts = itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)])
    return sorted(p for p in pts if math.dist([x * ell for x in p], center) <= radius)


def sub_witnesses(P, C, r, res):
    """(start, end) pairs at resolution ``res`` whose subcurve samples stay
    within ``r`` of C's densely sampled segment (C is a single segment)."""
    P = np.asarray(P, float)
    n = len(P)
    params = np.round(np.arange(1.0, n + 1e-9, res), 10)

    def at(s):
        i = min(int(math.floor(s)) - 1, n - 2)
        t = s - (i + 1)
        return (1 - t) * P[i] + t * P[i + 1]

    Cs = resample_arclength(C, res / 4)
    found = []
    for s in params:
        if np.linalg.norm(at(s) - C[0]) > r:
            continue
        for e in params[params >= s]:
            if np.linalg.norm(at(e) - C[-1]) > r:
                continue
            sub = resample_arclength(np.array([at(s)] + [P[i] for i in range(n) if s < i + 1 < e] + [at(e)]), res / 4)
            if discrete_dp(sub, Cs) <= r + res:
                found.append((float(s), float(e)))
    return found


def main():
    out = {}

    P, Q = [(0, 0), (2, 0)], [(0, 0), (1, 1), (2, 0)]
    out["discrete_frechet_2x3"] = discrete_by_enumeration(P, Q)

    step = 1e-3
    out["continuous_bracket_2x3"] = discrete_dp(resample_arclength(P, step), resample_arclength(Q, step))

    out["simplify_example"] = greedy_simplify_by_hand([(0, 0), (0.5, 0), (2, 0)], 1.0)

    pts = [0.0, 1.0, 3.0]
    out["collinear_estimate_seed1"] = max(abs(p - pts[1]) for p in pts)
    out["collinear_exact"] = max(abs(a - b) for a in pts for b in pts)

    ell = 0.5 / (2 * math.sqrt(2))
    out["asym_example_R"] = math.ceil(8.0 / ell)
    out["asym_example_ell"] = ell

    out["ball_unit"] = ball_scan((0.0, 0.0), 1.0, 1.0)

    lattice = list(itertools.product(range(3), repeat=2))
    seqs = [(p,) for p in lattice] + list(itertools.product(lattice, repeat=2))
    keys = {"|".join(",".join(map(str, p)) for p in s) for s in seqs}
    out["path_key_sequences"] = len(seqs)
    out["path_key_distinct"] = len(keys)

    line = [(float(x), 0.0) for x in range(11)]
    w = sub_witnesses(line, [(2.0, 0.0), (3.0, 0.0)], 0.1, 1e-2)
    out["segment_witness_start_range"] = [min(s for s, _ in w), max(s for s, _ in w)]
    out["segment_witness_end_range"] = [min(e for _, e in w), max(e for _, e in w)]

    t = [0.1, 0.5, 0.9]
    t_min, t_max, eps = min(t), max(t), 0.1
    count = math.ceil((t_max - t_min) / (eps * t_max))
    out["twd_example"] = {"I": [t_max, 2 * t_max - t_min], "step": eps * t_max,
                          "subintervals": count, "endpoints": count + 1,
                          "windows": (count + 1) * (count + 2) // 2}

    print(json.dumps(out, indent=1, default=float))


if __name__ == "__main__":
    main()
