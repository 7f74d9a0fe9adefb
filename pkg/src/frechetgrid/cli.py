"""Command-line interface: build, query, check and bench.

Exit codes: 0 success, 1 a check found a violation, 2 invalid parameters,
3 enumeration budget exceeded, 4 I/O or format errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import oracle, serialize
from .anns_asym import build_asym_index, query_asym
from .anns_sym import build_sym_index, query_sym
from .asrs import build_asrs_index, extract_inclusion_minimal, query_asrs
from .errors import BudgetExceeded, FormatError, InvalidParameter
from .geometry import Curve, continuous_frechet_decide, discrete_frechet, subcurve
from .grid import DEFAULT_BUDGET, OpCounter
from .twd import StampedPoint, build_twd, query_twd
from .workloads import bounding_box, near_query, subcurve_query

REJECTED_SENTINEL = "REJECTED_OUTSIDE_GRID"

EXIT_OK, EXIT_VIOLATION, EXIT_PARAM, EXIT_BUDGET, EXIT_IO = 0, 1, 2, 3, 4


# --- ingestion ---------------------------------------------------------------

def _records(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from exc
            if not isinstance(rec, dict):
                raise FormatError(f"{path}:{lineno}: expected a JSON object")
            yield lineno, rec


def read_curves(path):
    """Curves from a JSON-lines file of ``{"id", "points"}`` records."""
    curves = []
    for lineno, rec in _records(path):
        try:
            pts = np.array(rec["points"], dtype=float)
            cid = str(rec["id"])
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"{path}:{lineno}: bad curve record: {exc}") from exc
        if pts.ndim != 2 or len(pts) == 0:
            raise FormatError(f"{path}:{lineno}: points must be a non-empty list of coordinate lists")
        curves.append(Curve(cid, pts))
    if not curves:
        raise FormatError(f"{path}: no curves")
    if len({c.dim for c in curves}) != 1:
        raise FormatError(f"{path}: curves have mixed dimensions")
    return curves


def read_points(path):
    """Stamped points from a JSON-lines file of ``{"region", "t"}`` records."""
    out = []
    for lineno, rec in _records(path):
        try:
            out.append(StampedPoint(str(rec["region"]), float(rec["t"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"{path}:{lineno}: bad point record: {exc}") from exc
    if not out:
        raise FormatError(f"{path}: no points")
    return out


def _emit(record):
    print(json.dumps(record, sort_keys=True))


# --- commands ----------------------------------------------------------------

def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise InvalidParameter(f"--{name} is required for kind {args.kind}")


def cmd_build(args):
    t0 = time.perf_counter()
    budget = args.budget
    if args.kind == "twd":
        _require(args, "points", "theta", "eps")
        index = build_twd(read_points(args.points), args.theta, args.eps, rescale=True)
    else:
        _require(args, "curves", "delta", "eps")
        curves = read_curves(args.curves)
        if args.kind == "asym":
            _require(args, "k")
            index = build_asym_index(curves, args.k, args.delta, args.eps, budget, metric=args.metric)
        elif args.kind == "sym":
            index = build_sym_index(curves, args.delta, args.eps, budget)
        else:
            _require(args, "k")
            if len(curves) != 1:
                raise InvalidParameter("asrs indexes exactly one curve")
            index = build_asrs_index(curves[0], args.k, args.delta, args.eps, budget)
    elapsed = time.perf_counter() - t0
    serialize.save(index, args.out)
    summary = {"kind": args.kind, "elapsed_s": round(elapsed, 6), **index.capacities()}
    if hasattr(index, "diameter_estimate"):
        summary["diameter_estimate"] = index.diameter_estimate
    _emit(summary)
    return EXIT_OK


def _answer_lines(index, Q):
    kind = serialize.kind_of(index)
    if kind == "asym":
        out = query_asym(index, Q)
        return [REJECTED_SENTINEL] if out.rejected else sorted(out.ids)
    if kind == "sym":
        return sorted(query_sym(index, Q))
    out = query_asrs(index, Q)
    if not isinstance(out, list):
        return [REJECTED_SENTINEL]
    return [r.text() for r in out]


def cmd_query(args):
    index = serialize.load(args.index)
    if serialize.kind_of(index) == "twd":
        if args.from_ is None or args.to is None:
            raise InvalidParameter("twd queries need --from and --to")
        s1, s2 = query_twd(index, args.from_, args.to)
        print(" ".join(["S1", *sorted(s1)]))
        print(" ".join(["S2", *sorted(s2)]))
        return EXIT_OK
    if args.query is None:
        raise InvalidParameter("--query is required")
    queries = read_curves(args.query)
    for Q in queries:
        if len(queries) > 1:
            print(f"# {Q.id}")
        for line in _answer_lines(index, Q.vertices):
            print(line)
    return EXIT_OK


def _violation(kind, trial, detail):
    _emit({"violation": kind, "trial": trial, **detail})
    return EXIT_VIOLATION


def _listed(Q):
    return np.asarray(Q, dtype=float).tolist()


def cmd_check(args):
    """Random queries against the brute-force oracle; stop at the first
    guarantee violation and print it."""
    index = serialize.load(args.index)
    kind = serialize.kind_of(index)
    rng = np.random.default_rng(args.seed)
    if kind == "twd":
        return _check_twd(index, rng, args.trials)
    if kind == "asrs":
        return _check_asrs(index, rng, args.trials)
    curves = index.curves
    delta, eps = index.delta, index.eps
    box = bounding_box(list(curves.values()), 2.0 * delta)
    for trial in range(args.trials):
        if kind == "asym":
            Q = near_query(rng, list(curves.values()), index.k, 0.5 * delta, box)
            out = query_asym(index, Q)
            near, stretched = oracle.scan_near_neighbors(curves, Q, delta, eps, index.metric)
            if out.rejected:
                if near:
                    return _violation("rejected_with_near_curve", trial, {"query": _listed(Q), "near": sorted(near)})
                continue
            got = set(out.ids)
            if not got <= stretched:
                return _violation("returned_too_far", trial, {"query": _listed(Q), "ids": sorted(got - stretched)})
            if not near <= got:
                return _violation("missed_near_curve", trial, {"query": _listed(Q), "ids": sorted(near - got)})
        else:
            k = int(rng.integers(1, 6))
            Q = near_query(rng, list(curves.values()), k, 0.3 * delta, box)
            got = set(query_sym(index, Q))
            for cid, P in curves.items():
                d = discrete_frechet(P, Q)
                if cid in got and d > (5.0 + eps) * delta:
                    return _violation("returned_too_far", trial, {"query": _listed(Q), "id": cid, "distance": d})
                if cid not in got and d <= delta:
                    return _violation("missed_near_curve", trial, {"query": _listed(Q), "id": cid, "distance": d})
    _emit({"kind": kind, "trials": args.trials, "violations": 0})
    return EXIT_OK


def _check_asrs(index, rng, trials):
    P, delta, eps = index.curve, index.delta, index.eps
    r = (1.0 + eps / 2.0) * delta
    for key, ranges in index.buckets.items():
        C = index.grid.embed(key)
        for a, b in zip(ranges, ranges[1:]):
            if not a.end < b.start:
                return _violation("overlapping_ranges", -1, {"key": list(key), "ranges": [a.text(), b.text()]})
        for rg in ranges:
            if not continuous_frechet_decide(subcurve(P, rg.start, rg.end), C, r):
                return _violation("stored_range_too_far", -1, {"key": list(key), "range": rg.text()})
    for trial in range(trials):
        Q = subcurve_query(rng, P, index.k, 0.3 * delta)
        out = query_asrs(index, Q)
        witness = oracle.sampled_subcurve_witness(P, Q, delta, resolution=0.05)
        if not isinstance(out, list):
            if witness is not None:
                return _violation("rejected_with_witness", trial, {"query": _listed(Q), "witness": witness.text()})
            continue
        for rg in out:
            if not continuous_frechet_decide(subcurve(P, rg.start, rg.end), Q, (1.0 + eps) * delta):
                return _violation("returned_too_far", trial, {"query": _listed(Q), "range": rg.text()})
        if witness is not None and not out:
            return _violation("missed_witness", trial, {"query": _listed(Q), "witness": witness.text()})
    _emit({"kind": "asrs", "trials": trials, "violations": 0})
    return EXIT_OK


def _check_twd(index, rng, trials):
    # the oracle works on the normalised times the index stores
    points = [(r, t) for r, ts in index.region_times.items() for t in ts.tolist()]
    span = index.t_max - index.t_min
    for trial in range(trials):
        a, b = np.sort(rng.uniform(index.t_min - 0.1 * span, index.t_max + 0.1 * span, 2))
        if a == b:
            continue
        q1 = a * index.time_scale + index.time_offset
        q2 = b * index.time_scale + index.time_offset
        s1, s2 = query_twd(index, q1, q2)
        n1 = (q1 - index.time_offset) / index.time_scale
        n2 = (q2 - index.time_offset) / index.time_scale
        exact = oracle.window_regions(points, index.theta, (n1, n2))
        if not set(s1) <= exact <= set(s2):
            return _violation("sandwich", trial, {"window": [q1, q2], "S1": sorted(s1),
                                                  "exact": sorted(exact), "S2": sorted(s2)})
    _emit({"kind": "twd", "trials": trials, "violations": 0})
    return EXIT_OK


def cmd_bench(args):
    """Operation counts and wall time of index queries against a linear scan."""
    if args.reps < 1:
        raise InvalidParameter("--reps must be at least 1")
    index = serialize.load(args.index)
    kind = serialize.kind_of(index)
    rng = np.random.default_rng(args.seed)
    lookups, scans = [], []
    counts = set()
    for _ in range(args.trials):
        run, scan = _bench_pair(index, kind, rng)
        counter = OpCounter()
        run(counter)
        counts.add(tuple(sorted(counter.as_dict().items())))
        t0 = time.perf_counter()
        for _ in range(args.reps):
            run(None)
        lookups.append((time.perf_counter() - t0) / args.reps)
        t0 = time.perf_counter()
        for _ in range(args.reps):
            scan()
        scans.append((time.perf_counter() - t0) / args.reps)
    _emit({
        "kind": kind,
        "corpus_size": _corpus_size(index, kind),
        "queries": args.trials,
        "reps": args.reps,
        "op_counts": [dict(c) for c in sorted(counts)],
        "index_query_s": float(np.mean(lookups)) if lookups else 0.0,
        "oracle_scan_s": float(np.mean(scans)) if scans else 0.0,
    })
    return EXIT_OK


def _corpus_size(index, kind):
    if kind == "twd":
        return sum(len(v) for v in index.region_times.values())
    if kind == "asrs":
        return len(index.curve)
    return len(index.curves)


def _bench_pair(index, kind, rng):
    if kind == "twd":
        a, b = np.sort(rng.uniform(index.t_min, index.t_max, 2))
        b = max(b, a + 1e-9)
        q1 = a * index.time_scale + index.time_offset
        q2 = b * index.time_scale + index.time_offset
        points = [(r, t) for r, ts in index.region_times.items() for t in ts.tolist()]
        return (lambda c: query_twd(index, q1, q2, c),
                lambda: oracle.window_regions(points, index.theta, (a, b)))
    if kind == "asrs":
        Q = subcurve_query(rng, index.curve, index.k, 0.3 * index.delta)
        return (lambda c: query_asrs(index, Q, c),
                lambda: extract_inclusion_minimal(index.curve, Q, index.delta))
    curves = list(index.curves.values())
    if kind == "asym":
        Q = near_query(rng, curves, index.k, 0.3 * index.delta)
        return (lambda c: query_asym(index, Q, c),
                lambda: oracle.scan_near_neighbors(index.curves, Q, index.delta, index.eps, index.metric))
    Q = near_query(rng, curves, int(rng.integers(1, 6)), 0.3 * index.delta)
    return (lambda c: query_sym(index, Q, c),
            lambda: oracle.scan_near_neighbors(index.curves, Q, index.delta, index.eps, "discrete"))


# --- entry point -------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="frechetgrid", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build an index and write it to --out")
    b.add_argument("--kind", choices=serialize.KINDS, required=True)
    b.add_argument("--curves")
    b.add_argument("--points")
    b.add_argument("--delta", type=float)
    b.add_argument("--eps", type=float)
    b.add_argument("--k", type=int)
    b.add_argument("--theta", type=int)
    b.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    b.add_argument("--metric", choices=("continuous", "discrete"), default="continuous")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", help="answer queries from a saved index")
    q.add_argument("--index", required=True)
    q.add_argument("--query")
    q.add_argument("--from", dest="from_", type=float)
    q.add_argument("--to", type=float)
    q.set_defaults(func=cmd_query)

    c = sub.add_parser("check", help="compare random queries against the oracle")
    c.add_argument("--index", required=True)
    c.add_argument("--trials", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_check)

    n = sub.add_parser("bench", help="time index queries against a linear scan")
    n.add_argument("--index", required=True)
    n.add_argument("--trials", type=int, default=20)
    n.add_argument("--reps", type=int, default=5)
    n.add_argument("--seed", type=int, default=0)
    n.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
