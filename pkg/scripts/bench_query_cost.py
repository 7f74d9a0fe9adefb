"""Query cost of the asymmetric index against a linear oracle scan.

Builds indexes over synthetic corpora of growing size and runs the CLI
``bench`` command on each.  The index operation counts stay the same while
the scan time grows with the corpus.

    python3 scripts/bench_query_cost.py [--sizes 10 100 1000] [--seed 0]
"""

import argparse
import io
import json
import os
import tempfile
from contextlib import redirect_stdout

import numpy as np

from frechetgrid import serialize
from frechetgrid.anns_asym import build_asym_index
from frechetgrid.cli import main as cli_main
from frechetgrid.workloads import random_curves


def run(sizes, seed, k=2, delta=2.5, eps=2.0, trials=10, reps=3):
    rng = np.random.default_rng(seed)
    rows = []
    with tempfile.TemporaryDirectory() as tmp:
        for n in sizes:
            idx = build_asym_index(random_curves(rng, n, 4, box=0.7 * delta), k, delta, eps)
            path = os.path.join(tmp, f"asym_{n}.json")
            serialize.save(idx, path)
            buf = io.StringIO()
            with redirect_stdout(buf):
                cli_main(["bench", "--index", path, "--trials", str(trials),
                          "--reps", str(reps), "--seed", str(seed)])
            rows.append(json.loads(buf.getvalue()))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 100, 1000])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"{'n':>6} {'index query':>14} {'oracle scan':>14}  op counts")
    for row in run(args.sizes, args.seed):
        print(f"{row['corpus_size']:>6} {row['index_query_s'] * 1e6:>11.1f} us "
              f"{row['oracle_scan_s'] * 1e3:>11.2f} ms  {row['op_counts']}")


if __name__ == "__main__":
    main()
