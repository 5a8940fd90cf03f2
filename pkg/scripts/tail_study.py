"""Compare exact tail probabilities against the closed-form bounds.

Sweeps a grid of contraction parameters for a two-state chain with +/-1
observables and writes one CSV row per (lambda, u) pair, so the slack of
each bound can be plotted directly.

Usage:
    python3 scripts/tail_study.py --n 20 --lambdas 0:0.9:0.3 --out tails.csv
"""

import argparse
import csv
import sys

from mchoeffding import sign_family, two_state_chain
from mchoeffding.bounds import SCALAR_TAIL_BOUNDS
from mchoeffding.cli import parse_grid
from mchoeffding.oracle import lattice_distribution


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20, help="number of chain steps")
    ap.add_argument("--lambdas", default="0:0.9:0.3", help="lambda grid start:stop:step")
    ap.add_argument("--u-grid", default="0.5:8:0.5", help="deviation grid start:stop:step")
    ap.add_argument("--out", default="-", help="output CSV path (default stdout)")
    args = ap.parse_args(argv)

    funcs = sign_family(args.n)
    names = sorted(SCALAR_TAIL_BOUNDS)
    rows = [["lambda", "u", "exact_tail"] + names]
    for lam in parse_grid(args.lambdas):
        chain = two_state_chain(float(lam))
        dist = lattice_distribution(chain, funcs)
        for u in parse_grid(args.u_grid):
            exact = dist.tail(float(u) * funcs.a_l2)
            rows.append([float(lam), float(u), exact]
                        + [SCALAR_TAIL_BOUNDS[name](float(u), float(lam)) for name in names])

    handle = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    csv.writer(handle).writerows(rows)
    if handle is not sys.stdout:
        handle.close()
        print(f"wrote {len(rows) - 1} rows to {args.out}")


if __name__ == "__main__":
    main()
