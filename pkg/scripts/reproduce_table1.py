"""T-count, lower bound, error and runtime for Rz(pi/128) over a range of precisions.

    python3 scripts/reproduce_table1.py --digits 10 20 30 50 100
"""
from __future__ import annotations

import argparse
import time
from fractions import Fraction

import mpmath

from rzsynth.synthesis import SynthesisOptions, certified_error, synthesize


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta", default="pi/128")
    ap.add_argument("--digits", type=int, nargs="+", default=[10, 20, 30, 40, 50, 60, 70, 80, 90, 100])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--effort", type=int, default=25)
    args = ap.parse_args()

    print(f"{'eps':>8} {'T':>6} {'lower':>6} {'k':>5} {'cands':>6} {'error':>14} {'secs':>8}")
    for d in args.digits:
        eps = Fraction(1, 10**d)
        start = time.perf_counter()
        res = synthesize(args.theta, eps, SynthesisOptions(effort=args.effort, seed=args.seed))
        secs = time.perf_counter() - start
        err = certified_error(res.theta, res.u, prec=8 * d + 200)
        err_s = mpmath.nstr(mpmath.mpf(err.numerator) / err.denominator, 5)
        print(f"{'1e-' + str(d):>8} {res.tcount:>6} {res.lower_bound:>6} {res.k:>5} {len(res.candidates):>6} {err_s:>14} {secs:>8.2f}")


if __name__ == "__main__":
    main()
