"""Grid search for step-lemma constants (r, a, b) at fixed P and Q.

    python3 scripts/search_constants.py --P 15 --Q 0.9 --step 0.05
"""
from __future__ import annotations

import argparse

from rzsynth.constants import DEFAULT, StepConstants, check_constants, feasibility_search, inequalities


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--P", type=float, default=DEFAULT.P)
    ap.add_argument("--Q", type=float, default=DEFAULT.Q)
    ap.add_argument("--step", type=float, default=0.05)
    ap.add_argument("--show", type=int, default=10, help="feasible points to print")
    args = ap.parse_args()

    found = feasibility_search(args.P, args.Q, args.step)
    print(f"P={args.P} Q={args.Q} step={args.step}: {len(found)} feasible (r, a, b)")
    for c in found[: args.show]:
        print(f"  r={c.r:<5} a={c.a:<6} b={c.b:<6} min slack {min(inequalities(c).values()):.4f}")

    chosen = StepConstants(args.P, args.Q, DEFAULT.r, DEFAULT.a, DEFAULT.b)
    bad = check_constants(chosen)
    print(f"default (r, a, b) = ({DEFAULT.r}, {DEFAULT.a}, {DEFAULT.b}): {'ok' if not bad else 'violates ' + ', '.join(bad)}")
    for name, slack in inequalities(chosen).items():
        print(f"  {slack:+.6f}  {name}")


if __name__ == "__main__":
    main()
