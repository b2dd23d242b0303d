"""Command-line front end: ``rzsynth --theta pi/128 --digits 10``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .diophantine import capped_provider, table_provider
from .regions import Angle, render_decimal, parse_epsilon
from .rings import format_domega
from .synthesis import (
    InvariantViolation,
    SynthesisOptions,
    SynthesisResult,
    synthesize,
    synthesize_phase8,
    synthesize_up_to_phase,
)

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT = 0, 2, 3

MODES = {"plain": synthesize, "phase": synthesize_phase8, "best": synthesize_up_to_phase}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    theta: Angle
    eps: Fraction
    mode: str = "plain"
    effort: Optional[int] = 25
    seed: int = 0
    oracle_factors: Optional[str] = None
    verify: bool = False


def render_epsilon(eps: Fraction) -> str:
    if eps.numerator == 1:
        d, e = eps.denominator, 0
        while d % 10 == 0:
            d //= 10
            e += 1
        if d == 1:
            return f"1e-{e}" if e else "1"
    return render_decimal(eps) if eps.denominator != 1 else str(eps.numerator)


def load_factor_table(path: str) -> dict:
    """JSON object mapping n to [[p, e], ...]."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read factor table {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise UsageError("factor table must be a JSON object keyed by n")
    return raw


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rzsynth", description="Clifford+T approximation of Rz(θ).")
    p.add_argument("--theta", required=True, help="angle, e.g. pi/128, 3*pi/4, 0.25")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--epsilon", help="precision as a decimal, e.g. 1e-10 or 0.001")
    g.add_argument("--digits", type=int, help="precision 10^-d")
    p.add_argument("--mode", choices=sorted(MODES), default="plain")
    p.add_argument("--effort", type=int, default=25, help="Pollard rho rounds per candidate (0 = trial division only)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="print a JSON report")
    p.add_argument("--verify", action="store_true", help="re-multiply the circuit and re-check the error bound")
    p.add_argument("--oracle-factors", metavar="FILE", help="JSON table of factorisations keyed by n")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    try:
        theta = Angle.parse(ns.theta)
        if ns.digits is not None:
            if ns.digits < 0:
                raise ValueError("--digits must be non-negative")
            eps = Fraction(1, 10**ns.digits)
        else:
            eps = parse_epsilon(ns.epsilon)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if ns.effort < 0:
        raise UsageError("--effort must be non-negative")
    return RunConfig(theta, eps, ns.mode, ns.effort, ns.seed, ns.oracle_factors, ns.verify)


def run(cfg: RunConfig) -> tuple[SynthesisResult, dict]:
    if cfg.oracle_factors:
        provider = table_provider(load_factor_table(cfg.oracle_factors), capped_provider(cfg.effort, cfg.seed))
    else:
        provider = None
    options = SynthesisOptions(effort=cfg.effort, seed=cfg.seed, provider=provider)
    start = time.perf_counter()
    result = MODES[cfg.mode](cfg.theta, cfg.eps, options)
    runtime_ms = (time.perf_counter() - start) * 1000
    verified = result.verify() if cfg.verify else None
    report = {
        "theta": cfg.theta.render(),
        "epsilon": render_epsilon(cfg.eps),
        "mode": cfg.mode,
        "circuit": str(result.circuit),
        "tcount": result.tcount,
        "tcount_lower_bound": result.lower_bound,
        "error_bound": mpmath.nstr(result.error_bound, 8, strip_zeros=False),
        "u": format_domega(result.u),
        "t": format_domega(result.t),
        "k": result.k,
        "candidates": len(result.candidates),
        "seed": cfg.seed,
        "effort": cfg.effort,
        "runtime_ms": round(runtime_ms, 3),
        "verified": verified,
    }
    return result, report


def format_text(report: dict, result: SynthesisResult) -> str:
    lines = [
        f"theta        {report['theta']}",
        f"epsilon      {report['epsilon']}",
        f"mode         {report['mode']} ({result.branch})",
        f"T-count      {report['tcount']} (lower bound {report['tcount_lower_bound']})",
        f"error        <= {report['error_bound']}",
        f"candidates   {report['candidates']}",
        f"u            {report['u']}",
        f"t            {report['t']}",
        f"circuit      {report['circuit'] or '(identity)'}",
    ]
    if report["verified"] is not None:
        lines.append(f"verified     {report['verified']}")
    lines.append(f"runtime      {report['runtime_ms']:.1f} ms")
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
        result, report = run(cfg)
    except UsageError as exc:
        print(f"rzsynth: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"rzsynth: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:  # e.g. phase mode with ε above the Clifford threshold
        print(f"rzsynth: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps(report, indent=2, ensure_ascii=False) if ns.json else format_text(report, result))
    if cfg.verify and not report["verified"]:
        print("rzsynth: verification failed", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
