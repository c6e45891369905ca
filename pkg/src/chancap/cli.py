"""Command line interface.

Subcommands:
  capacity   solve one channel and print a JSON result
  verify     run optimality checks against an input law
  compare    run both solvers side by side and print a summary
  generate   write a canonical channel to a JSON file

Exit codes: 0 success, 1 bad input (parse or validation), 2 iteration limit
reached, 3 verification check failed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .arimoto import CapacityResult, IterationTrace, Termination, solve_arimoto
from .backward_em import solve_backward_em
from .channel import CANONICAL_KINDS, Channel, canonical, load_channel, save_channel
from .errors import ChancapError, ParameterOutOfRange, ParseError
from .probability import Distribution
from .verify import brute_force_capacity, circumcenter_check, converse_check

LN2 = math.log(2.0)

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_ITERATION_LIMIT = 2
EXIT_CHECK_FAILED = 3

_TRACE_HEADER = "iter,mutual_info,lower,upper,gap,status,inner_residual"

# brute-force pitch per input-alphabet size; chosen so symmetric optima land
# exactly on grid points
_GRID_BY_INPUTS = {1: 0.1, 2: 1e-5, 3: 1.0 / 999.0, 4: 1.0 / 100.0}


def _read_channel(path: str, fmt: str) -> Channel:
    with open(path, "rb") as fh:
        return load_channel(fh, fmt)


def _read_input_distribution(path: str) -> Distribution:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON in {path}: {exc}") from None
    if isinstance(doc, dict):
        for key in ("weights", "optimal_input"):
            if key in doc:
                doc = doc[key]
                break
        else:
            raise ParseError(f'{path}: expected an array or an object with "weights"')
    if not isinstance(doc, list):
        raise ParseError(f"{path}: expected a JSON array of weights")
    return Distribution(np.asarray(doc, dtype=float))


def _write_trace(path: str, trace: IterationTrace) -> None:
    lines = [_TRACE_HEADER]
    for rec in trace:
        status = rec.step_status or ""
        residual = "" if rec.inner_residual is None else repr(rec.inner_residual)
        lines.append(
            f"{rec.iteration},{rec.mutual_info!r},{rec.lower_bound!r},"
            f"{rec.upper_bound!r},{rec.gap!r},{status},{residual}"
        )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _scale(nats: float, units: str) -> float:
    return nats / LN2 if units == "bits" else nats


def _solve(ch: Channel, args) -> tuple[CapacityResult, IterationTrace]:
    if args.algorithm == "arimoto":
        return solve_arimoto(ch, tol=args.tol, max_iters=args.max_iters)
    return solve_backward_em(
        ch,
        tol=args.tol,
        max_iters=args.max_iters,
        inner_tol=args.inner_tol,
        damping=args.damping,
    )


def cmd_capacity(args) -> int:
    ch = _read_channel(args.channel, args.format)
    result, trace = _solve(ch, args)
    if args.trace:
        _write_trace(args.trace, trace)
    payload = {
        "capacity": _scale(result.capacity, args.units),
        "lower": _scale(result.bracket.lower, args.units),
        "upper": _scale(result.bracket.upper, args.units),
        "iterations": result.iterations,
        "termination": result.termination.value,
        "optimal_input": [float(w) for w in result.optimal_input.weights],
        "units": args.units,
    }
    print(json.dumps(payload, indent=2))
    return EXIT_OK if result.termination is Termination.CONVERGED else EXIT_ITERATION_LIMIT


def cmd_verify(args) -> int:
    ch = _read_channel(args.channel, args.format)
    if args.input:
        q = _read_input_distribution(args.input)
        origin = f"from {args.input}"
    else:
        result, _ = solve_arimoto(ch)
        q = result.optimal_input
        origin = "from a fresh solver run"
    report = circumcenter_check(q, ch, tol=args.tol)
    certified = converse_check(ch, q, tol=args.tol)

    print(f"channel: {ch.num_inputs}x{ch.num_outputs}, input law {origin}")
    print(f"capacity estimate: {report.capacity_estimate!r} nats")
    print("input  weight        divergence    in_support")
    for x in range(ch.num_inputs):
        print(
            f"{x:>5}  {q.weights[x]:<12.6g}  {report.divergences[x]:<12.10g}"
            f"  {'yes' if report.support[x] else 'no'}"
        )
    print(
        f"circumcenter check: {'pass' if report.passed else 'FAIL'}"
        f" (support deviation {report.max_support_deviation:.3e},"
        f" off-support excess {report.max_off_support_excess:.3e}, tol {report.tol:g})"
    )
    failures = not report.passed

    if certified is None:
        print("converse certificate: not applicable (divergences not all equal)")
    else:
        agrees = (
            np.isfinite(report.capacity_estimate)
            and abs(certified - report.capacity_estimate) <= args.tol
        )
        print(
            f"converse certificate: {certified!r} nats"
            f" ({'agrees with estimate' if agrees else 'DISAGREES with estimate'})"
        )
        failures = failures or not agrees

    if ch.num_inputs <= 4:
        grid = _GRID_BY_INPUTS[ch.num_inputs]
        best, _ = brute_force_capacity(ch, grid)
        allowance = max(args.tol, grid)
        gap = best - (
            report.capacity_estimate if np.isfinite(report.capacity_estimate) else -np.inf
        )
        ok = gap <= allowance
        print(
            f"brute force (grid {grid:g}): {best!r} nats,"
            f" shortfall {gap:.3e} (allowance {allowance:.3e}):"
            f" {'pass' if ok else 'FAIL'}"
        )
        failures = failures or not ok
    else:
        print("brute force: skipped (more than 4 inputs)")

    print(f"verdict: {'PASS' if not failures else 'FAIL'}")
    return EXIT_OK if not failures else EXIT_CHECK_FAILED


def cmd_compare(args) -> int:
    ch = _read_channel(args.channel, args.format)
    result_a, trace_a = solve_arimoto(ch, tol=args.tol, max_iters=args.max_iters)
    result_b, trace_b = solve_backward_em(
        ch,
        tol=args.tol,
        max_iters=args.max_iters,
        inner_tol=args.inner_tol,
        damping=args.damping,
    )
    _write_trace(f"{args.trace_prefix}_arimoto.csv", trace_a)
    _write_trace(f"{args.trace_prefix}_backward_em.csv", trace_b)
    payload = {
        "capacity_a": _scale(result_a.capacity, args.units),
        "capacity_b": _scale(result_b.capacity, args.units),
        "iters_a": result_a.iterations,
        "iters_b": result_b.iterations,
        "max_capacity_diff": abs(_scale(result_a.capacity - result_b.capacity, args.units)),
        "units": args.units,
    }
    print(json.dumps(payload, indent=2))
    both_converged = (
        result_a.termination is Termination.CONVERGED
        and result_b.termination is Termination.CONVERGED
    )
    return EXIT_OK if both_converged else EXIT_ITERATION_LIMIT


def cmd_generate(args) -> int:
    kind = args.kind
    raw = args.param
    if kind == "uniform":
        parts = raw.split(",")
        if len(parts) != 2:
            raise ParameterOutOfRange('uniform takes --param "N,M" (inputs,outputs)')
        params = [int(parts[0]), int(parts[1])]
    elif kind in ("identity", "typewriter"):
        params = [int(raw)]
    else:
        params = [float(raw)]
    ch = canonical(kind, *params)
    with open(args.out, "wb") as fh:
        fh.write(save_channel(ch))
    print(f"wrote {kind} channel ({ch.num_inputs}x{ch.num_outputs}) to {args.out}")
    return EXIT_OK


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=1e-9, help="bracket gap tolerance in nats")
    parser.add_argument("--max-iters", type=int, default=100000, help="outer iteration limit")
    parser.add_argument(
        "--inner-tol", type=float, default=1e-10, help="fixed point residual tolerance"
    )
    parser.add_argument(
        "--damping", type=float, default=0.5, help="fixed point damping factor in (0, 1]"
    )
    parser.add_argument("--units", choices=("bits", "nats"), default="bits")


def _add_channel_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--channel", required=True, help="path to the channel file")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chancap", description="Discrete memoryless channel capacity tools."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", help="solve one channel for capacity")
    _add_channel_flags(p)
    p.add_argument(
        "--algorithm", choices=("arimoto", "backward-em"), default="arimoto"
    )
    _add_solver_flags(p)
    p.add_argument("--trace", help="write a per-iteration CSV trace to this path")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("verify", help="check an input law for optimality")
    _add_channel_flags(p)
    p.add_argument("--input", help="path to an input law (JSON array or capacity output)")
    p.add_argument("--tol", type=float, default=1e-6, help="check tolerance in nats")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compare", help="run both solvers and summarize")
    _add_channel_flags(p)
    _add_solver_flags(p)
    p.add_argument(
        "--trace-prefix",
        default="compare_trace",
        help="traces go to <prefix>_arimoto.csv and <prefix>_backward_em.csv",
    )
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("generate", help="write a canonical channel file")
    p.add_argument("--kind", choices=CANONICAL_KINDS, required=True)
    p.add_argument(
        "--param",
        required=True,
        help='probability, size, or "N,M" for the uniform kind',
    )
    p.add_argument("--out", required=True, help="output JSON path")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ChancapError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
