"""Command-line interface for simplexgrad."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import (
    BothSidesInfeasibleError,
    ConfigError,
    GoldenMismatchError,
    SimplexGradError,
    UnpoisedSetError,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_UNPOISED = 3
EXIT_GOLDEN = 4
EXIT_INFEASIBLE = 5

_SUFFIXES = {"table": "txt", "json": "json", "csv": "csv"}


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _exit_code(error: SimplexGradError) -> int:
    if isinstance(error, UnpoisedSetError):
        return EXIT_UNPOISED
    if isinstance(error, GoldenMismatchError):
        return EXIT_GOLDEN
    if isinstance(error, BothSidesInfeasibleError):
        return EXIT_INFEASIBLE
    return EXIT_PARSE


def main(args: list[str] | None = None) -> int:
    """Main CLI entry point."""
    parser = argparse.ArgumentParser(
        prog="simplexgrad",
        description="Simplex-gradient error bounds and derivative-free optimization with duality constraints",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Log progress to stderr (-v info, -vv debug)",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    # bounds command
    bounds_cmd = subparsers.add_parser(
        "bounds",
        help="Evaluate every gradient-error bound for a sample set",
    )
    bounds_cmd.add_argument(
        "--input",
        type=Path,
        required=True,
        help="Sample-set file: CSV (first row is the reference) or JSON",
    )
    bounds_cmd.add_argument(
        "--lipschitz",
        type=float,
        required=True,
        help="Lipschitz constant L of the gradient",
    )
    bounds_cmd.add_argument(
        "--delta",
        type=float,
        default=0.0,
        help="Noise bound delta (default: 0)",
    )
    bounds_cmd.add_argument(
        "--ref",
        type=int,
        help="Reference point index (default: from the file)",
    )
    bounds_cmd.add_argument(
        "--format",
        choices=["table", "json", "csv"],
        default="table",
        help="Output format (default: table)",
    )
    bounds_cmd.add_argument(
        "--out",
        type=Path,
        help="Directory for bounds.txt, bounds.json or bounds.csv (default: stdout)",
    )

    # repro command
    repro_cmd = subparsers.add_parser(
        "repro",
        help="Run a reproduction experiment and compare against golden values",
    )
    repro_cmd.add_argument(
        "name",
        help="Experiment: table1, table2, table3, ex3, ex5, ex6, regions, case1, case2",
    )
    repro_cmd.add_argument(
        "--seed",
        type=int,
        help="Random seed for ex5, case1 and case2",
    )
    repro_cmd.add_argument(
        "--runs",
        type=int,
        help="Seeded runs per variant for case1 and case2 (default: 20)",
    )
    repro_cmd.add_argument(
        "--out",
        type=Path,
        help="Directory for CSV output",
    )
    repro_cmd.add_argument(
        "--format",
        choices=["table", "json"],
        default="table",
        help="Summary format (default: table)",
    )

    # dfo command
    dfo_cmd = subparsers.add_parser(
        "dfo",
        help="Run the optimizer from a JSON configuration",
    )
    dfo_cmd.add_argument(
        "config",
        type=Path,
        help="Path to the JSON run configuration",
    )
    dfo_cmd.add_argument(
        "--seed",
        type=int,
        help="Override the configured seed",
    )
    dfo_cmd.add_argument(
        "--out",
        type=Path,
        default=Path("."),
        help="Directory for trace.csv (default: current directory)",
    )
    dfo_cmd.add_argument(
        "--format",
        choices=["table", "json"],
        default="table",
        help="Summary format (default: table)",
    )

    parsed = parser.parse_args(args)
    _configure_logging(parsed.verbose)

    if parsed.command == "bounds":
        return _handle_bounds(parsed)
    if parsed.command == "repro":
        return _handle_repro(parsed)
    if parsed.command == "dfo":
        return _handle_dfo(parsed)

    return EXIT_OK


def _emit(text: str, out_dir: Path | None, name: str) -> None:
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / name
        path.write_text(text + "\n", encoding="utf-8")
        print(f"Written to: {path}")
    else:
        print(text)


def _handle_bounds(args: argparse.Namespace) -> int:
    """Handle the bounds command."""
    from .sample_set import rebase
    from .serialization import format_table, read_sample_set, to_json
    from .total_bounds import bound_report

    try:
        sample_set = read_sample_set(args.input)
        if args.ref is not None:
            if not 0 <= args.ref <= sample_set.n_u:
                raise ConfigError("Reference index out of range", {"ref": args.ref})
            sample_set = rebase(sample_set, args.ref)
        report = bound_report(sample_set, args.lipschitz, args.delta).to_dict()

        if args.format == "json":
            output = to_json(report)
        elif args.format == "csv":
            scalars = {k: v for k, v in report.items() if not isinstance(v, (list, dict))}
            values = (repr(float(v)) if isinstance(v, float) else str(v) for v in scalars.values())
            output = ",".join(scalars) + "\n" + ",".join(values)
        else:
            output = format_table(report)
        _emit(output, args.out, f"bounds.{_SUFFIXES[args.format]}")
        return EXIT_OK

    except SimplexGradError as e:
        print(f"Error: {e}", file=sys.stderr)
        return _exit_code(e)
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_PARSE


def _handle_repro(args: argparse.Namespace) -> int:
    """Handle the repro command."""
    from .repro import run_experiment
    from .serialization import to_json

    try:
        params = {}
        if args.runs is not None:
            if args.name not in ("case1", "case2"):
                raise ConfigError("--runs applies to case1 and case2 only")
            params["runs"] = args.runs
        result = run_experiment(args.name, seed=args.seed, **params)

        if args.out:
            for path in result.write(args.out):
                print(f"Written to: {path}", file=sys.stderr)

        if args.format == "json":
            print(to_json({"name": result.name, "passed": result.passed, "cells": [c.to_dict() for c in result.cells]}))
        else:
            for cell in result.cells:
                status = "PASS" if cell.passed else "FAIL"
                target = cell.expected if cell.expected is not None else f"[{cell.lower}, {cell.upper}]"
                print(f"{status}  {cell.label}: {cell.actual:.6g} (expected {target}, {cell.provenance.value})")
            print(f"{result.name}: {len(result.cells) - len(result.failures)}/{len(result.cells)} cells passed")

        result.check()
        return EXIT_OK

    except SimplexGradError as e:
        print(f"Error: {e}", file=sys.stderr)
        return _exit_code(e)
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_PARSE


def _handle_dfo(args: argparse.Namespace) -> int:
    """Handle the dfo command."""
    from .dfo import run
    from .oracle import NoisyOracle
    from .problems import get_problem
    from .serialization import format_table, load_config, to_json, write_trace_csv

    try:
        config = load_config(args.config)
        if args.seed is not None:
            config.seed = args.seed
        if config.objective is None or config.u0 is None:
            raise ConfigError("Configuration needs 'objective' and 'u0'")
        problem = get_problem(config.objective, dimension=len(config.u0))
        oracle = NoisyOracle(problem, config.noise_model, config.sigma_f, config.delta, config.seed)
        trace_path = args.out / "trace.csv"

        try:
            trace = run(oracle, config.u0, config)
        except BothSidesInfeasibleError as e:
            if e.trace is not None:
                write_trace_csv(e.trace, trace_path)
                print(f"Partial trace written to: {trace_path}", file=sys.stderr)
            raise

        write_trace_csv(trace, trace_path)
        best_point, best_value = trace.best()
        summary = {
            "objective": config.objective,
            "variant": config.variant.value,
            "iterations": trace.iterations,
            "stop_reason": trace.stop_reason,
            "final_point": trace.final_point.tolist(),
            "best_point": best_point.tolist(),
            "best_value": best_value,
            "eval_count": oracle.eval_count,
            "trace": str(trace_path),
        }
        print(to_json(summary) if args.format == "json" else format_table(summary))
        return EXIT_OK

    except SimplexGradError as e:
        print(f"Error: {e}", file=sys.stderr)
        return _exit_code(e)
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
