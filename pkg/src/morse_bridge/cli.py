"""Command line entry point: ``morse-bridge analyze`` and ``morse-bridge validate``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .bridge_prob import DEFAULT_TOL
from .errors import (
    CapExceededError,
    ConvergenceError,
    NotClosedError,
    NotInvariantError,
    PipelineError,
)
from .io import InputError, read_dataset, read_lattice, write_bands, write_dot, write_report
from .mc_oracle import McConfig, estimate_edges
from .probability import analyze

log = logging.getLogger("morse_bridge")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_LATTICE, EXIT_NUMERIC = 0, 1, 2, 3, 4
EMIT_CHOICES = ("report", "dot", "bands")


def _window(text: Optional[str]):
    if text is None:
        return None
    try:
        i, j = (int(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--restrict expects i:j, got {text!r}") from None
    if not 0 <= i < j:
        raise argparse.ArgumentTypeError(f"--restrict needs 0 <= i < j, got {text!r}")
    return (i, j)


def _emit(text: str):
    parts = [p.strip() for p in text.split(",") if p.strip()]
    bad = [p for p in parts if p not in EMIT_CHOICES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown --emit targets {bad}")
    return set(parts)


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("value must be positive")
    return v


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--sigma2", type=_positive)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--lattice", type=Path, help="JSON list of blocks of [i, j] vertex intervals")
    src.add_argument("--auto", action="store_true", help="use every forward-invariant set")
    p.add_argument("--restrict", type=_window, metavar="I:J")
    p.add_argument("--pi-tol", type=_positive, default=DEFAULT_TOL)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="morse-bridge", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="Morse tiling, Conley indices and validity probability")
    _add_common(a)
    a.add_argument("--out", required=True, type=Path)
    a.add_argument("--emit", type=_emit, default=set(EMIT_CHOICES))

    v = sub.add_parser("validate", help="compare analytic band probabilities with Monte Carlo")
    _add_common(v)
    v.add_argument("--samples", type=int, default=100_000)
    v.add_argument("--grid", type=int, default=1024)
    v.add_argument("--seed", type=int, default=0)
    return parser


def _run_analysis(args):
    data = read_dataset(args.input, args.format, args.sigma2)
    if args.lattice is not None:
        lattice = read_lattice(args.lattice)
    elif args.auto:
        lattice = "auto"
    else:
        lattice = None
    return analyze(data, lattice, args.restrict, tol=args.pi_tol)


def cmd_analyze(args) -> int:
    report = _run_analysis(args)
    args.out.mkdir(parents=True, exist_ok=True)
    if "report" in args.emit:
        write_report(report, args.out / "report.json")
    if "dot" in args.emit:
        write_dot(report, args.out / "morse_graph.dot")
    if "bands" in args.emit:
        write_bands(report, args.out / "bands.csv")
    for w in report.warnings:
        log.warning(w)
    print(f"total probability: {report.total:.6g}")
    for t in report.tiles:
        tags = ", ".join(t.tags) or "-"
        print(f"  tile {t.label} edges {t.edges}: {tags}")
    return EXIT_OK


def cmd_validate(args) -> int:
    report = _run_analysis(args)
    cfg = McConfig(args.samples, args.grid, args.seed)
    joint, per_edge = estimate_edges(report.data, report.bands.bands(), cfg)
    print("n,analytic,estimate,standard_error,z")
    worst = 0.0
    for n in report.bands.edges:
        e, p = per_edge[n], report.factors[n]
        z = e.z_score(p)
        worst = max(worst, abs(z))
        print(f"{n},{p:.6f},{e.estimate:.6f},{e.standard_error:.6f},{z:.3f}")
    z = joint.z_score(report.total)
    worst = max(worst, abs(z))
    print(f"total,{report.total:.6f},{joint.estimate:.6f},{joint.standard_error:.6f},{z:.3f}")
    return EXIT_OK if worst <= 4.0 else EXIT_FAIL


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, PipelineError) and exc.stage == "window":
        return EXIT_INPUT
    cause = exc.cause if isinstance(exc, PipelineError) else exc
    if isinstance(cause, InputError):
        return EXIT_INPUT
    if isinstance(cause, (NotInvariantError, NotClosedError, CapExceededError)):
        return EXIT_LATTICE
    if isinstance(cause, ConvergenceError):
        return EXIT_NUMERIC
    return EXIT_FAIL


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        if args.command == "analyze":
            return cmd_analyze(args)
        return cmd_validate(args)
    except (InputError, PipelineError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)
    except (NotInvariantError, NotClosedError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
