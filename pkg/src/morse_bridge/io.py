"""Reading data sets and lattice files; writing report artifacts."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import List, Optional

from .complex1d import DataSet, EdgeSet, edges_of_intervals
from .errors import DomainError, GridError, MorseBridgeError


class InputError(MorseBridgeError):
    pass


def _detect_format(path: Path, fmt: Optional[str]) -> str:
    if fmt:
        return fmt
    return "json" if path.suffix.lower() == ".json" else "csv"


def read_dataset(path, fmt: Optional[str] = None, sigma2: Optional[float] = None) -> DataSet:
    """Load ``x,y`` points from CSV (header ``x,y``) or JSON.

    JSON files look like ``{"points": [[x, y], ...], "sigma2": v}``. An
    explicit ``sigma2`` overrides the file.
    """
    path = Path(path)
    fmt = _detect_format(path, fmt)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if fmt == "json":
        try:
            doc = json.loads(text)
            points = [(float(x), float(y)) for x, y in doc["points"]]
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"{path}: malformed data JSON ({exc})") from exc
        if sigma2 is None:
            sigma2 = doc.get("sigma2")
    elif fmt == "csv":
        points = _read_csv(path, text)
    else:
        raise InputError(f"unknown input format {fmt!r}")
    if sigma2 is None:
        raise InputError("sigma2 is required (pass --sigma2 or put it in the JSON file)")
    try:
        return DataSet(tuple(points), float(sigma2))
    except DomainError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _read_csv(path: Path, text: str) -> List[tuple]:
    rows = list(csv.reader(text.splitlines()))
    if not rows or [c.strip().lower() for c in rows[0]] != ["x", "y"]:
        raise InputError(f"{path}: row 1: expected header 'x,y'")
    points = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        try:
            if len(row) != 2:
                raise ValueError(f"expected 2 fields, got {len(row)}")
            x, y = float(row[0]), float(row[1])
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ValueError("non-finite value")
        except ValueError as exc:
            raise InputError(f"{path}: row {lineno}: {exc}") from None
        points.append((x, y))
    return points


def read_lattice(path) -> List[EdgeSet]:
    """Blocks as lists of ``[i, j]`` vertex-index intervals."""
    path = Path(path)
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read lattice file {path}: {exc}") from exc
    if not isinstance(doc, list):
        raise InputError(f"{path}: lattice file must hold a JSON list of blocks")
    blocks = []
    for k, block in enumerate(doc):
        try:
            blocks.append(edges_of_intervals(block))
        except (GridError, TypeError, ValueError) as exc:
            raise InputError(f"{path}: block {k}: {exc}") from exc
    return blocks


def write_report(report, path) -> None:
    Path(path).write_text(json.dumps(report.to_dict(), indent=2) + "\n")


def write_bands(report, path) -> None:
    x, y = report.data.x, report.data.y
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "x_left", "x_right", "y_left", "y_right", "alpha", "beta", "probability"])
        for n in report.bands.edges:
            w.writerow([
                n, x[n - 1], x[n], y[n - 1], y[n],
                report.bands.alpha(n), report.bands.beta(n), f"{report.factors[n]:.6g}",
            ])


def morse_graph_dot(report) -> str:
    L = report.lattice
    x = report.data.x
    lines = ["digraph morse_graph {", "  node [shape=box];"]
    for t in report.tiles:
        spans = " u ".join(f"[{x[i]:g}, {x[j]:g}]" for i, j in t.intervals)
        tags = ", ".join(t.tags) if t.tags else "no conclusion"
        lines.append(f'  {t.label} [label="{t.label}: {spans}\\n{tags}"];')
    # arrows point from a tile down to the tiles it can flow into
    for lower, upper in report.tiling.graph.covers():
        lines.append(f"  {L.label(upper)} -> {L.label(lower)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_dot(report, path) -> None:
    Path(path).write_text(morse_graph_dot(report))
