"""Probability that blocks, lattices and Morse tilings survive for a sample path."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from . import conley
from .bridge_prob import DEFAULT_TOL, Band, BridgeSegment, band_probability
from .comb_map import CombMap, build_F_K_indices, build_F_mu, is_enclosure, restrict_map
from .complex1d import DataSet, build_complex, geometric_realization
from .errors import MorseBridgeError, PipelineError
from .invset import BlockLattice, enumerate_invset, member_of_invset, trivial_lattice, validate_sublattice
from .settings import thread_count
from .tiling import BandAssignment, MorseTiling, band_assignment, block_bands, morse_tiling


def segment(T: DataSet, n: int) -> BridgeSegment:
    x, y = T.x, T.y
    return BridgeSegment(x[n - 1], x[n], y[n - 1], y[n], T.sigma2)


def edge_factors(
    T: DataSet, bands: Dict[int, Tuple[int, int]], tol: float = DEFAULT_TOL
) -> Dict[int, float]:
    """``P(S_n(alpha(n), beta(n)))`` for every edge, bands given as vertex indices."""
    x = T.x
    edges = sorted(bands)

    def one(n):
        i, j = bands[n]
        return band_probability(segment(T, n), Band(x[i], x[j]), tol)

    workers = min(thread_count(), len(edges)) or 1
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            vals = list(pool.map(one, edges))
    else:
        vals = [one(n) for n in edges]
    return dict(zip(edges, vals))


def block_probability(
    K: Iterable[int], M: CombMap, T: DataSet, tol: float = DEFAULT_TOL
) -> float:
    """``P(f(K) inside Int(K))`` as a product over the edges of ``K``."""
    K = frozenset(K)
    if not K:
        return 1.0
    return math.prod(edge_factors(T, block_bands(K, M), tol).values())


def lattice_probability(
    L: BlockLattice, M: CombMap, T: DataSet, tol: float = DEFAULT_TOL
) -> Tuple[float, Dict[int, float], BandAssignment]:
    bands = band_assignment(L, M)
    factors = edge_factors(T, bands.bands(), tol)
    return math.prod(factors[n] for n in sorted(factors)), factors, bands


def telescoped_probability(L: BlockLattice, factors: Dict[int, float], order: Sequence[int]) -> float:
    """Product over a linear extension of the factors of newly covered edges."""
    seen: set = set()
    total = 1.0
    for q in order:
        new = L.sets[q] - seen
        for n in sorted(new):
            total *= factors[n]
        seen |= new
    return total


@dataclass
class TileReport:
    id: int
    label: str
    predecessor: str
    edges: List[int]
    intervals: List[Tuple[int, int]]
    index: conley.ConleyIndex
    tags: List[str]

    def to_dict(self, x: Sequence[float]) -> dict:
        inv = self.index.invariants()
        return {
            "id": self.label,
            "predecessor": self.predecessor,
            "edges": self.edges,
            "intervals": [list(p) for p in self.intervals],
            "coordinates": [[x[i], x[j]] for i, j in self.intervals],
            "betti": list(self.index.betti),
            "conley_index": {
                str(k): {
                    "matrix": M,
                    "charpoly_nonnilpotent": list(inv[k].charpoly),
                    "rank": inv[k].rank,
                    "traces": list(inv[k].traces),
                }
                for k, M in self.index.matrices.items()
            },
            "tags": self.tags,
        }


@dataclass
class AnalysisReport:
    data: DataSet
    lattice: BlockLattice
    bands: BandAssignment
    factors: Dict[int, float]
    total: float
    tiling: MorseTiling
    tiles: List[TileReport]
    window: Optional[Tuple[int, int]] = None
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        x, y = self.data.x, self.data.y
        L = self.lattice
        graph = self.tiling.graph
        return {
            "dataset": {
                "points": [list(p) for p in self.data.points],
                "sigma2": self.data.sigma2,
                "n_edges": self.data.n_edges,
            },
            "window": list(self.window) if self.window else None,
            "lattice": {
                "source": L.source,
                "blocks": [
                    {"id": L.label(i), "edges": sorted(S), "intervals": [list(p) for p in geometric_realization(S)]}
                    for i, S in enumerate(L.sets)
                ],
            },
            "bands": [
                {
                    "edge": n,
                    "x": [x[n - 1], x[n]],
                    "y": [y[n - 1], y[n]],
                    "gamma": L.label(self.bands.gamma[n]),
                    "alpha_index": self.bands.alpha_index[n],
                    "beta_index": self.bands.beta_index[n],
                    "alpha": self.bands.alpha(n),
                    "beta": self.bands.beta(n),
                    "probability": self.factors[n],
                }
                for n in self.bands.edges
            ],
            "total_probability": self.total,
            "morse_graph": {
                "nodes": [L.label(k) for k in graph.elements],
                "covers": [[L.label(b), L.label(a)] for a, b in graph.covers()],
            },
            "tiles": [t.to_dict(x) for t in self.tiles],
            "note": "Conley indices are compared through shift-equivalence invariants; "
            "agreement means the indices agree up to computed invariants.",
            "warnings": self.warnings,
        }


LatticeSpec = Union[None, str, Sequence[Iterable[int]]]


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except PipelineError:
        raise
    except MorseBridgeError as exc:
        raise PipelineError(name, exc) from exc


def analyze(
    T: DataSet,
    lattice: LatticeSpec = None,
    window: Optional[Tuple[int, int]] = None,
    tol: float = DEFAULT_TOL,
    cap: int = 4096,
) -> AnalysisReport:
    """Run the whole pipeline on a data set.

    ``lattice`` is ``None`` for the two-element lattice ``{empty, X}``,
    ``"auto"`` for every forward-invariant set of the minimal map, or a
    sequence of edge sets. ``window = (i, j)`` restricts the phase space to
    ``[x_i, x_j]``.
    """
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        C = build_complex(T)
        F_mu = _stage("map", build_F_mu, T, C)
        if window is not None:
            i, j = window
            if not (0 <= i < j <= T.n_edges):
                raise PipelineError("window", f"bad window {window}")
            F_mu = _stage("window", restrict_map, F_mu, range(i + 1, j + 1))
        if lattice is None:
            L = trivial_lattice(F_mu)
        elif isinstance(lattice, str):
            if lattice != "auto":
                raise PipelineError("lattice", f"unknown lattice source {lattice!r}")
            L = _stage("lattice", enumerate_invset, F_mu, cap)
        else:
            top = F_mu.complex.top
            # the empty set and the (windowed) phase space are implicit
            blocks = [frozenset(), *map(frozenset, lattice), top]
            L = _stage("lattice", validate_sublattice, blocks, F_mu)
        bands = _stage("bands", band_assignment, L, F_mu)
        tiling = _stage("tiling", morse_tiling, L)
        F_K = _stage("outer-approximation", build_F_K_indices, F_mu.complex, bands.bands())
        if not is_enclosure(F_mu, F_K):
            raise PipelineError("outer-approximation", "F_K does not enclose F_mu")
        for S in L.sets:
            if not member_of_invset(S, F_K):
                raise PipelineError("outer-approximation", f"block {sorted(S)} not invariant under F_K")
        tiles = []
        for k, p in tiling.predecessor.items():
            idx = _stage("conley", conley.induced_map, (L.sets[k], L.sets[p]), F_K)
            tiles.append(
                TileReport(
                    k,
                    L.label(k),
                    L.label(p),
                    sorted(tiling.tiles[k]),
                    geometric_realization(tiling.tiles[k]),
                    idx,
                    sorted(conley.interpret_index(idx)),
                )
            )
        factors = _stage("probability", edge_factors, T, bands.bands(), tol)
        total = math.prod(factors[n] for n in sorted(factors))
    return AnalysisReport(
        T, L, bands, factors, total, tiling, tiles, window, [str(w.message) for w in caught]
    )
