"""Morse tiles, the Morse graph, and per-edge band bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .comb_map import CombMap
from .complex1d import Complex, EdgeSet, geometric_realization
from .errors import NotInvariantError
from .invset import BlockLattice
from .order import Poset


@dataclass(frozen=True)
class Component:
    """One connected piece ``[x_i, x_j]`` of a block and its edge indices."""

    i: int
    j: int

    @property
    def edges(self) -> range:
        return range(self.i + 1, self.j + 1)


def index_sets(K: EdgeSet, C: Complex = None) -> List[Component]:
    if C is not None:
        C.check(K)
    return [Component(i, j) for i, j in geometric_realization(K)]


def tau_map(K: EdgeSet, M: CombMap) -> Dict[int, int]:
    """Component ``m`` -> the unique component holding the images of its edges.

    Components are numbered from 0, left to right.
    """
    comps = index_sets(K)
    where = {n: m for m, c in enumerate(comps) for n in c.edges}
    tau = {}
    for m, comp in enumerate(comps):
        targets = set()
        for n in comp.edges:
            for k in M.image[n]:
                if k not in where:
                    raise NotInvariantError(
                        f"edge {n} of block {sorted(K)} maps to edge {k} outside it",
                        block=K,
                        edge=n,
                    )
                targets.add(where[k])
        if len(targets) != 1:
            raise NotInvariantError(
                f"component [{comp.i}, {comp.j}] of block {sorted(K)} "
                f"maps into {len(targets)} components",
                block=K,
            )
        tau[m] = targets.pop()
    return tau


def block_bands(K: EdgeSet, M: CombMap) -> Dict[int, Tuple[int, int]]:
    """Per-edge ``(alpha, beta)`` vertex indices of a single block."""
    comps = index_sets(K)
    tau = tau_map(K, M)
    out = {}
    for m, comp in enumerate(comps):
        target = comps[tau[m]]
        for n in comp.edges:
            out[n] = (target.i, target.j)
    return out


@dataclass(frozen=True)
class BandAssignment:
    gamma: Dict[int, int]
    alpha_index: Dict[int, int]
    beta_index: Dict[int, int]
    x: Tuple[float, ...]

    @property
    def edges(self) -> List[int]:
        return sorted(self.gamma)

    def alpha(self, n: int) -> float:
        return self.x[self.alpha_index[n]]

    def beta(self, n: int) -> float:
        return self.x[self.beta_index[n]]

    def bands(self) -> Dict[int, Tuple[int, int]]:
        return {n: (self.alpha_index[n], self.beta_index[n]) for n in self.edges}


def band_assignment(L: BlockLattice, M: CombMap, C: Complex = None) -> BandAssignment:
    C = C or M.complex
    gamma, lo, hi = {}, {}, {}
    cache: Dict[int, Dict[int, Tuple[int, int]]] = {}
    for n in C.edges:
        g = L.gamma(n)
        if g not in cache:
            cache[g] = block_bands(L.sets[g], M)
        gamma[n] = g
        lo[n], hi[n] = cache[g][n]
    return BandAssignment(gamma, lo, hi, C.x)


@dataclass(frozen=True)
class MorseTiling:
    tiles: Dict[int, EdgeSet]
    predecessor: Dict[int, int]
    graph: Poset

    def tile_of(self, n: int) -> int:
        for k, T in self.tiles.items():
            if n in T:
                return k
        raise KeyError(n)


def morse_tiling(L: BlockLattice) -> MorseTiling:
    pred = L.irreducibles()
    tiles = {k: L.sets[k] - L.sets[p] for k, p in sorted(pred.items())}
    ids = tuple(sorted(pred))
    rel = frozenset(
        (a, b) for a in ids for b in ids if L.sets[a] <= L.sets[b]
    )
    return MorseTiling(tiles, dict(sorted(pred.items())), Poset(ids, rel))
