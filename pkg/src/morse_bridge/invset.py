"""Lattices of forward-invariant edge sets.

A set ``S`` is forward invariant under ``F`` when ``F(S)`` is contained in
``S``, i.e. when it is closed under following the directed graph
``edge -> image edges``. Such sets are the down-sets of the reachability
preorder, so they are enumerated over the condensation of that graph.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .comb_map import CombMap
from .complex1d import EdgeSet
from .errors import CapExceededError, NotClosedError, NotInvariantError
from .order import FiniteLattice, join_irreducibles

DEFAULT_CAP = 4096


def _set_key(S: EdgeSet):
    return (len(S), tuple(sorted(S)))


@dataclass(frozen=True, eq=False)
class BlockLattice:
    """A family of edge sets closed under union and intersection.

    Element identifiers are the integer positions in ``sets``; ``sets[0]`` is
    always the empty set. ``source`` records where the family came from.
    """

    sets: Tuple[EdgeSet, ...]
    top: EdgeSet
    source: str = "user"
    _irreducibles: Optional[Dict[int, int]] = field(default=None, repr=False)

    def __post_init__(self):
        index = {S: i for i, S in enumerate(self.sets)}
        object.__setattr__(self, "_index", index)
        if len(index) != len(self.sets):
            raise ValueError("duplicate sets in lattice family")

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __contains__(self, S):
        return frozenset(S) in self._index

    def id_of(self, S: Iterable[int]) -> int:
        return self._index[frozenset(S)]

    def label(self, i: int) -> str:
        return f"K{i}"

    @property
    def bottom_id(self) -> int:
        return self._index[frozenset()]

    @property
    def top_id(self) -> int:
        return self._index[self.top]

    def meet(self, a: int, b: int) -> int:
        return self._index[self.sets[a] & self.sets[b]]

    def join(self, a: int, b: int) -> int:
        return self._index[self.sets[a] | self.sets[b]]

    @property
    def lattice(self) -> FiniteLattice:
        return FiniteLattice(
            tuple(range(len(self.sets))), self.meet, self.join, self.bottom_id, self.top_id
        )

    def irreducibles(self) -> Dict[int, int]:
        """Join-irreducible ids mapped to their immediate predecessor ids."""
        if self._irreducibles is not None:
            return dict(self._irreducibles)
        return join_irreducibles(self.lattice)

    def gamma(self, n: int) -> int:
        """Smallest member containing edge ``n`` (intersection of all such)."""
        acc = self.top
        for S in self.sets:
            if n in S:
                acc = acc & S
        return self._index[acc]


def member_of_invset(S: Iterable[int], M: CombMap) -> bool:
    S = frozenset(S)
    return all(M.image[n] <= S for n in S)


def _reach_graph(M: CombMap) -> nx.DiGraph:
    G = nx.DiGraph()
    G.add_nodes_from(M.complex.edges)
    for n, img in M.image.items():
        G.add_edges_from((n, k) for k in img)
    return G


def invset_generators(M: CombMap) -> List[Tuple[EdgeSet, EdgeSet]]:
    """``(closure, component)`` for every strongly connected component.

    The forward closures are exactly the join-irreducible invariant sets; the
    immediate predecessor of a closure is the closure minus its component.
    """
    G = _reach_graph(M)
    C = nx.condensation(G)
    out = []
    for c in C.nodes:
        members = frozenset(C.nodes[c]["members"])
        reach = set(members)
        for d in nx.descendants(C, c):
            reach |= C.nodes[d]["members"]
        out.append((frozenset(reach), members))
    out.sort(key=lambda t: _set_key(t[0]))
    return out


def enumerate_invset(M: CombMap, cap: int = DEFAULT_CAP) -> BlockLattice:
    """All forward-invariant edge sets of ``M``.

    Raises :class:`CapExceededError` carrying the generators when more than
    ``cap`` sets exist.
    """
    G = _reach_graph(M)
    C = nx.condensation(G)
    # successors (images) are decided before the components mapping into them
    order = list(reversed(list(nx.topological_sort(C))))
    succ = {c: set(C.successors(c)) for c in C.nodes}
    found: List[EdgeSet] = []
    chosen: set = set()

    def gens():
        return [g for g, _ in invset_generators(M)]

    def rec(k: int):
        if k == len(order):
            found.append(frozenset().union(*(C.nodes[c]["members"] for c in chosen)))
            if len(found) > cap:
                raise CapExceededError(
                    f"more than {cap} forward-invariant sets", generators=gens()
                )
            return
        c = order[k]
        rec(k + 1)
        if succ[c] <= chosen:
            chosen.add(c)
            rec(k + 1)
            chosen.discard(c)

    rec(0)
    found.sort(key=_set_key)
    lat = BlockLattice(tuple(found), M.complex.top, source="auto")
    irr = {}
    for closure, comp in invset_generators(M):
        irr[lat.id_of(closure)] = lat.id_of(closure - comp)
    object.__setattr__(lat, "_irreducibles", irr)
    return lat


def validate_sublattice(
    sets: Sequence[Iterable[int]], M: CombMap, source: str = "user"
) -> BlockLattice:
    """Check a user family of blocks and wrap it as a :class:`BlockLattice`.

    The empty set and the full edge set are adjoined (with a warning) when
    missing.
    """
    top = M.complex.top
    family: List[EdgeSet] = [frozenset()]
    for S in sets:
        S = M.complex.check(S)
        if S not in family and S != top:
            family.append(S)
    missing = [name for name, S in (("empty set", frozenset()), ("top", top))
               if all(frozenset(T) != S for T in sets)]
    if missing:
        warnings.warn(f"adjoining {' and '.join(missing)} to the block family", stacklevel=2)
    family.append(top)
    for i, S in enumerate(family):
        for n in sorted(S):
            leak = M.image[n] - S
            if leak:
                raise NotInvariantError(
                    f"block K{i} = edges {sorted(S)} is not forward invariant: "
                    f"edge {n} maps to {sorted(leak)} outside it",
                    block=S,
                    edge=n,
                )
    fam = set(family)
    for (i, A), (j, B) in combinations(enumerate(family), 2):
        if A & B not in fam or A | B not in fam:
            raise NotClosedError(
                f"blocks K{i} and K{j} are not closed under intersection/union",
                pair=(A, B),
            )
    return BlockLattice(tuple(family), top, source=source)


def trivial_lattice(M: CombMap) -> BlockLattice:
    return BlockLattice((frozenset(), M.complex.top), M.complex.top, source="trivial")
