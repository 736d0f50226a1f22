"""Finite posets and bounded distributive lattices.

Lattices are extensional: every element is enumerated and ``meet``/``join``
are total functions on the element set. Element identifiers only need to be
hashable and mutually comparable (for deterministic tie-breaking).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Tuple

from .errors import StructureError

EAGER_VALIDATION_LIMIT = 64


@dataclass(frozen=True)
class Poset:
    """A finite partial order given by its relation ``leq`` as a set of pairs."""

    elements: Tuple[Hashable, ...]
    leq: FrozenSet[Tuple[Hashable, Hashable]]

    def le(self, a, b) -> bool:
        return (a, b) in self.leq

    def lt(self, a, b) -> bool:
        return a != b and (a, b) in self.leq

    def validate(self) -> None:
        elems = set(self.elements)
        for a in elems:
            if (a, a) not in self.leq:
                raise StructureError(f"poset not reflexive at {a!r}")
        for a, b in self.leq:
            if a != b and (b, a) in self.leq:
                raise StructureError(f"poset not antisymmetric: {a!r}, {b!r}")
        for (a, b), (c, d) in product(self.leq, repeat=2):
            if b == c and (a, d) not in self.leq:
                raise StructureError(f"poset not transitive: {a!r}<={b!r}<={d!r}")

    def covers(self) -> List[Tuple[Hashable, Hashable]]:
        """Hasse diagram as ``(lower, upper)`` pairs, sorted."""
        out = []
        for a, b in self.leq:
            if a == b:
                continue
            if not any(self.lt(a, c) and self.lt(c, b) for c in self.elements):
                out.append((a, b))
        return sorted(out)

    def restrict(self, subset: Iterable[Hashable]) -> "Poset":
        keep = [e for e in self.elements if e in set(subset)]
        ks = set(keep)
        return Poset(tuple(keep), frozenset((a, b) for a, b in self.leq if a in ks and b in ks))


@dataclass(frozen=True)
class FiniteLattice:
    elements: Tuple[Hashable, ...]
    meet: Callable[[Hashable, Hashable], Hashable] = field(compare=False)
    join: Callable[[Hashable, Hashable], Hashable] = field(compare=False)
    bottom: Hashable
    top: Hashable

    def __post_init__(self):
        if len(self.elements) <= EAGER_VALIDATION_LIMIT:
            self.validate()

    def le(self, a, b) -> bool:
        return self.meet(a, b) == a

    def validate(self) -> None:
        """Exhaustively check the bounded distributive lattice axioms."""
        E = self.elements
        es = set(E)
        if self.bottom not in es or self.top not in es:
            raise StructureError("bottom/top not among the elements")
        for a, b in product(E, repeat=2):
            m, j = self.meet(a, b), self.join(a, b)
            if m not in es or j not in es:
                raise StructureError(f"meet/join of {a!r}, {b!r} leaves the lattice")
            if m != self.meet(b, a) or j != self.join(b, a):
                raise StructureError(f"meet/join not commutative at {a!r}, {b!r}")
            if self.meet(a, j) != a or self.join(a, m) != a:
                raise StructureError(f"absorption fails at {a!r}, {b!r}")
        for a in E:
            if (
                self.meet(self.bottom, a) != self.bottom
                or self.join(self.bottom, a) != a
                or self.meet(self.top, a) != a
                or self.join(self.top, a) != self.top
            ):
                raise StructureError(f"neutral-element law fails at {a!r}")
        for a, b, c in product(E, repeat=3):
            if self.meet(a, self.meet(b, c)) != self.meet(self.meet(a, b), c):
                raise StructureError("meet not associative")
            if self.join(a, self.join(b, c)) != self.join(self.join(a, b), c):
                raise StructureError("join not associative")
            if self.join(a, self.meet(b, c)) != self.meet(self.join(a, b), self.join(a, c)):
                raise StructureError(f"distributivity fails at {a!r}, {b!r}, {c!r}")


def induced_order(L: FiniteLattice) -> Poset:
    """``a <= b`` iff ``a ^ b == a``."""
    rel = frozenset((a, b) for a, b in product(L.elements, repeat=2) if L.meet(a, b) == a)
    return Poset(tuple(L.elements), rel)


def join_irreducibles(L: FiniteLattice) -> Dict[Hashable, Hashable]:
    """Map each join-irreducible element to its immediate predecessor.

    An element ``c != 0`` is join-irreducible exactly when it has a single
    lower cover; that cover is returned as the predecessor.
    """
    P = induced_order(L)
    out = {}
    for c in L.elements:
        if c == L.bottom:
            continue
        below = [a for a in L.elements if P.lt(a, c)]
        if not below:
            raise StructureError(f"{c!r} has nothing below it but is not bottom")
        covers = [a for a in below if not any(P.lt(a, b) for b in below)]
        acc = L.bottom
        for a in below:
            acc = L.join(acc, a)
        if len(covers) == 1:
            if acc != covers[0]:
                raise StructureError(f"predecessor of {c!r} is not unique")
            out[c] = covers[0]
        elif acc != c:
            # several covers whose join stays below c: not a lattice
            raise StructureError(f"{c!r} has no unique immediate predecessor")
    return out


def downset(P: Poset, q) -> FrozenSet[Hashable]:
    if q not in P.elements:
        raise KeyError(f"unknown element {q!r}")
    return frozenset(p for p in P.elements if P.le(p, q))


def linear_extension(P: Poset, key: Callable = None) -> List[Hashable]:
    """Topological order of ``P``; ties broken by smallest identifier."""
    key = key or (lambda e: e)
    indeg = {e: 0 for e in P.elements}
    succ: Dict[Hashable, list] = {e: [] for e in P.elements}
    for a, b in P.leq:
        if a != b:
            succ[a].append(b)
            indeg[b] += 1
    heap = [(key(e), i, e) for i, e in enumerate(P.elements) if indeg[e] == 0]
    heapq.heapify(heap)
    order = []
    pos = {e: i for i, e in enumerate(P.elements)}
    while heap:
        _, _, e = heapq.heappop(heap)
        order.append(e)
        for b in succ[e]:
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(heap, (key(b), pos[b], b))
    if len(order) != len(P.elements):
        raise StructureError("relation contains a cycle")
    return order
