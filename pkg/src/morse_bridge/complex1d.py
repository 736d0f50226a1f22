"""The one-dimensional simplicial complex spanned by the data grid.

Vertex ``i`` sits at ``x_i``; edge ``n`` (1-based) is ``[x_{n-1}, x_n]``.
Every set operation downstream works on these integer indices.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from functools import cached_property
from typing import FrozenSet, Iterable, List, Sequence, Tuple

from .errors import DomainError, GridError

EdgeSet = FrozenSet[int]


@dataclass(frozen=True)
class DataSet:
    points: Tuple[Tuple[float, float], ...]
    sigma2: float

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise DomainError("a data set needs at least two points")
        if not self.sigma2 > 0:
            raise DomainError("sigma2 must be positive")
        xs = [p[0] for p in pts]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError("x-coordinates must be strictly increasing")
        for n, (_, y) in enumerate(pts):
            if not (xs[0] < y < xs[-1]):
                raise DomainError(
                    f"y_{n} = {y} lies outside the open phase space ({xs[0]}, {xs[-1]})"
                )

    @property
    def x(self) -> Tuple[float, ...]:
        return tuple(p[0] for p in self.points)

    @property
    def y(self) -> Tuple[float, ...]:
        return tuple(p[1] for p in self.points)

    @property
    def n_edges(self) -> int:
        return len(self.points) - 1


@dataclass(frozen=True)
class Complex:
    """Edges of a (possibly restricted) grid complex.

    ``x`` always holds the full parent grid so that edge and vertex indices
    stay those of the parent after restriction.
    """

    x: Tuple[float, ...]
    edges: Tuple[int, ...]

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @cached_property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(sorted({v for n in self.edges for v in (n - 1, n)}))

    @cached_property
    def top(self) -> EdgeSet:
        return frozenset(self.edges)

    def faces(self, n: int) -> Tuple[int, int]:
        return (n - 1, n)

    def edge_interval(self, n: int) -> Tuple[float, float]:
        return (self.x[n - 1], self.x[n])

    def adjacent_edges(self, v: int) -> Tuple[int, ...]:
        return tuple(n for n in (v, v + 1) if n in self.top)

    def vertex_index(self, value: float) -> int:
        """Index of the grid vertex at coordinate ``value``."""
        span = self.x[-1] - self.x[0]
        for i in self.vertices:
            if math.isclose(self.x[i], value, rel_tol=0.0, abs_tol=1e-12 * span):
                return i
        raise GridError(f"{value} is not a vertex of the complex")

    def check(self, S: Iterable[int]) -> EdgeSet:
        S = frozenset(S)
        extra = S - self.top
        if extra:
            raise GridError(f"edges {sorted(extra)} are not in the complex")
        return S


def build_complex(T: DataSet) -> Complex:
    return Complex(T.x, tuple(range(1, T.n_edges + 1)))


def down_closure(edges: Iterable[int]) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """Cells of the face-closure of an edge set as ``(edges, vertices)``."""
    E = frozenset(edges)
    return E, frozenset(v for n in E for v in (n - 1, n))


def geometric_realization(S: Iterable[int]) -> List[Tuple[int, int]]:
    """Maximal runs of consecutive edges as ``(i, j)`` vertex-index pairs."""
    out: List[Tuple[int, int]] = []
    for n in sorted(set(S)):
        if out and out[-1][1] == n - 1:
            out[-1] = (out[-1][0], n)
        else:
            out.append((n - 1, n))
    return out


def edges_of_intervals(intervals: Iterable[Sequence[int]]) -> EdgeSet:
    """Inverse of :func:`geometric_realization`."""
    out = set()
    for i, j in intervals:
        try:
            i, j = operator.index(i), operator.index(j)
        except TypeError:
            raise GridError(f"vertex indices must be integers, got [{i}, {j}]") from None
        if i >= j:
            raise GridError(f"bad vertex interval [{i}, {j}]")
        out.update(range(i + 1, j + 1))
    return frozenset(out)


def restrict_complex(C: Complex, keep: Iterable[int]) -> Complex:
    keep = C.check(keep)
    if not keep:
        raise DomainError("cannot restrict to an empty edge set")
    return Complex(C.x, tuple(sorted(keep)))
