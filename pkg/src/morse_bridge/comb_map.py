"""Combinatorial multivalued maps on the edges of the grid complex."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Mapping, Tuple

from .complex1d import Complex, DataSet, EdgeSet, down_closure, restrict_complex
from .errors import DomainError, EmptyImageError, GridError


def _is_run(S: FrozenSet[int]) -> bool:
    return bool(S) and max(S) - min(S) + 1 == len(S)


@dataclass(frozen=True)
class CombMap:
    complex: Complex
    image: Mapping[int, EdgeSet]

    def __post_init__(self):
        img = {int(n): frozenset(v) for n, v in self.image.items()}
        if set(img) != set(self.complex.edges):
            raise DomainError("map must assign an image to every edge of its complex")
        for n, v in img.items():
            if not v:
                raise EmptyImageError(f"edge {n} has an empty image")
            self.complex.check(v)
        object.__setattr__(self, "image", img)

    def __hash__(self):
        return hash((self.complex, tuple(sorted((n, tuple(sorted(v))) for n, v in self.image.items()))))

    @property
    def interval_valued(self) -> bool:
        return all(_is_run(v) for v in self.image.values())

    def __call__(self, S: Iterable[int]) -> EdgeSet:
        out = set()
        for n in S:
            out |= self.image[n]
        return frozenset(out)


@dataclass(frozen=True)
class FullMap:
    """Extension of a top-cell map to vertices.

    ``vertex_image[v]`` is ``(edges, vertices)`` of the down-set of the
    union of the images of the edges adjacent to ``v``.
    """

    edge_image: Mapping[int, EdgeSet]
    vertex_image: Mapping[int, Tuple[FrozenSet[int], FrozenSet[int]]]
    top: CombMap


def build_F_mu(T: DataSet, C: Complex) -> CombMap:
    """Edges meeting the closed range of the linear interpolant on each edge."""
    x, y = T.x, T.y
    if len(x) != len(C.x) or any(a != b for a, b in zip(x, C.x)):
        raise DomainError("complex was not built from this data set")
    grid = set(x)
    hits = [n for n, v in enumerate(y) if v in grid]
    if hits:
        warnings.warn(
            f"data values y_n for n in {hits} coincide with grid vertices; "
            "the minimal map sits on a knife edge there",
            stacklevel=2,
        )
    image = {}
    for n in C.edges:
        lo, hi = min(y[n - 1], y[n]), max(y[n - 1], y[n])
        image[n] = frozenset(k for k in C.edges if x[k - 1] <= hi and x[k] >= lo)
    return CombMap(C, image)


def build_F_K(C: Complex, alpha_beta: Mapping[int, Tuple[float, float]]) -> CombMap:
    """Constant-band map: edge ``n`` goes to every edge inside ``[alpha(n), beta(n)]``.

    ``alpha_beta`` holds grid coordinates; values off the grid are rejected.
    """
    idx = {}
    for n, (a, b) in alpha_beta.items():
        idx[n] = (C.vertex_index(a), C.vertex_index(b))
    return build_F_K_indices(C, idx)


def build_F_K_indices(C: Complex, bands: Mapping[int, Tuple[int, int]]) -> CombMap:
    verts = set(C.vertices)
    image = {}
    for n in C.edges:
        i, j = bands[n]
        if i not in verts or j not in verts:
            raise GridError(f"band [{i}, {j}] of edge {n} is not on the grid")
        if not i < j:
            raise GridError(f"band of edge {n} needs alpha < beta")
        image[n] = frozenset(k for k in C.edges if i < k <= j)
    return CombMap(C, image)


def is_enclosure(inner: CombMap, outer: CombMap) -> bool:
    if inner.complex != outer.complex:
        raise DomainError("enclosure check needs maps on the same complex")
    return all(inner.image[n] <= outer.image[n] for n in inner.complex.edges)


def extend_full(M: CombMap) -> FullMap:
    C = M.complex
    vimg: Dict[int, Tuple[FrozenSet[int], FrozenSet[int]]] = {}
    for v in C.vertices:
        union = frozenset().union(*(M.image[n] for n in C.adjacent_edges(v)))
        vimg[v] = down_closure(union)
    return FullMap(dict(M.image), vimg, M)


def restrict_map(M: CombMap, keep: Iterable[int]) -> CombMap:
    """Restrict domain and images to ``keep``; every image must survive."""
    sub = restrict_complex(M.complex, keep)
    image = {}
    for n in sub.edges:
        img = M.image[n] & sub.top
        if not img:
            raise EmptyImageError(
                f"image of edge {n} misses the restriction window entirely"
            )
        image[n] = img
    return CombMap(sub, image)
