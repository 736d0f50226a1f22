"""Conley indices of index pairs in the grid complex.

Homology is taken with integer coefficients. The relative boundary matrix of
a pair ``(K, K0)`` is diagonalised with unimodular row and column operations,
which yields explicit bases for ``H_0`` and ``H_1``; the multivalued map is
then pushed through a chain selector and read off in those bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

import sympy

from .comb_map import CombMap, FullMap
from .complex1d import EdgeSet, down_closure
from .errors import ConleyError

Matrix = List[List[int]]
Selector = Callable[[int, Sequence[int]], int]


def _identity(k: int) -> Matrix:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def diagonalize(A: Matrix):
    """Return ``(D, U, Uinv, V, Vinv)`` with ``U @ A @ V == D`` diagonal.

    ``U`` and ``V`` are unimodular; diagonal entries are made non-negative.
    This is enough to read off ranks and torsion; the divisibility chain of
    a full Smith form is not enforced.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [row[:] for row in A]
    U, Ui, V, Vi = _identity(m), _identity(m), _identity(n), _identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, k):  # row_i += k * row_j
        D[i] = [a + k * b for a, b in zip(D[i], D[j])]
        U[i] = [a + k * b for a, b in zip(U[i], U[j])]
        for row in Ui:
            row[j] -= k * row[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_col(i, j, k):  # col_i += k * col_j
        for M in (D, V):
            for row in M:
                row[i] += k * row[j]
        Vi[j] = [a - k * b for a, b in zip(Vi[j], Vi[i])]

    for t in range(min(m, n)):
        while True:
            piv = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not piv:
                break
            _, i, j = min(piv)
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = D[t][t]
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    done = done and D[i][t] == 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    done = done and D[t][j] == 0
            if done:
                break
        if t < m and t < n and D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
            for row in Ui:
                row[t] = -row[t]
    return D, U, Ui, V, Vi


def _matvec(A: Matrix, x: Sequence[int]) -> List[int]:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def _col(A: Matrix, j: int) -> List[int]:
    return [row[j] for row in A]


@dataclass(frozen=True)
class RelativeHomology:
    """Bases of ``H_*(down(K), down(K0))`` for a 1D pair."""

    edges: Tuple[int, ...]
    vertices: Tuple[int, ...]
    boundary: Matrix
    rank: int
    U: Matrix
    Uinv: Matrix
    V: Matrix
    Vinv: Matrix

    @property
    def betti(self) -> Tuple[int, int]:
        return (len(self.vertices) - self.rank, len(self.edges) - self.rank)

    def h1_basis(self) -> List[List[int]]:
        return [_col(self.V, j) for j in range(self.rank, len(self.edges))]

    def h0_basis(self) -> List[List[int]]:
        return [_col(self.Uinv, j) for j in range(self.rank, len(self.vertices))]

    def h1_coords(self, z: Sequence[int]) -> List[int]:
        c = _matvec(self.Vinv, z)
        if any(c[: self.rank]):
            raise ConleyError("chain is not a relative cycle")
        return c[self.rank:]

    def h0_coords(self, c: Sequence[int]) -> List[int]:
        return _matvec(self.U, c)[self.rank:]


def relative_homology(K: EdgeSet, K0: EdgeSet) -> RelativeHomology:
    K, K0 = frozenset(K), frozenset(K0)
    if not K0 <= K:
        raise ConleyError("index pair needs K0 contained in K")
    _, VK = down_closure(K)
    _, VK0 = down_closure(K0)
    E = tuple(sorted(K - K0))
    Vs = tuple(sorted(VK - VK0))
    row = {v: i for i, v in enumerate(Vs)}
    B = [[0] * len(E) for _ in Vs]
    for j, n in enumerate(E):
        if n in row:
            B[row[n]][j] += 1
        if n - 1 in row:
            B[row[n - 1]][j] -= 1
    if E and Vs:
        D, U, Ui, V, Vi = diagonalize(B)
    else:
        D, U, Ui, V, Vi = B, _identity(len(Vs)), _identity(len(Vs)), _identity(len(E)), _identity(len(E))
    r = 0
    while r < min(len(Vs), len(E)) and D[r][r]:
        if D[r][r] != 1:
            raise ConleyError(f"torsion coefficient {D[r][r]} in a 1D relative pair")
        r += 1
    return RelativeHomology(E, Vs, B, r, U, Ui, V, Vi)


def leftmost(v: int, admissible: Sequence[int]) -> int:
    return admissible[0]


def admissible_vertices(K: EdgeSet, F: CombMap) -> Dict[int, Tuple[int, ...]]:
    """Candidate selector values for every vertex of ``down(K)``.

    A vertex may go to any vertex lying in the image of every adjacent edge
    of ``K``; this keeps each edge's chain inside that edge's image.
    """
    out = {}
    _, VK = down_closure(K)
    for v in sorted(VK):
        cand = None
        for n in (v, v + 1):
            if n in K:
                _, verts = down_closure(F.image[n])
                cand = verts if cand is None else cand & verts
        if not cand:
            raise ConleyError(f"images of the edges at vertex {v} do not overlap")
        out[v] = tuple(sorted(cand))
    return out


@dataclass(frozen=True)
class ChainMap:
    vertex: Dict[int, int]
    edge: Dict[int, Dict[int, int]]


def path_chain(a: int, b: int) -> Dict[int, int]:
    """The 1-chain from vertex ``a`` to vertex ``b`` along the line."""
    if a <= b:
        return {n: 1 for n in range(a + 1, b + 1)}
    return {n: -1 for n in range(b + 1, a + 1)}


def chain_selector(K: EdgeSet, F: CombMap, select: Selector = leftmost) -> ChainMap:
    adm = admissible_vertices(K, F)
    sigma = {}
    for v, cand in adm.items():
        s = select(v, cand)
        if s not in cand:
            raise ConleyError(f"selector chose {s} outside the admissible set at {v}")
        sigma[v] = s
    edge = {}
    for n in sorted(K):
        ch = path_chain(sigma[n - 1], sigma[n])
        if not set(ch) <= F.image[n]:
            raise ConleyError(f"chain of edge {n} leaves its image")
        edge[n] = ch
    return ChainMap(sigma, edge)


def _boundary_of(chain: Dict[int, int]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for n, c in chain.items():
        out[n] = out.get(n, 0) + c
        out[n - 1] = out.get(n - 1, 0) - c
    return {v: c for v, c in out.items() if c}


def check_chain_map(phi: ChainMap, K: EdgeSet, K0: EdgeSet) -> None:
    """Assert boundary(phi_1(e)) == phi_0(boundary(e)) modulo ``down(K0)``."""
    _, VK0 = down_closure(K0)
    for n, ch in phi.edge.items():
        lhs = {v: c for v, c in _boundary_of(ch).items() if v not in VK0}
        rhs: Dict[int, int] = {}
        for v, s in ((n, 1), (n - 1, -1)):
            w = phi.vertex[v]
            rhs[w] = rhs.get(w, 0) + s
        rhs = {v: c for v, c in rhs.items() if c and v not in VK0}
        if lhs != rhs:
            raise ConleyError(f"selector is not a chain map at edge {n}")


@dataclass(frozen=True)
class ShiftInvariants:
    """Necessary conditions for shift equivalence of an integer matrix.

    ``charpoly`` is the characteristic polynomial with every factor of the
    variable removed (highest degree first), ``rank`` its degree and
    ``traces`` the traces of the first ``rank`` powers. Equal records are
    necessary for shift equivalence; different records rule it out.
    """

    charpoly: Tuple[int, ...]
    rank: int
    traces: Tuple[int, ...]

    @property
    def trivial(self) -> bool:
        return self.rank == 0


def _matmul(A: Matrix, B: Matrix) -> Matrix:
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def shift_invariants(A: Matrix) -> ShiftInvariants:
    k = len(A)
    if k == 0:
        return ShiftInvariants((1,), 0, ())
    if any(len(row) != k for row in A):
        raise ConleyError("index matrix must be square")
    coeffs = [int(c) for c in sympy.Matrix(A).charpoly().all_coeffs()]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    deg = len(coeffs) - 1
    traces, P = [], A
    for _ in range(deg):
        traces.append(sum(P[i][i] for i in range(k)))
        P = _matmul(P, A)
    return ShiftInvariants(tuple(coeffs), deg, tuple(traces))


@dataclass(frozen=True)
class ConleyIndex:
    matrices: Dict[int, Matrix]
    betti: Tuple[int, int]

    def invariants(self) -> Dict[int, ShiftInvariants]:
        return {k: shift_invariants(M) for k, M in self.matrices.items()}


def induced_map(
    pair: Tuple[EdgeSet, EdgeSet],
    F,
    select: Selector = leftmost,
    homology: Optional[RelativeHomology] = None,
) -> ConleyIndex:
    """Matrices of the map induced by ``F`` on ``H_0`` and ``H_1`` of the pair."""
    K, K0 = frozenset(pair[0]), frozenset(pair[1])
    top = F.top if isinstance(F, FullMap) else F
    for S, name in ((K, "K"), (K0, "K0")):
        for n in S:
            if not top.image[n] <= S:
                raise ConleyError(f"{name} is not forward invariant at edge {n}")
            img = top.image[n]
            if max(img) - min(img) + 1 != len(img):
                raise ConleyError(f"image of edge {n} is not an interval")
    H = homology or relative_homology(K, K0)
    phi = chain_selector(K, top, select)
    check_chain_map(phi, K, K0)
    epos = {n: i for i, n in enumerate(H.edges)}
    vpos = {v: i for i, v in enumerate(H.vertices)}

    cols1 = []
    for z in H.h1_basis():
        img = [0] * len(H.edges)
        for n, c in zip(H.edges, z):
            if c:
                for m, d in phi.edge[n].items():
                    if m in epos:
                        img[epos[m]] += c * d
        cols1.append(H.h1_coords(img))
    cols0 = []
    for g in H.h0_basis():
        img = [0] * len(H.vertices)
        for v, c in zip(H.vertices, g):
            w = phi.vertex[v]
            if c and w in vpos:
                img[vpos[w]] += c
        cols0.append(H.h0_coords(img))
    as_matrix = lambda cols: [list(r) for r in zip(*cols)] if cols else []
    return ConleyIndex({0: as_matrix(cols0), 1: as_matrix(cols1)}, H.betti)


FIXED_POINT = "fixed-point"
UNSTABLE_FIXED_POINT = "unstable-fixed-point"
PERIOD_TWO = "period-2-orbit"

_ID = ShiftInvariants((1, -1), 1, (1,))
_MINUS_ID = ShiftInvariants((1, 1), 1, (-1,))
_SWAP = ShiftInvariants((1, 0, -1), 2, (0, 2))


def interpret_index(idx: ConleyIndex) -> FrozenSet[str]:
    """Tag the three index patterns that force a known invariant set.

    Each pattern requires the other dimension to be trivial; anything else
    yields no tag.
    """
    inv = idx.invariants()
    h0, h1 = inv.get(0), inv.get(1)
    tags = set()
    if h1 is None or h1.trivial:
        if h0 == _ID:
            tags.add(FIXED_POINT)
        elif h0 == _SWAP:
            tags.add(PERIOD_TWO)
    if (h0 is None or h0.trivial) and h1 in (_ID, _MINUS_ID):
        tags.add(UNSTABLE_FIXED_POINT)
    return frozenset(tags)
