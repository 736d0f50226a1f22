import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from morse_bridge.comb_map import (
    CombMap,
    build_F_K,
    build_F_K_indices,
    build_F_mu,
    extend_full,
    is_enclosure,
    restrict_map,
)
from morse_bridge.complex1d import (
    Complex,
    DataSet,
    build_complex,
    down_closure,
    edges_of_intervals,
    geometric_realization,
    restrict_complex,
)
from morse_bridge.errors import DomainError, EmptyImageError, GridError

from _data import example, random_dataset, random_interval_map


def test_dataset_validation():
    with pytest.raises(DomainError):
        DataSet(((0.0, 0.5), (0.0, 0.5)), 1.0)
    with pytest.raises(DomainError):
        DataSet(((0.0, 0.5), (1.0, 1.5)), 1.0)
    with pytest.raises(DomainError):
        DataSet(((0.0, 0.5), (1.0, 0.5)), -1.0)


def test_complex_indices():
    C = build_complex(example("example1"))
    assert C.edges == tuple(range(1, 11))
    assert C.vertices == tuple(range(11))
    assert C.adjacent_edges(0) == (1,) and C.adjacent_edges(5) == (5, 6)
    assert C.vertex_index(0.3) == 3
    with pytest.raises(GridError):
        C.vertex_index(0.35)
    with pytest.raises(GridError):
        C.check({11})


def test_restricted_complex_keeps_parent_indices():
    C = build_complex(example("example3"))
    R = restrict_complex(C, range(3, 9))
    assert R.edges == tuple(range(3, 9)) and R.vertices == tuple(range(2, 9))
    assert R.vertex_index(0.2) == 2
    with pytest.raises(GridError):
        R.vertex_index(0.1)


@given(st.sets(st.integers(1, 30)))
def test_geometric_realization_round_trip(S):
    runs = geometric_realization(S)
    assert edges_of_intervals(runs) == frozenset(S)
    # runs are maximal: consecutive runs never touch
    assert all(b[0] > a[1] for a, b in zip(runs, runs[1:]))


def test_edges_of_intervals_accepts_numpy_ints_and_rejects_floats():
    assert edges_of_intervals([[np.int64(2), np.int64(4)]]) == {3, 4}
    with pytest.raises(GridError):
        edges_of_intervals([[0.5, 2]])
    with pytest.raises(GridError):
        edges_of_intervals([[3, 3]])


def test_down_closure():
    E, V = down_closure({2, 3, 7})
    assert E == {2, 3, 7} and V == {1, 2, 3, 6, 7}


def test_F_mu_example3():
    T = example("example3")
    M = build_F_mu(T, build_complex(T))
    # [0.2,0.4] and [0.6,0.8] swap
    assert M({3, 4}) == {7}
    assert M({7, 8}) == {3, 4}
    assert M.image[6] == {3, 4, 5, 6}
    assert M.image[10] == {10}
    assert M.interval_valued


def test_F_mu_warns_on_grid_value():
    T = DataSet(((0.0, 0.25), (0.5, 0.5), (1.0, 0.75)), 1.0)
    with pytest.warns(UserWarning):
        M = build_F_mu(T, build_complex(T))
    # closed intersection: the vertex value touches both neighbours
    assert M.image[1] == {1, 2}


def test_F_mu_is_minimal_in_enclosure_order(rng):
    for _ in range(30):
        T = random_dataset(rng, 8)
        C = build_complex(T)
        M = build_F_mu(T, C)
        # full band map encloses everything
        top = build_F_K_indices(C, {n: (0, 8) for n in C.edges})
        assert is_enclosure(M, M) and is_enclosure(M, top)
        assert not is_enclosure(top, M) or M == top


def test_enclosure_is_a_partial_order(rng):
    maps = [random_interval_map(rng, 5) for _ in range(25)]
    for A in maps:
        assert is_enclosure(A, A)
        for B in maps:
            if is_enclosure(A, B) and is_enclosure(B, A):
                assert A.image == B.image
            for Cm in maps:
                if is_enclosure(A, B) and is_enclosure(B, Cm):
                    assert is_enclosure(A, Cm)


def test_build_F_K_coordinates_and_indices_agree():
    C = build_complex(example("example3"))
    coords = {n: (0.0, 1.0) for n in C.edges}
    coords.update({3: (0.6, 0.8), 4: (0.6, 0.8), 7: (0.2, 0.4), 8: (0.2, 0.4)})
    M = build_F_K(C, coords)
    assert M.image[3] == {7, 8} and M.image[7] == {3, 4} and M.image[1] == set(range(1, 11))
    idx = {n: (C.vertex_index(a), C.vertex_index(b)) for n, (a, b) in coords.items()}
    assert build_F_K_indices(C, idx) == M
    with pytest.raises(GridError):
        build_F_K(C, {**coords, 1: (0.05, 1.0)})
    with pytest.raises(GridError):
        build_F_K_indices(C, {**idx, 1: (5, 5)})


def test_comb_map_validation():
    C = Complex((0.0, 0.5, 1.0), (1, 2))
    with pytest.raises(EmptyImageError):
        CombMap(C, {1: set(), 2: {1}})
    with pytest.raises(DomainError):
        CombMap(C, {1: {1}})
    with pytest.raises(GridError):
        CombMap(C, {1: {3}, 2: {1}})


def test_extend_full_vertex_images():
    T = example("example3")
    F = extend_full(build_F_mu(T, build_complex(T)))
    E, V = F.vertex_image[5]
    assert E == F.top.image[5] | F.top.image[6]
    assert V == down_closure(E)[1]


def test_restrict_map():
    T = example("example3")
    M = build_F_mu(T, build_complex(T))
    R = restrict_map(M, range(3, 9))
    assert R.complex.top == set(range(3, 9))
    assert all(R.image[n] == M.image[n] & R.complex.top for n in R.complex.edges)
    with pytest.raises(EmptyImageError):
        restrict_map(M, [3, 4])  # both edges map to edge 7 only
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        restrict_map(M, [10])
