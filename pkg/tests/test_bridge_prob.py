import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morse_bridge.bridge_prob import (
    Band,
    BridgeSegment,
    PiArgs,
    band_probability,
    pi_series,
    product_band_probability,
)
from morse_bridge.errors import ConvergenceError, DomainError


def reflection(seg, barrier):
    """Exact single-barrier survival of a bridge below ``barrier``."""
    return 1.0 - math.exp(-2.0 * (barrier - seg.y_left) * (barrier - seg.y_right) / (seg.sigma2 * seg.width))


@pytest.mark.parametrize("a,b", [(0.0, 0.5), (0.3, 1.2), (2.0, 0.1), (1.0, 1.0)])
def test_pi_reduces_to_single_line_when_lower_line_is_far(a, b):
    assert pi_series(PiArgs(a, b, 10.0, 10.0)) == pytest.approx(math.exp(-2 * a * b), abs=1e-12)


def test_band_probability_matches_reflection_with_distant_floor():
    seg = BridgeSegment(0.0, 0.1, 0.2, 0.25, 1 / 16)
    assert band_probability(seg, Band(-50.0, 0.3)) == pytest.approx(reflection(seg, 0.3), abs=1e-13)


def test_band_probability_endpoint_on_or_outside_barrier_is_zero():
    seg = BridgeSegment(0.0, 1.0, 0.5, 0.7, 1.0)
    assert band_probability(seg, Band(0.0, 0.7)) == 0.0
    assert band_probability(seg, Band(0.5, 1.0)) == 0.0
    assert band_probability(seg, Band(0.8, 1.0)) == 0.0


def test_example3_edge10_factor():
    seg = BridgeSegment(0.9, 1.0, 0.95, 0.97, 1 / 16)
    assert band_probability(seg, Band(0.0, 1.0)) == pytest.approx(0.3812, abs=5e-4)


def test_domain_errors():
    with pytest.raises(DomainError):
        PiArgs(-1.0, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        PiArgs(1.0, 0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        BridgeSegment(1.0, 1.0, 0.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        BridgeSegment(0.0, 1.0, 0.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        Band(1.0, 1.0)
    with pytest.raises(DomainError):
        pi_series(PiArgs(1, 1, 1, 1), tol=0.0)
    with pytest.raises(DomainError):
        product_band_probability([])


def test_slow_series_raises_convergence_error():
    with pytest.raises(ConvergenceError):
        pi_series(PiArgs(1e-4, 1e-4, 1e-4, 1e-4))


def test_product_is_product_of_factors():
    pairs = [
        (BridgeSegment(0.0, 0.1, 0.2, 0.25, 0.1), Band(0.1, 0.4)),
        (BridgeSegment(0.1, 0.2, 0.25, 0.3, 0.1), Band(0.0, 0.5)),
    ]
    assert product_band_probability(pairs) == pytest.approx(
        band_probability(*pairs[0]) * band_probability(*pairs[1]), rel=1e-15
    )


pos = st.floats(1e-3, 5.0, allow_nan=False)


@settings(max_examples=300, deadline=None)
@given(pos, pos, pos, pos)
def test_pi_in_unit_interval(a, b, c, d):
    assert 0.0 <= pi_series(PiArgs(a, b, c, d)) <= 1.0


@settings(max_examples=200, deadline=None)
@given(
    st.floats(0.01, 0.99),
    st.floats(0.01, 0.99),
    st.floats(0.001, 0.5),
    st.floats(1e-3, 2.0),
)
def test_time_reversal_symmetry(yl, yr, width, sigma2):
    seg = BridgeSegment(0.0, width, yl, yr, sigma2)
    band = Band(0.0, 1.0)
    assert band_probability(seg, band) == pytest.approx(band_probability(seg.reversed(), band), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.3, 0.7), st.floats(0.3, 0.7), st.floats(0.01, 0.29), st.floats(0.0, 0.5))
def test_widening_the_band_never_lowers_probability(yl, yr, half, extra):
    seg = BridgeSegment(0.0, 0.1, yl, yr, 1 / 16)
    inner = Band(0.5 - half - 0.2, 0.5 + half + 0.2)
    outer = Band(inner.alpha - extra, inner.beta + extra)
    assert band_probability(seg, inner) <= band_probability(seg, outer) + 1e-15


def test_reflection_symmetry_about_band_centre(rng):
    for _ in range(200):
        yl, yr = rng.uniform(0.05, 0.95, size=2)
        seg = BridgeSegment(0.0, float(rng.uniform(0.01, 0.3)), yl, yr, float(rng.uniform(0.01, 1.0)))
        mirrored = BridgeSegment(seg.x_left, seg.x_right, 1 - yl, 1 - yr, seg.sigma2)
        band = Band(0.0, 1.0)
        assert band_probability(seg, band) == pytest.approx(band_probability(mirrored, band), abs=1e-12)


def test_symmetric_args_are_symmetric():
    # swapping the roles of the two lines leaves pi unchanged
    for a, b, c, d in np.random.default_rng(3).uniform(0.05, 2.0, size=(50, 4)):
        assert pi_series(PiArgs(a, b, c, d)) == pytest.approx(pi_series(PiArgs(c, d, a, b)), abs=1e-14)
