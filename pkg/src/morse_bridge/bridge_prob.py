"""Exact two-sided excursion probabilities for Brownian bridges.

The staying probability of a bridge inside an open band follows from Doob's
series for Brownian motion escaping a pair of linear boundaries, after the
time change ``s = x / (T - x)`` that maps a bridge on ``[0, T)`` to a Wiener
process on ``[0, inf)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

from .errors import ConvergenceError, DomainError

DEFAULT_TOL = 1e-15
MAX_TERMS = 10_000


@dataclass(frozen=True)
class PiArgs:
    """Slopes ``a, c`` and intercepts ``b, d`` of the two escape lines."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not (self.a >= 0 and self.c >= 0 and self.b > 0 and self.d > 0):
            raise DomainError(
                f"pi arguments need a, c >= 0 and b, d > 0; got {self}"
            )


@dataclass(frozen=True)
class BridgeSegment:
    x_left: float
    x_right: float
    y_left: float
    y_right: float
    sigma2: float

    def __post_init__(self):
        if not self.x_right > self.x_left:
            raise DomainError("segment needs x_left < x_right")
        if not self.sigma2 > 0:
            raise DomainError("sigma2 must be positive")

    @property
    def width(self) -> float:
        return self.x_right - self.x_left

    def reversed(self) -> "BridgeSegment":
        return BridgeSegment(
            self.x_left, self.x_right, self.y_right, self.y_left, self.sigma2
        )


@dataclass(frozen=True)
class Band:
    alpha: float
    beta: float

    def __post_init__(self):
        if not self.alpha < self.beta:
            raise DomainError(f"band needs alpha < beta; got {self}")

    def contains_open(self, y: float) -> bool:
        return self.alpha < y < self.beta


def _pi_terms(m: int, a: float, b: float, c: float, d: float):
    ab, cd, ad, cb = a * b, c * d, a * d, c * b
    mm1 = m * (m - 1)
    return (
        math.exp(-2.0 * (m * m * ab + (m - 1) ** 2 * cd + mm1 * (ad + cb))),
        math.exp(-2.0 * ((m - 1) ** 2 * ab + m * m * cd + mm1 * (ad + cb))),
        math.exp(-2.0 * (m * m * (ab + cd) + mm1 * ad + m * (m + 1) * cb)),
        math.exp(-2.0 * (m * m * (ab + cd) + m * (m + 1) * ad + mm1 * cb)),
    )


def pi_series(args: PiArgs, tol: float = DEFAULT_TOL) -> float:
    """Probability that a standard Wiener process ever touches
    ``a*s + b`` from below or ``-(c*s + d)`` from above.

    Summation stops at the first ``m`` whose four term magnitudes sum below
    ``tol``. The result is clamped to ``[0, 1]``.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    a, b, c, d = args.a, args.b, args.c, args.d
    total = 0.0
    for m in range(1, MAX_TERMS + 1):
        t1, t2, t3, t4 = _pi_terms(m, a, b, c, d)
        total += (t1 + t2) - (t3 + t4)
        if t1 + t2 + t3 + t4 < tol:
            return min(1.0, max(0.0, total))
    raise ConvergenceError(
        f"pi series did not converge within {MAX_TERMS} terms for {args}"
    )


def band_probability(seg: BridgeSegment, band: Band, tol: float = DEFAULT_TOL) -> float:
    """P(the bridge over ``seg`` stays strictly inside ``band``)."""
    lo, hi = min(seg.y_left, seg.y_right), max(seg.y_left, seg.y_right)
    # touching a threshold at an endpoint already violates the open event
    if not (band.alpha < lo and hi < band.beta):
        return 0.0
    scale = 1.0 / (math.sqrt(seg.sigma2) * math.sqrt(seg.width))
    args = PiArgs(
        (band.beta - seg.y_right) * scale,
        (band.beta - seg.y_left) * scale,
        (seg.y_right - band.alpha) * scale,
        (seg.y_left - band.alpha) * scale,
    )
    return min(1.0, max(0.0, 1.0 - pi_series(args, tol)))


def product_band_probability(
    segs_and_bands: Iterable[Tuple[BridgeSegment, Band]], tol: float = DEFAULT_TOL
) -> float:
    pairs = list(segs_and_bands)
    if not pairs:
        raise DomainError("product_band_probability needs at least one segment")
    return math.prod(band_probability(s, b, tol) for s, b in pairs)
