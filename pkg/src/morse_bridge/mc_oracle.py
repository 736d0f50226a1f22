"""Monte Carlo cross-check for the analytic band probabilities.

Bridges are sampled on a dyadic grid by midpoint displacement. Between grid
points the chance of touching a barrier is accounted for with the exact
single-barrier bridge crossing probability, each barrier treated
independently. Ignoring the joint two-barrier event inside one grid cell
biases the staying probability slightly upward; the bias vanishes as the
grid is refined.

Random streams are Philox counters keyed by the seed, with the counter
offset by ``(segment, block)``. Results therefore do not depend on how
blocks are scheduled across threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .bridge_prob import Band, BridgeSegment
from .complex1d import DataSet
from .errors import DomainError
from .settings import thread_count

BLOCK = 1024


@dataclass(frozen=True)
class McConfig:
    samples: int = 100_000
    grid_per_segment: int = 1024
    seed: int = 0
    refine_tol: float = 1e-12

    def __post_init__(self):
        if self.refine_tol < 0:
            raise DomainError("refine_tol must be non-negative")
        if self.samples < 1:
            raise DomainError("samples must be at least 1")
        g = self.grid_per_segment
        if g < 2 or g & (g - 1):
            raise DomainError("grid_per_segment must be a power of two >= 2")


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    standard_error: float
    samples: int

    @classmethod
    def from_count(cls, hits: int, samples: int) -> "McEstimate":
        p = hits / samples
        return cls(p, math.sqrt(p * (1.0 - p) / samples), samples)

    def null_error(self, p: float) -> float:
        return math.sqrt(max(p * (1.0 - p), 0.0) / self.samples)

    def z_score(self, p: float) -> float:
        """Standardised difference to ``p``.

        Uses the empirical standard error, or the binomial error at ``p``
        when the empirical one degenerates to zero.
        """
        diff = self.estimate - p
        se = self.standard_error or self.null_error(p)
        if se == 0.0:
            return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return diff / se

    def agrees(self, p: float, k: float = 3.0) -> bool:
        return abs(self.z_score(p)) <= k


def _generator(seed: int, segment: int, block: int) -> np.random.Generator:
    counter = [0, 0, segment & 0xFFFFFFFFFFFFFFFF, block]
    return np.random.Generator(np.random.Philox(key=seed & (2**128 - 1), counter=counter))


def sample_bridge(seg: BridgeSegment, grid: int, rng: np.random.Generator, size: int = None) -> np.ndarray:
    """Exact bridge values at ``grid + 1`` equally spaced points.

    Returns shape ``(grid + 1,)`` or ``(size, grid + 1)``.
    """
    if grid < 2 or grid & (grid - 1):
        raise DomainError("grid must be a power of two >= 2")
    shape = (1 if size is None else size, grid + 1)
    path = np.empty(shape)
    path[:, 0] = seg.y_left
    path[:, -1] = seg.y_right
    dx = seg.width / grid
    h = grid // 2
    while h >= 1:
        # midpoints of cells of width 2h, conditional variance sigma^2 * 2h dx / 4
        left = path[:, 0:grid:2 * h]
        right = path[:, 2 * h::2 * h]
        sd = math.sqrt(seg.sigma2 * h * dx / 2.0)
        noise = rng.standard_normal(left.shape)
        path[:, h::2 * h] = 0.5 * (left + right) + sd * noise
        h //= 2
    return path[0] if size is None else path


def _stay_block_full(seg: BridgeSegment, band: Band, grid: int, rng: np.random.Generator, size: int) -> np.ndarray:
    """Reference estimator: sample every grid point, correct every cell."""
    u = rng.random(size)
    path = sample_bridge(seg, grid, rng, size)
    inside = np.all((path > band.alpha) & (path < band.beta), axis=1)
    a, b = path[:, :-1], path[:, 1:]
    scale = 2.0 / (seg.sigma2 * seg.width / grid)
    up, lo = _crossing(a, b, band, scale)
    with np.errstate(divide="ignore"):
        log_keep = np.sum(np.log1p(-up) + np.log1p(-lo), axis=1)
    return inside & (np.log(u) < log_keep)


def _crossing(a, b, band: Band, scale: float):
    """Single-barrier crossing probabilities of bridge cells with ends ``a, b``."""
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        up = np.exp(-scale * np.maximum(band.beta - a, 0.0) * np.maximum(band.beta - b, 0.0))
        lo = np.exp(-scale * np.maximum(a - band.alpha, 0.0) * np.maximum(b - band.alpha, 0.0))
    return up, lo


def _stay_block(
    seg: BridgeSegment, band: Band, grid: int, rng: np.random.Generator, size: int, refine_tol: float
) -> np.ndarray:
    """Adaptive estimator.

    A cell is split at its midpoint only while both barriers are within
    reach (product of the two crossing probabilities above ``refine_tol``)
    and its width is above ``width / grid``. Every other cell is settled
    with the crossing correction at its own width. With ``refine_tol = 0``
    every cell is refined down to the grid, which is the reference scheme.
    """
    u = rng.random(size)
    alive = np.ones(size, dtype=bool)
    log_keep = np.zeros(size)
    pid = np.arange(size)
    a = np.full(size, seg.y_left)
    b = np.full(size, seg.y_right)
    depth = grid.bit_length() - 1
    width = seg.width
    for level in range(depth + 1):
        keep = alive[pid]
        pid, a, b = pid[keep], a[keep], b[keep]
        if pid.size == 0:
            break
        up, lo = _crossing(a, b, band, 2.0 / (seg.sigma2 * width))
        split = up * lo > refine_tol if level < depth else np.zeros(pid.size, dtype=bool)
        done = ~split
        with np.errstate(divide="ignore"):
            contrib = np.log1p(-up[done]) + np.log1p(-lo[done])
        log_keep += np.bincount(pid[done], weights=contrib, minlength=size)
        pid, a, b = pid[split], a[split], b[split]
        if pid.size == 0:
            break
        mid = 0.5 * (a + b) + math.sqrt(seg.sigma2 * width / 4.0) * rng.standard_normal(pid.size)
        out = (mid <= band.alpha) | (mid >= band.beta)
        alive[pid[out]] = False
        pid = np.concatenate([pid, pid])
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
        width /= 2.0
    with np.errstate(divide="ignore"):
        return alive & (np.log(u) < log_keep)


def _stay_flags(seg: BridgeSegment, band: Band, cfg: McConfig, segment_id: int) -> np.ndarray:
    nblocks = -(-cfg.samples // BLOCK)
    sizes = [min(BLOCK, cfg.samples - k * BLOCK) for k in range(nblocks)]

    def run(k):
        rng = _generator(cfg.seed, segment_id, k)
        return _stay_block(seg, band, cfg.grid_per_segment, rng, sizes[k], cfg.refine_tol)

    workers = min(thread_count(), nblocks)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(nblocks)))
    else:
        parts = [run(k) for k in range(nblocks)]
    return np.concatenate(parts)


def estimate_band_probability(
    seg: BridgeSegment, band: Band, cfg: McConfig, segment_id: int = 0
) -> McEstimate:
    lo, hi = min(seg.y_left, seg.y_right), max(seg.y_left, seg.y_right)
    if not (band.alpha < lo and hi < band.beta):
        return McEstimate(0.0, 0.0, cfg.samples)
    flags = _stay_flags(seg, band, cfg, segment_id)
    return McEstimate.from_count(int(flags.sum()), cfg.samples)


def estimate_edges(
    T: DataSet, bands: Dict[int, Tuple[int, int]], cfg: McConfig
) -> Tuple[McEstimate, Dict[int, McEstimate]]:
    """Joint and per-edge estimates for independent bridges on each edge.

    Edge ``n`` uses stream ``n``, so per-edge estimates are the marginals of
    the joint run.
    """
    x, y = T.x, T.y
    joint = np.ones(cfg.samples, dtype=bool)
    per_edge = {}
    for n in sorted(bands):
        i, j = bands[n]
        seg = BridgeSegment(x[n - 1], x[n], y[n - 1], y[n], T.sigma2)
        band = Band(x[i], x[j])
        if band.alpha < min(seg.y_left, seg.y_right) and max(seg.y_left, seg.y_right) < band.beta:
            flags = _stay_flags(seg, band, cfg, n)
        else:
            flags = np.zeros(cfg.samples, dtype=bool)
        per_edge[n] = McEstimate.from_count(int(flags.sum()), cfg.samples)
        joint &= flags
    return McEstimate.from_count(int(joint.sum()), cfg.samples), per_edge


def estimate_lattice_validity(L, M, T: DataSet, cfg: McConfig) -> McEstimate:
    """Fraction of sampled paths that respect every band of the lattice."""
    from .tiling import band_assignment

    bands = band_assignment(L, M).bands()
    return estimate_edges(T, bands, cfg)[0]
