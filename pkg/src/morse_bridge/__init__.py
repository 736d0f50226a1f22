"""Morse tilings, Conley indices and validity probabilities for the dynamics
of Brownian paths pinned to a finite data set."""

from .bridge_prob import Band, BridgeSegment, PiArgs, band_probability, pi_series, product_band_probability
from .complex1d import DataSet, build_complex, geometric_realization
from .comb_map import build_F_K, build_F_mu, extend_full, is_enclosure, restrict_map
from .invset import enumerate_invset, member_of_invset, validate_sublattice
from .probability import analyze, block_probability, lattice_probability
from .tiling import band_assignment, morse_tiling

__version__ = "0.1.0"

__all__ = [
    "Band",
    "BridgeSegment",
    "DataSet",
    "PiArgs",
    "analyze",
    "band_assignment",
    "band_probability",
    "block_probability",
    "build_F_K",
    "build_F_mu",
    "build_complex",
    "enumerate_invset",
    "extend_full",
    "geometric_realization",
    "is_enclosure",
    "lattice_probability",
    "member_of_invset",
    "morse_tiling",
    "pi_series",
    "product_band_probability",
    "restrict_map",
    "validate_sublattice",
]
