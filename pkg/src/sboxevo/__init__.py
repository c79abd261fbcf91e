"""Evolving S-boxes with low boomerang uniformity.

The package computes differential and boomerang properties of S-boxes and
searches for good permutations with three genotype encodings (integer
vectors, permutations, and cellular automaton rules evolved by genetic
programming) under a steady-state EA, random search and NSGA-II.
"""

from .properties import (
    CountTable,
    PropertyReport,
    algebraic_degree,
    bct_fast,
    bct_naive,
    boomerang_uniformity,
    ddt,
    delta_uniformity,
    property_report,
)
from .sbox import (
    AffineMap,
    FieldSpec,
    SBox,
    SBoxError,
    apply_affine,
    default_field,
    gf_mul,
    gold_map,
    inverse_map,
    invert,
    is_permutation,
    missing_outputs,
    new_sbox,
    power_map,
    random_affine_permutation,
)

__version__ = "0.1.0"
