"""Exact digit-frequency analysis, de Bruijn block generation, and the two
stream reductions, backed by the C++ core."""

from ._nlab import (
    BlockLibrary,
    DensityTracker,
    Family,
    InternalError,
    ResourceError,
    ValidationError,
    d2_alpha,
    d2_beta,
    density,
    general_blocks,
    good_word,
    interleave_intersection,
    limit_density,
    max_deviation,
    modulus,
    monotonize,
    pair,
    r_bound,
    reduce_d2,
    reduce_domega,
    reduce_general,
    restrict_modulus,
    triple,
    unpair,
    untriple,
)

__all__ = [
    "BlockLibrary",
    "DensityTracker",
    "Family",
    "InternalError",
    "ResourceError",
    "ValidationError",
    "d2_alpha",
    "d2_beta",
    "density",
    "general_blocks",
    "good_word",
    "interleave_intersection",
    "limit_density",
    "max_deviation",
    "modulus",
    "monotonize",
    "pair",
    "r_bound",
    "reduce_d2",
    "reduce_domega",
    "reduce_general",
    "restrict_modulus",
    "triple",
    "unpair",
    "untriple",
]
