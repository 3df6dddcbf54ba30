"""Exact computations for the Ising model SVOA L(1/2,0)+L(1/2,1/2) and its
Z2-twisted modules L(1/2,1/16)^+-, realized on free-fermion Fock spaces."""

from .scalar import Scalar, SQRT2, gen_binomial, half
from .fock import Sector, Truncation, Vector, apply_mode, basis, dimension, gram

__all__ = [
    "Scalar",
    "SQRT2",
    "gen_binomial",
    "half",
    "Sector",
    "Truncation",
    "Vector",
    "apply_mode",
    "basis",
    "dimension",
    "gram",
]
