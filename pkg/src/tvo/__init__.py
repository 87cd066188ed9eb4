"""Turaev-Viro-Ocneanu invariants from finite fusion systems.

The pipeline runs fusion system, then tube algebra and its center, then modular data, then
surgery invariants of lens spaces and Seifert stars.
"""
from .errors import TVOError, ValidationReport
from .fusion import FusionSystem, builtin_system, fibonacci, ising, tambara_yamagami, vec_omega_cyclic
from .modular import ModularData, conjugate, fusion_rules, validate_verlinde_axioms
from .surgery import (Chain, Star, brieskorn_invariant, chain_invariant, continued_fraction,
                      lens_invariant, s3_invariant, star_invariant)
from .tube import build_tube, center, derive_modular

__version__ = "0.1.0"

__all__ = [
    "TVOError", "ValidationReport", "FusionSystem", "builtin_system", "fibonacci", "ising",
    "tambara_yamagami", "vec_omega_cyclic", "ModularData", "conjugate", "fusion_rules",
    "validate_verlinde_axioms", "Chain", "Star", "brieskorn_invariant", "chain_invariant",
    "continued_fraction", "lens_invariant", "s3_invariant", "star_invariant", "build_tube",
    "center", "derive_modular",
]
