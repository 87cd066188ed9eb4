"""Finite fusion systems: rings, F-symbols, duality and the intertwiner calculus."""
from .builtins import (BUILTINS, builtin_system, fibonacci, ising, tambara_yamagami, trivial,
                       vec_omega_cyclic)
from .calculus import Morphism, TreeVector, eval_expression, frobenius_hat, frobenius_tilde
from .io import dumps_system, load_system, loads_system, save_system
from .ring import FusionRing, Label, QuantumDims, quantum_dims, validate_fusion_ring
from .system import FBlock, FusionSystem, build_system, validate_pentagon, validate_system

__all__ = [
    "BUILTINS", "builtin_system", "fibonacci", "ising", "tambara_yamagami", "trivial",
    "vec_omega_cyclic", "Morphism", "TreeVector", "eval_expression", "frobenius_hat",
    "frobenius_tilde", "dumps_system", "load_system", "loads_system", "save_system",
    "FusionRing", "Label", "QuantumDims", "quantum_dims", "validate_fusion_ring", "FBlock",
    "FusionSystem", "build_system", "validate_pentagon", "validate_system",
]
