"""Local-ratio, exact and entangled solvers for constrained 2-local Hamiltonians."""

from .core import (
    BlochProjector,
    Instance,
    InstanceError,
    LocalTerm,
    ProductState,
    assemble_local_term,
    canonicalize,
    evaluate,
    feasibility,
    validate_instance,
)
from .evc import solve_evc, takagi_canonicalize
from .exact import SpectrumReport, ground_energy, smallest_eigenvalue
from .gadgets import TIMInstance, pxp_instance, reduce_degree, tim_to_tvc
from .localratio import Certificate, certify, lr_classical_vc, lr_tpcvc, lr_tvc

__version__ = "0.1.0"

__all__ = [
    "BlochProjector",
    "Certificate",
    "Instance",
    "InstanceError",
    "LocalTerm",
    "ProductState",
    "SpectrumReport",
    "TIMInstance",
    "assemble_local_term",
    "canonicalize",
    "certify",
    "evaluate",
    "feasibility",
    "ground_energy",
    "lr_classical_vc",
    "lr_tpcvc",
    "lr_tvc",
    "pxp_instance",
    "reduce_degree",
    "smallest_eigenvalue",
    "solve_evc",
    "takagi_canonicalize",
    "tim_to_tvc",
    "validate_instance",
]
