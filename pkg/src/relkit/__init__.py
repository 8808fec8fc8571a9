"""Linear relations, passive selfadjoint systems and Stieltjes-type families.

Submodules:

``subspace``         orthonormal frames, principal angles, intersections
``relation``         linear relations, adjoints, resolvents, classification
``transforms``       component swaps, Cayley and contraction transforms
``systems``          passive systems, transfer functions, Ho-Kalman realization
``families``         relation-valued families and their backends
``family_checks``    sample-based class checks and representation identities
``representations``  the relation/family chain built from a contraction
``models``           half-line models with a closed-form compressed resolvent
``cli``              the ``relkit`` command
"""
from .errors import (
    AmbiguousRankError,
    ClassMismatchError,
    DomainError,
    HypothesisError,
    NotContractionError,
    QuadratureError,
    RealizationError,
    RelkitError,
    ShapeError,
    SpectrumError,
)
from .relation import LinearRelation, SpaceSplit, adjoint, classify, inverse
from .subspace import DEFAULT_TOL, Subspace, Tolerance
from .systems import PassiveSystem, ho_kalman_realize, transfer

__version__ = "0.1.0"

__all__ = [
    "AmbiguousRankError", "ClassMismatchError", "DomainError", "HypothesisError",
    "NotContractionError", "QuadratureError", "RealizationError", "RelkitError",
    "ShapeError", "SpectrumError",
    "LinearRelation", "SpaceSplit", "adjoint", "classify", "inverse",
    "DEFAULT_TOL", "Subspace", "Tolerance",
    "PassiveSystem", "ho_kalman_realize", "transfer",
]
