"""Analytic discs attached to totally real graphs via the generalized Bishop equation."""

from .discs import (
    AnalyticDisc,
    StabilitySweep,
    build_disc,
    evaluate_interior,
    flat_disc,
    stability_sweep,
)
from .errors import (
    AttachmentFailure,
    BishopError,
    DegenerateBoundary,
    DegenerateManifold,
    DomainViolation,
    HolomorphyFailure,
    HypothesisViolation,
    InvalidInput,
    NoConvergence,
    NonContraction,
    NotLocalized,
    OutOfDomain,
    Unsupported,
)
from .estimator import BishopDiscFamily
from .manifolds import (
    CollarFunction,
    CutoffGraph,
    DilationFamily,
    ManifoldGraph,
    build_collar,
    c1profile,
    choose_tau_delta,
    flat,
    from_spec,
    polynomial,
    quadratic,
    sphere,
)
from .solver import BishopSolution, DiscParameters, ParameterGrid, solve
from .spectral import CircleFunction, CircleGrid, hilbert_transform, poisson_extend

__version__ = "0.1.0"

__all__ = [
    "AnalyticDisc", "AttachmentFailure", "BishopDiscFamily", "BishopError", "BishopSolution",
    "CircleFunction", "CircleGrid", "CollarFunction", "CutoffGraph", "DegenerateBoundary",
    "DegenerateManifold", "DilationFamily", "DiscParameters", "DomainViolation", "HolomorphyFailure",
    "HypothesisViolation", "InvalidInput", "ManifoldGraph", "NoConvergence", "NonContraction",
    "NotLocalized", "OutOfDomain", "ParameterGrid", "StabilitySweep", "Unsupported", "build_collar",
    "build_disc", "c1profile", "choose_tau_delta", "flat", "evaluate_interior", "flat_disc", "from_spec",
    "hilbert_transform", "poisson_extend", "polynomial", "quadratic", "solve", "sphere",
    "stability_sweep",
]
