"""Discrete matrix trigonometric and hyperbolic functions of symplectic systems."""

from __future__ import annotations

from .errors import (
    ConvergenceError,
    DomainError,
    DtrigError,
    InternalInconsistencyError,
    ShapeError,
    SingularMatrixError,
    UndefinedAtIndex,
    ValidationError,
)
from .generators import gen_hyp, gen_trig, hyp_from_steps, random_orthogonal, random_symmetric, trig_from_angles
from .hyperbolic import HypCoefficients, HypFunctions, hyp_functions, hyp_identity_suite, validate_hyp
from .report import IdentityResult, ResidualReport
from .symplectic_core import BlockSequence, BlockSymplectic, Trajectory
from .trig import TrigCoefficients, TrigFunctions, trig_functions, trig_identity_suite, validate_trig

__version__ = "0.1.0"
