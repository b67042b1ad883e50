"""Multi-dimensional supersymmetric quantum mechanics for one- and two-electron atoms."""

__version__ = "0.1.0"

from .diffops import ANALYTIC, NUMERIC, FdScheme, ScalarField, VectorField
from .susy import (
    ChargeContext,
    EigenResidualReport,
    apply_A,
    apply_Adag_dot,
    apply_H1,
    apply_H2,
    eigen_residual,
    superpotential_from_ground_state,
)

__all__ = [
    "ANALYTIC",
    "NUMERIC",
    "ChargeContext",
    "EigenResidualReport",
    "FdScheme",
    "ScalarField",
    "VectorField",
    "apply_A",
    "apply_Adag_dot",
    "apply_H1",
    "apply_H2",
    "eigen_residual",
    "superpotential_from_ground_state",
]
