"""Vector superpotential, charge operators and the two partner Hamiltonians.

Atomic units throughout.  With ``A = grad + W`` and its formal adjoint
``A^+ . F = -div F + W . F``::

    H1 - E0 = 1/2 A^+ . A          (scalar, sector one)
    H2      = 1/2 A A^+ + E0 * 1   (tensor, sector two)

``H2`` is only ever applied by composing the two first-order operators; the
tensor is never expanded into second-derivative form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .diffops import (
    ANALYTIC,
    FdScheme,
    ScalarField,
    VectorField,
    divergence,
    grad,
    laplacian,
)
from .geometry import as_config

RESIDUAL_FLOOR = 1e-12
HALF = 0.5


class NodelessViolation(ValueError):
    """The state used to build a superpotential is not strictly positive."""


class DegenerateSampleError(ValueError):
    """Every sample point has a field norm below the residual floor."""


@dataclass(frozen=True)
class ChargeContext:
    W: VectorField
    e0: float
    scheme: FdScheme = ANALYTIC

    def with_scheme(self, scheme: FdScheme) -> "ChargeContext":
        return ChargeContext(self.W, self.e0, scheme)


@dataclass(frozen=True)
class EigenResidualReport:
    points_tested: int
    max_relative_residual: float
    mean_relative_residual: float
    energy_used: float

    def passes(self, tol: float) -> bool:
        return bool(self.max_relative_residual < tol)


def superpotential_from_ground_state(psi0: ScalarField, scheme: FdScheme = ANALYTIC) -> VectorField:
    """``W = -grad(psi0) / psi0``; closed-form derivatives are inherited when present."""

    def positive(x):
        p = psi0.value(x)
        if np.any(p <= 0):
            raise NodelessViolation("ground state must be strictly positive to define W")
        return p

    def value(x):
        p = positive(x)
        return -grad(psi0, x, scheme) / p[..., None]

    analytic = scheme.analytic and psi0.gradient is not None
    jac = div = None
    if analytic and psi0.hessian is not None:

        def jac(x):
            p = positive(x)[..., None, None]
            g = psi0.gradient(x)
            return -psi0.hessian(x) / p + g[..., :, None] * g[..., None, :] / p**2

    if analytic and (psi0.laplacian is not None or psi0.hessian is not None):

        def div(x):
            p = positive(x)
            g = psi0.gradient(x)
            return -laplacian(psi0, x, scheme) / p + np.sum(g * g, axis=-1) / p**2

    return VectorField(value=value, jacobian=jac, divergence=div, singular=psi0.singular)


def apply_A(ctx: ChargeContext, f: ScalarField) -> VectorField:
    """``(A f)_i = d_i f + W_i f``."""
    W, s = ctx.W, ctx.scheme

    def value(x):
        return grad(f, x, s) + W.value(x) * f.value(x)[..., None]

    analytic = s.analytic and f.gradient is not None
    jac = div = None
    if analytic and f.hessian is not None and W.jacobian is not None:

        def jac(x):
            g = f.gradient(x)
            return (
                f.hessian(x)
                + W.jacobian(x) * f.value(x)[..., None, None]
                + g[..., :, None] * W.value(x)[..., None, :]
            )

    if analytic and (f.laplacian is not None or f.hessian is not None) and W.divergence is not None:

        def div(x):
            return (
                laplacian(f, x, s)
                + W.divergence(x) * f.value(x)
                + np.sum(f.gradient(x) * W.value(x), axis=-1)
            )

    return VectorField(value=value, jacobian=jac, divergence=div, singular=f.singular | W.singular)


def apply_Adag_dot(ctx: ChargeContext, F: VectorField) -> ScalarField:
    """``A^+ . F = -div F + W . F``."""
    W, s = ctx.W, ctx.scheme

    def value(x):
        return -divergence(F, x, s) + np.sum(W.value(x) * F.value(x), axis=-1)

    gradient = None
    if s.analytic and None not in (F.grad_divergence, F.jacobian, W.jacobian):

        def gradient(x):
            Fx, Wx = F.value(x), W.value(x)
            return (
                -F.grad_divergence(x)
                + np.einsum("...ij,...j->...i", W.jacobian(x), Fx)
                + np.einsum("...ij,...j->...i", F.jacobian(x), Wx)
            )

    return ScalarField(value=value, gradient=gradient, singular=F.singular | W.singular)


Potential = Union[ScalarField, Callable[[np.ndarray], np.ndarray]]


def apply_H1(ctx: ChargeContext, V: Potential, f: ScalarField) -> ScalarField:
    """``-1/2 lap f + V f`` for an arbitrary potential ``V``."""
    s = ctx.scheme
    sing = f.singular | getattr(V, "singular", frozenset())

    def value(x):
        return -HALF * laplacian(f, x, s) + V(x) * f.value(x)

    return ScalarField(value=value, singular=sing)


def apply_H2(ctx: ChargeContext, F: VectorField) -> VectorField:
    """``1/2 A(A^+ . F) + E0 F``; the tensor acts through the scalar channel ``A^+ . F``."""
    inner = apply_A(ctx, apply_Adag_dot(ctx, F))

    def value(x):
        return HALF * inner.value(x) + ctx.e0 * F.value(x)

    return VectorField(value=value, singular=inner.singular)


def _norm(v: np.ndarray, vector: bool) -> np.ndarray:
    return np.linalg.norm(v, axis=-1) if vector else np.abs(v)


def eigen_residual(
    apply_h: Callable,
    field: Union[ScalarField, VectorField],
    energy: float,
    sample,
    floor: float = RESIDUAL_FLOOR,
) -> EigenResidualReport:
    """Pointwise ``|H F - E F| / max(|F|, floor)`` aggregated over ``sample``.

    ``apply_h`` maps a field to the field ``H F``, e.g.
    ``functools.partial(apply_H2, ctx)``.
    """
    x = np.atleast_2d(as_config(sample))
    fx = field.value(x)
    hx = apply_h(field).value(x)
    vector = isinstance(field, VectorField)
    size = _norm(fx, vector)
    if np.all(size <= floor):
        raise DegenerateSampleError("field vanishes at every sample point")
    rel = _norm(hx - energy * fx, vector) / np.maximum(size, floor)
    return EigenResidualReport(
        points_tested=len(x),
        max_relative_residual=float(np.max(rel)),
        mean_relative_residual=float(np.mean(rel)),
        energy_used=float(energy),
    )


def cosine_similarity(a, b) -> float:
    """Cosine of the angle between two sampled fields, flattened over all points."""
    a = np.ravel(a)
    b = np.ravel(b)
    return float(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)))


def best_fit_scale(a, b) -> float:
    """Least-squares ``c`` with ``a ~ c * b``."""
    a = np.ravel(a)
    b = np.ravel(b)
    return float(np.dot(a, b) / np.dot(b, b))
