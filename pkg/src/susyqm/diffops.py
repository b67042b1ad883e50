"""Scalar and vector fields on configuration space and their derivatives.

Every operator has two routes.  When a field carries a hand-written derivative
(and the scheme allows it) that closed form is used; otherwise the derivative is
taken by second-order central differences, optionally Richardson-extrapolated
from steps ``h`` and ``h/2``.  Fields are evaluated on batches of points, so a
finite-difference stencil over ``m`` points costs a single call on ``4 * 3n * m``
shifted configurations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .geometry import (
    RADIUS_EPSILON,
    SingularPointError,
    as_config,
    exchange_12,
    min_nuclear_distance,
    min_pair_distance,
    swap_blocks,
)

NUCLEI = "nuclei"
COINCIDENCE = "coincidence"

Fn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ScalarField:
    """Real function of a configuration, with optional closed-form derivatives.

    ``singular`` names the loci near which the field or its derivatives are not
    smooth (``NUCLEI``: any particle at the origin; ``COINCIDENCE``: any two
    particles at the same place).
    """

    value: Fn
    gradient: Optional[Fn] = None
    laplacian: Optional[Fn] = None
    hessian: Optional[Fn] = None
    singular: frozenset = field(default_factory=frozenset)

    def __call__(self, x):
        return self.value(as_config(x))


@dataclass(frozen=True)
class VectorField:
    """3n-component field; ``jacobian[..., i, j]`` is ``dF_j/du_i``."""

    value: Fn
    jacobian: Optional[Fn] = None
    divergence: Optional[Fn] = None
    grad_divergence: Optional[Fn] = None
    singular: frozenset = field(default_factory=frozenset)

    def __call__(self, x):
        return self.value(as_config(x))


@dataclass(frozen=True)
class FdScheme:
    step: float = 1e-4
    richardson: bool = True
    analytic: bool = True

    def __post_init__(self):
        if not 1e-6 <= self.step <= 1e-2:
            raise ValueError(f"finite-difference step {self.step} outside [1e-6, 1e-2]")


ANALYTIC = FdScheme()
NUMERIC = FdScheme(analytic=False)


def singular_distance(x, loci) -> np.ndarray:
    x = as_config(x)
    d = np.full(x.shape[:-1], np.inf)
    if NUCLEI in loci:
        d = np.minimum(d, min_nuclear_distance(x))
    if COINCIDENCE in loci:
        d = np.minimum(d, min_pair_distance(x))
    return d


def require_regular(f, x, margin: float = RADIUS_EPSILON) -> None:
    if not f.singular:
        return
    d = singular_distance(x, f.singular)
    if np.any(d <= margin):
        raise SingularPointError(
            f"point within {margin:g} Bohr of a singular locus {sorted(f.singular)}"
        )


def _stencil(fun: Fn, x: np.ndarray, offsets) -> np.ndarray:
    """Evaluate ``fun`` at ``x + c * e_j`` for every offset ``c`` and axis ``j``.

    Returns an array of shape ``(len(offsets), batch..., d, out...)``.
    """
    batch = x.shape[:-1]
    d = x.shape[-1]
    flat = x.reshape(-1, d)
    eye = np.eye(d)
    shifted = np.stack([flat[None, :, :] + c * eye[:, None, :] for c in offsets])
    out = np.asarray(fun(shifted.reshape(-1, d)))
    out = out.reshape(len(offsets), d, flat.shape[0], *out.shape[1:])
    out = np.moveaxis(out, 1, 2)
    return out.reshape(len(offsets), *batch, d, *out.shape[3:])


def partials(fun: Fn, x, scheme: FdScheme = NUMERIC) -> np.ndarray:
    """Central-difference first partials: ``out[..., j, ...] = d fun / du_j``."""
    x = as_config(x)
    h = scheme.step
    if not scheme.richardson:
        s = _stencil(fun, x, (h, -h))
        return (s[0] - s[1]) / (2 * h)
    s = _stencil(fun, x, (h, -h, h / 2, -h / 2))
    coarse = (s[0] - s[1]) / (2 * h)
    fine = (s[2] - s[3]) / h
    return (4 * fine - coarse) / 3


def second_partials(fun: Fn, x, scheme: FdScheme = NUMERIC) -> np.ndarray:
    """Central-difference unmixed second partials ``d^2 fun / du_j^2``."""
    x = as_config(x)
    h = scheme.step
    f0 = np.asarray(fun(x))[..., None]
    if not scheme.richardson:
        s = _stencil(fun, x, (h, -h))
        return (s[0] - 2 * f0 + s[1]) / h**2
    s = _stencil(fun, x, (h, -h, h / 2, -h / 2))
    coarse = (s[0] - 2 * f0 + s[1]) / h**2
    fine = (s[2] - 2 * f0 + s[3]) / (h / 2) ** 2
    return (4 * fine - coarse) / 3


def _fd_margin(scheme: FdScheme) -> float:
    return 2 * scheme.step


def grad(f: ScalarField, x, scheme: FdScheme = ANALYTIC) -> np.ndarray:
    x = as_config(x)
    if scheme.analytic and f.gradient is not None:
        require_regular(f, x)
        return f.gradient(x)
    require_regular(f, x, _fd_margin(scheme))
    return partials(f.value, x, scheme)


def jacobian(F: VectorField, x, scheme: FdScheme = ANALYTIC) -> np.ndarray:
    x = as_config(x)
    if scheme.analytic and F.jacobian is not None:
        require_regular(F, x)
        return F.jacobian(x)
    require_regular(F, x, _fd_margin(scheme))
    return partials(F.value, x, scheme)


def divergence(F: VectorField, x, scheme: FdScheme = ANALYTIC) -> np.ndarray:
    x = as_config(x)
    if scheme.analytic and F.divergence is not None:
        require_regular(F, x)
        return F.divergence(x)
    return np.trace(jacobian(F, x, scheme), axis1=-2, axis2=-1)


def laplacian(f: ScalarField, x, scheme: FdScheme = ANALYTIC) -> np.ndarray:
    x = as_config(x)
    if scheme.analytic and f.laplacian is not None:
        require_regular(f, x)
        return f.laplacian(x)
    if scheme.analytic and f.hessian is not None:
        require_regular(f, x)
        return np.trace(f.hessian(x), axis1=-2, axis2=-1)
    require_regular(f, x, _fd_margin(scheme))
    return second_partials(f.value, x, scheme).sum(axis=-1)


def hessian(f: ScalarField, x, scheme: FdScheme = ANALYTIC) -> np.ndarray:
    x = as_config(x)
    if scheme.analytic and f.hessian is not None:
        require_regular(f, x)
        return f.hessian(x)
    require_regular(f, x, _fd_margin(scheme))
    if scheme.analytic and f.gradient is not None:
        return partials(f.gradient, x, scheme)
    return partials(lambda y: partials(f.value, y, scheme), x, scheme)


# -- field algebra -----------------------------------------------------------


def scalar_from_function(fun: Fn, singular=()) -> ScalarField:
    return ScalarField(value=fun, singular=frozenset(singular))


def constant_scalar(c: float) -> ScalarField:
    def value(x):
        return np.full(np.shape(x)[:-1], float(c))

    def gradient(x):
        return np.zeros(np.shape(x))

    def hess(x):
        d = np.shape(x)[-1]
        return np.zeros(np.shape(x)[:-1] + (d, d))

    return ScalarField(value, gradient, lambda x: value(x) * 0.0, hess)


def zero_vector_field() -> VectorField:
    def jac(x):
        d = np.shape(x)[-1]
        return np.zeros(np.shape(x)[:-1] + (d, d))

    return VectorField(
        value=lambda x: np.zeros(np.shape(x)),
        jacobian=jac,
        divergence=lambda x: np.zeros(np.shape(x)[:-1]),
        grad_divergence=lambda x: np.zeros(np.shape(x)),
    )


def identity_vector_field() -> VectorField:
    def jac(x):
        d = np.shape(x)[-1]
        return np.broadcast_to(np.eye(d), np.shape(x)[:-1] + (d, d)).copy()

    return VectorField(
        value=lambda x: np.array(x, dtype=float),
        jacobian=jac,
        divergence=lambda x: np.full(np.shape(x)[:-1], float(np.shape(x)[-1])),
        grad_divergence=lambda x: np.zeros(np.shape(x)),
    )


def scale_vector_field(F: VectorField, c: float) -> VectorField:
    def opt(g):
        return None if g is None else (lambda x: c * g(x))

    return VectorField(
        value=lambda x: c * F.value(x),
        jacobian=opt(F.jacobian),
        divergence=opt(F.divergence),
        grad_divergence=opt(F.grad_divergence),
        singular=F.singular,
    )


def add_vector_fields(F: VectorField, G: VectorField, sign: float = 1.0) -> VectorField:
    """``F + sign * G`` keeping closed-form pieces that both fields provide."""

    def both(a, b):
        if a is None or b is None:
            return None
        return lambda x: a(x) + sign * b(x)

    return VectorField(
        value=lambda x: F.value(x) + sign * G.value(x),
        jacobian=both(F.jacobian, G.jacobian),
        divergence=both(F.divergence, G.divergence),
        grad_divergence=both(F.grad_divergence, G.grad_divergence),
        singular=F.singular | G.singular,
    )


def radial_field(g: Fn, dg: Fn, d2g: Fn, particle: int = 0, n_particles: int = 1) -> ScalarField:
    """Scalar field ``g(r_i)`` of one particle's radius with closed-form derivatives."""
    sl = slice(3 * particle, 3 * particle + 3)

    def parts(x):
        x = as_config(x, n_particles)
        u = x[..., sl]
        r = np.linalg.norm(u, axis=-1)
        return x, u, r

    def value(x):
        _, _, r = parts(x)
        return g(r)

    def gradient(x):
        x, u, r = parts(x)
        out = np.zeros_like(x)
        out[..., sl] = (dg(r) / r)[..., None] * u
        return out

    def hess(x):
        x, u, r = parts(x)
        n = u / r[..., None]
        nn = n[..., :, None] * n[..., None, :]
        blk = d2g(r)[..., None, None] * nn + (dg(r) / r)[..., None, None] * (np.eye(3) - nn)
        out = np.zeros(x.shape + (x.shape[-1],))
        out[..., sl, sl] = blk
        return out

    def lap(x):
        _, _, r = parts(x)
        return d2g(r) + 2 * dg(r) / r

    return ScalarField(value, gradient, lap, hess, singular=frozenset({NUCLEI}))


_SWAP = np.block([[np.zeros((3, 3)), np.eye(3)], [np.eye(3), np.zeros((3, 3))]])


def exchange_scalar_field(f: ScalarField) -> ScalarField:
    """``(P f)(x) = f(P x)`` for two particles."""
    def opt(g, wrap):
        return None if g is None else (lambda x: wrap(g(exchange_12(x))))

    return ScalarField(
        value=lambda x: f.value(exchange_12(x)),
        gradient=opt(f.gradient, swap_blocks),
        laplacian=opt(f.laplacian, lambda v: v),
        hessian=opt(f.hessian, lambda h: _SWAP @ h @ _SWAP),
        singular=f.singular,
    )


def exchange_vector_field(F: VectorField) -> VectorField:
    """``(P F)(x) = swap(F(P x))``: both the argument and the component blocks are exchanged."""
    def opt(g, wrap):
        return None if g is None else (lambda x: wrap(g(exchange_12(x))))

    return VectorField(
        value=lambda x: swap_blocks(F.value(exchange_12(x))),
        jacobian=opt(F.jacobian, lambda j: _SWAP @ j @ _SWAP),
        divergence=opt(F.divergence, lambda v: v),
        grad_divergence=opt(F.grad_divergence, swap_blocks),
        singular=F.singular,
    )
