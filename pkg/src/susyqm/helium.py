"""Two-electron Padé-Jastrow trial state and its vector superpotential.

The trial state is ``exp(-z r1 - z r2 + u(r12))`` with the Padé correlation
exponent ``u(s) = c s / (1 + alpha s)``; the defaults ``z = 2`` and ``c = 1/2``
give the electron-nucleus and electron-electron cusps.  ``W = -grad ln psi`` is
derived term by term from that exponent, so ``A psi = 0`` holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diffops import (
    ANALYTIC,
    COINCIDENCE,
    NUCLEI,
    FdScheme,
    ScalarField,
    VectorField,
    laplacian,
)
from .geometry import as_config
from .susy import ChargeContext

# Reference variational energy and Jastrow parameter for the Padé-Jastrow state (Hartree).
REFERENCE_ENERGY = -2.878
REFERENCE_ALPHA = 0.353
EXACT_GROUND_ENERGY = -2.903724

_SINGULAR = frozenset({NUCLEI, COINCIDENCE})


class NodeError(ValueError):
    """The trial state vanishes at a point where a ratio by it is required."""


@dataclass(frozen=True)
class PadeJastrowParams:
    alpha: float
    z_eff: float = 2.0
    jastrow_coeff: float = 0.5

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.z_eff > 0:
            raise ValueError(f"z_eff must be positive, got {self.z_eff}")
        if not self.jastrow_coeff > 0:
            raise ValueError(f"jastrow_coeff must be positive, got {self.jastrow_coeff}")


def jastrow(s, alpha: float, coeff: float = 0.5):
    return coeff * s / (1 + alpha * s)


def jastrow_prime(s, alpha: float, coeff: float = 0.5):
    return coeff / (1 + alpha * s) ** 2


def jastrow_second(s, alpha: float, coeff: float = 0.5):
    return -2 * coeff * alpha / (1 + alpha * s) ** 3


def _distances(x):
    x = as_config(x, 2)
    a, b = x[..., 0:3], x[..., 3:6]
    return np.linalg.norm(a, axis=-1), np.linalg.norm(b, axis=-1), np.linalg.norm(a - b, axis=-1)


def _geometry(x):
    x = as_config(x, 2)
    a, b = x[..., 0:3], x[..., 3:6]
    r1, r2, s = _distances(x)
    return x, a / r1[..., None], b / r2[..., None], (a - b) / s[..., None], r1, r2, s


def _projector(n):
    return np.eye(3) - n[..., :, None] * n[..., None, :]


class _LogState:
    """Derivatives of ``ln psi = -z r1 - z r2 + u(r12)``; ``c = 0`` drops the correlation."""

    def __init__(self, z: float, alpha: float, coeff: float):
        self.z, self.alpha, self.coeff = z, alpha, coeff

    def u(self, s):
        return jastrow(s, self.alpha, self.coeff)

    def du(self, s):
        return jastrow_prime(s, self.alpha, self.coeff)

    def d2u(self, s):
        return jastrow_second(s, self.alpha, self.coeff)

    def value(self, x):
        r1, r2, s = _distances(x)
        return -self.z * r1 - self.z * r2 + self.u(s)

    def gradient(self, x):
        x, n1, n2, nd, _, _, s = _geometry(x)
        c = self.du(s)[..., None] * nd
        return np.concatenate([-self.z * n1 + c, -self.z * n2 - c], axis=-1)

    def laplacian(self, x):
        r1, r2, s = _distances(x)
        return -2 * self.z / r1 - 2 * self.z / r2 + 2 * (self.d2u(s) + 2 * self.du(s) / s)

    def hessian(self, x):
        x, n1, n2, nd, r1, r2, s = _geometry(x)
        nn = nd[..., :, None] * nd[..., None, :]
        m = self.d2u(s)[..., None, None] * nn + (self.du(s) / s)[..., None, None] * _projector(nd)
        out = np.zeros(x.shape + (6,))
        out[..., 0:3, 0:3] = -self.z * _projector(n1) / r1[..., None, None] + m
        out[..., 3:6, 3:6] = -self.z * _projector(n2) / r2[..., None, None] + m
        out[..., 0:3, 3:6] = -m
        out[..., 3:6, 0:3] = -m
        return out


def _exponentiated(log: _LogState) -> ScalarField:
    def value(x):
        return np.exp(log.value(x))

    def gradient(x):
        return value(x)[..., None] * log.gradient(x)

    def lap(x):
        g = log.gradient(x)
        return value(x) * (log.laplacian(x) + np.sum(g * g, axis=-1))

    def hess(x):
        g = log.gradient(x)
        return value(x)[..., None, None] * (log.hessian(x) + g[..., :, None] * g[..., None, :])

    return ScalarField(value, gradient, lap, hess, singular=_SINGULAR)


def pade_jastrow_exponent(params: PadeJastrowParams) -> ScalarField:
    """``ln psi`` as a field in its own right."""
    log = _LogState(params.z_eff, params.alpha, params.jastrow_coeff)
    return ScalarField(log.value, log.gradient, log.laplacian, log.hessian, singular=_SINGULAR)


def pade_jastrow(params: PadeJastrowParams) -> ScalarField:
    return _exponentiated(_LogState(params.z_eff, params.alpha, params.jastrow_coeff))


def hydrogenic_product(z_eff: float = 2.0) -> ScalarField:
    """``exp(-z r1 - z r2)``, both electrons in a bare-nucleus 1s orbital."""
    return _exponentiated(_LogState(z_eff, 1.0, 0.0))


def _superpotential(log: _LogState) -> VectorField:
    def value(x):
        return -log.gradient(x)

    def jac(x):
        return -log.hessian(x)

    def div(x):
        return -log.laplacian(x)

    return VectorField(value, jac, div, singular=frozenset({NUCLEI}) if log.coeff == 0 else _SINGULAR)


def helium_superpotential(params: PadeJastrowParams) -> VectorField:
    """Closed-form ``W``: block 1 is ``z r1_hat - u'(r12) r12_hat``, block 2 ``z r2_hat + u'(r12) r12_hat``."""
    return _superpotential(_LogState(params.z_eff, params.alpha, params.jastrow_coeff))


def bare_superpotential(z_eff: float = 2.0) -> VectorField:
    """``z r1_hat + z r2_hat``, the superpotential of :func:`hydrogenic_product`."""
    return _superpotential(_LogState(z_eff, 1.0, 0.0))


def helium_potential(x, nuclear_charge: float = 2.0, repulsion: bool = True):
    _, _, _, _, r1, r2, s = _geometry(x)
    v = -nuclear_charge / r1 - nuclear_charge / r2
    if repulsion:
        v = v + 1 / s
    return v


def independent_electron_potential(x):
    return helium_potential(x, repulsion=False)


def helium_context(params: PadeJastrowParams, e0: float = REFERENCE_ENERGY, scheme: FdScheme = ANALYTIC):
    """Charge context of the correlated trial state; ``e0`` is its variational energy."""
    return ChargeContext(helium_superpotential(params), e0, scheme)


def bare_context(z_eff: float = 2.0, scheme: FdScheme = ANALYTIC):
    """Exact context of the independent-electron problem, ground energy ``-z^2``."""
    return ChargeContext(bare_superpotential(z_eff), -z_eff**2, scheme)


def local_energy(psi: ScalarField, x, potential=helium_potential, scheme: FdScheme = ANALYTIC):
    """``(H psi)(x) / psi(x)`` with ``H = -1/2 lap + V``."""
    x = as_config(x)
    p = psi.value(x)
    if np.any(p == 0):
        raise NodeError("local energy requested at a node of the trial state")
    return -0.5 * laplacian(psi, x, scheme) / p + potential(x)
