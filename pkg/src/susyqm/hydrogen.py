"""Closed-form hydrogen states in both sectors.

Bohr radius 1, Hartree energies, states kept unnormalized (``N = 1``).  The
real 2p basis is used.  Sector-two states are the vector fields obtained by
applying the charge operator ``A = grad + r_hat`` to the n = 2 states; they are
written out here by hand so they can be checked against ``apply_A``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial

import numpy as np

from .diffops import (
    ANALYTIC,
    NUCLEI,
    FdScheme,
    ScalarField,
    VectorField,
    divergence,
    laplacian,
    radial_field,
)
from .geometry import as_config, random_shell_points
from .susy import (
    ChargeContext,
    EigenResidualReport,
    apply_A,
    apply_Adag_dot,
    apply_H1,
    apply_H2,
    cosine_similarity,
    eigen_residual,
)

E_1S = -0.5
E_N2 = -0.125

SECTOR_ONE_LABELS = ("1s", "2s", "2p_x", "2p_y", "2p_z")
SECTOR_TWO_LABELS = ("1,2s", "1,2p_x", "1,2p_y", "1,2p_z")
_AXIS = {"x": 0, "y": 1, "z": 2}

ANALYTIC_TOL = 1e-8
NUMERIC_TOL = 1e-4


@dataclass(frozen=True)
class HydrogenState:
    label: str
    field: ScalarField
    energy: float
    n: int


@dataclass(frozen=True)
class SectorTwoState:
    label: str
    field: VectorField
    energy: float
    source: str


def _unpack(x):
    x = as_config(x, 1)
    r = np.linalg.norm(x, axis=-1)
    return x, r, x / r[..., None]


def _outer(a, b):
    return a[..., :, None] * b[..., None, :]


def _p_orbital(k: int) -> ScalarField:
    """``x_k exp(-r/2)``."""

    def value(x):
        x, r, _ = _unpack(x)
        return x[..., k] * np.exp(-r / 2)

    def gradient(x):
        x, r, n = _unpack(x)
        h = np.exp(-r / 2)
        g = -0.5 * (x[..., k] * h)[..., None] * n
        g[..., k] += h
        return g

    def hess(x):
        x, r, n = _unpack(x)
        h = np.exp(-r / 2)
        dh, d2h = -h / 2, h / 4
        nn = _outer(n, n)
        hh = d2h[..., None, None] * nn + (dh / r)[..., None, None] * (np.eye(3) - nn)
        ek = np.zeros(x.shape)
        ek[..., k] = 1.0
        grad_h = dh[..., None] * n
        return _outer(ek, grad_h) + _outer(grad_h, ek) + x[..., k, None, None] * hh

    def lap(x):
        x, r, n = _unpack(x)
        h = np.exp(-r / 2)
        dh, d2h = -h / 2, h / 4
        return 2 * dh * n[..., k] + x[..., k] * (d2h + 2 * dh / r)

    return ScalarField(value, gradient, lap, hess, singular=frozenset({NUCLEI}))


def hydrogen_state(label: str) -> HydrogenState:
    if label == "1s":
        f = radial_field(lambda r: np.exp(-r), lambda r: -np.exp(-r), lambda r: np.exp(-r))
        return HydrogenState(label, f, E_1S, 1)
    if label == "2s":
        f = radial_field(
            lambda r: (1 - r / 2) * np.exp(-r / 2),
            lambda r: (r / 4 - 1) * np.exp(-r / 2),
            lambda r: (0.75 - r / 8) * np.exp(-r / 2),
        )
        return HydrogenState(label, f, E_N2, 2)
    if label.startswith("2p_") and label[3:] in _AXIS:
        return HydrogenState(label, _p_orbital(_AXIS[label[3:]]), E_N2, 2)
    raise KeyError(f"unknown hydrogen state {label!r}; expected one of {SECTOR_ONE_LABELS}")


def hydrogen_potential(x):
    return -1.0 / np.linalg.norm(as_config(x, 1), axis=-1)


def hydrogen_superpotential() -> VectorField:
    """``W = r_hat``, the log-gradient of the 1s state."""

    def value(x):
        return _unpack(x)[2]

    def jac(x):
        _, r, n = _unpack(x)
        return (np.eye(3) - _outer(n, n)) / r[..., None, None]

    def div(x):
        return 2.0 / _unpack(x)[1]

    def grad_div(x):
        _, r, n = _unpack(x)
        return (-2.0 / r**2)[..., None] * n

    return VectorField(value, jac, div, grad_div, singular=frozenset({NUCLEI}))


def hydrogen_context(scheme: FdScheme = ANALYTIC) -> ChargeContext:
    return ChargeContext(hydrogen_superpotential(), E_1S, scheme)


def _sector_two_p(k: int) -> VectorField:
    # F_j = h delta_jk + x_k x_j q,  h = exp(-r/2),  q = h / (2r)
    def value(x):
        x = as_config(x, 1)
        r = np.linalg.norm(x, axis=-1)
        h = np.exp(-r / 2)
        # x_k / r -> 0 at the origin, where the field is finite
        xk_r = np.divide(x[..., k], r, out=np.zeros_like(r), where=r > 0)
        out = (xk_r * h / 2)[..., None] * x
        out[..., k] += h
        return out

    def jac(x):
        x, r, n = _unpack(x)
        h = np.exp(-r / 2)
        q = h / (2 * r)
        dq = h * (-1 / (4 * r) - 1 / (2 * r**2))
        dh = -h / 2
        ek = np.zeros(x.shape)
        ek[..., k] = 1.0
        xk = x[..., k, None, None]
        return (
            _outer(dh[..., None] * n, ek)
            + q[..., None, None] * (_outer(ek, x) + xk * np.eye(3))
            + (xk * dq[..., None, None]) * _outer(n, x)
        )

    def div(x):
        x, r, _ = _unpack(x)
        return x[..., k] * np.exp(-r / 2) * (1 / r - 0.25)

    def grad_div(x):
        x, r, n = _unpack(x)
        h = np.exp(-r / 2)
        phi = h * (1 / r - 0.25)
        dphi = h * (-1 / r**2 - 1 / (2 * r) + 0.125)
        out = (x[..., k] * dphi)[..., None] * n
        out[..., k] += phi
        return out

    return VectorField(value, jac, div, grad_div, singular=frozenset({NUCLEI}))


def _sector_two_s() -> VectorField:
    # F = x psi(r),  psi = -exp(-r/2) / 2
    def value(x):
        x = as_config(x, 1)
        r = np.linalg.norm(x, axis=-1)
        return (-np.exp(-r / 2) / 2)[..., None] * x

    def jac(x):
        x, r, n = _unpack(x)
        h = np.exp(-r / 2)
        return (-h / 2)[..., None, None] * np.eye(3) + (h / 4)[..., None, None] * _outer(n, x)

    def div(x):
        _, r, _ = _unpack(x)
        return np.exp(-r / 2) * (r / 4 - 1.5)

    def grad_div(x):
        _, r, n = _unpack(x)
        return (np.exp(-r / 2) * (1 - r / 8))[..., None] * n

    return VectorField(value, jac, div, grad_div, singular=frozenset({NUCLEI}))


def sector_two_state(label: str) -> SectorTwoState:
    if label == "1,2s":
        return SectorTwoState(label, _sector_two_s(), E_N2, "2s")
    if label.startswith("1,2p_") and label[5:] in _AXIS:
        return SectorTwoState(label, _sector_two_p(_AXIS[label[5:]]), E_N2, label[2:])
    raise KeyError(f"unknown sector-two state {label!r}; expected one of {SECTOR_TWO_LABELS}")


def _report(values, energy) -> EigenResidualReport:
    values = np.asarray(values, dtype=float)
    return EigenResidualReport(len(values), float(values.max()), float(values.mean()), float(energy))


def sample_points(points: int = 1000, seed: int = 0, r_min: float = 0.1, r_max: float = 20.0):
    return random_shell_points(np.random.default_rng(seed), points, 1, r_min, r_max)


def superpotential_identity(x, scheme: FdScheme = ANALYTIC):
    """``W.W - div W`` evaluated through the operator layer, paired with ``1 - 2/r``."""
    W = hydrogen_superpotential()
    x = as_config(x, 1)
    w = W.value(x)
    lhs = np.sum(w * w, axis=-1) - divergence(W, x, scheme)
    r = np.linalg.norm(x, axis=-1)
    return lhs, 1 - 2 / r


def sector_one_residuals(x, scheme: FdScheme = ANALYTIC) -> dict[str, EigenResidualReport]:
    ctx = hydrogen_context(scheme)
    out = {}
    for label in SECTOR_ONE_LABELS:
        st = hydrogen_state(label)
        out[label] = eigen_residual(partial(apply_H1, ctx, hydrogen_potential), st.field, st.energy, x)
    return out


def sector_two_residuals(x, scheme: FdScheme = ANALYTIC, energy: float | None = None):
    ctx = hydrogen_context(scheme)
    out = {}
    for label in SECTOR_TWO_LABELS:
        st = sector_two_state(label)
        e = st.energy if energy is None else energy
        out[label] = eigen_residual(partial(apply_H2, ctx), st.field, e, x)
    return out


def regeneration_similarity(label: str, x, scheme: FdScheme = ANALYTIC) -> float:
    st = sector_two_state(label)
    back = apply_Adag_dot(hydrogen_context(scheme), st.field).value(x)
    return cosine_similarity(back, hydrogen_state(st.source).field.value(x))


def verify_consistency(
    scheme: FdScheme = ANALYTIC,
    points: int = 1000,
    seed: int = 0,
    sector_two_energy: float | None = None,
) -> dict[str, EigenResidualReport]:
    """Run the hydrogen check bundle; each report's max is compared against the path tolerance.

    Entries: the superpotential identity (absolute error), the 1s Laplacian
    identity, annihilation of 1s by ``A``, the four sector-two eigen-residuals
    and ``1 - cosine`` regeneration scores.
    """
    x = sample_points(points, seed)
    ctx = hydrogen_context(scheme)
    r = np.linalg.norm(x, axis=-1)
    bundle: dict[str, EigenResidualReport] = {}

    lhs, rhs = superpotential_identity(x, scheme)
    bundle["identity W.W - div W = 1 - 2/r"] = _report(np.abs(lhs - rhs), E_1S)

    s1 = hydrogen_state("1s").field
    psi = s1.value(x)
    lap = laplacian(s1, x, scheme)
    bundle["laplacian 1s = -2(E0 + 1/r) psi"] = _report(
        np.abs(lap + 2 * (E_1S + 1 / r) * psi) / np.abs(psi), E_1S
    )

    annihilated = apply_A(ctx, s1).value(x)
    bundle["annihilation A psi_1s = 0"] = _report(np.linalg.norm(annihilated, axis=-1) / np.abs(psi), E_1S)

    for label, rep in sector_two_residuals(x, scheme, sector_two_energy).items():
        bundle[f"sector-two H2 {label}"] = rep

    for label in SECTOR_TWO_LABELS:
        sim = regeneration_similarity(label, x, scheme)
        bundle[f"regeneration {label}"] = _report([1 - sim], E_N2)
    return bundle


def path_tolerance(scheme: FdScheme) -> float:
    return ANALYTIC_TOL if scheme.analytic else NUMERIC_TOL
