"""Sector-two trial states for two electrons built from orbital products.

A building block is the charge operator applied to ``o1(r1) o2(r2)``.  Its
exchange partner is obtained with the field-level exchange ``P12``, and the
triplet / singlet combinations are ``phi - P12 phi`` / ``phi + P12 phi``
(triplet meaning the antisymmetric spatial part).  Correlation is attached by
multiplying with the Padé-Jastrow factor of ``r12``, which commutes with
``P12``.

The charge context is always passed in explicitly; :func:`context_for` maps the
three supported choices (correlated trial state, bare nuclear superpotential,
no superpotential) to contexts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .diffops import (
    ANALYTIC,
    COINCIDENCE,
    NUCLEI,
    FdScheme,
    ScalarField,
    VectorField,
    add_vector_fields,
    exchange_scalar_field,
    exchange_vector_field,
    zero_vector_field,
)
from .geometry import as_config
from .helium import PadeJastrowParams, bare_context, helium_context, jastrow, jastrow_prime
from .susy import ChargeContext, apply_A, apply_Adag_dot, best_fit_scale, cosine_similarity

KINDS = ("building_block", "exchanged_block", "triplet", "singlet", "correlated_triplet", "correlated_singlet")
CONTEXTS = ("pj", "bare", "none")

_ALPHA_NORM = 1 / np.sqrt(np.pi)
_BETA_NORM = 1 / (4 * np.sqrt(2 * np.pi))


@dataclass(frozen=True)
class Orbital:
    label: str
    radial: Callable
    d_radial: Callable
    d2_radial: Callable

    def __call__(self, r):
        return self.radial(r)


def alpha_1s() -> Orbital:
    """``exp(-2r) / sqrt(pi)``."""
    return Orbital(
        "alpha_1s",
        lambda r: _ALPHA_NORM * np.exp(-2 * r),
        lambda r: -2 * _ALPHA_NORM * np.exp(-2 * r),
        lambda r: 4 * _ALPHA_NORM * np.exp(-2 * r),
    )


def beta_2s() -> Orbital:
    """``exp(-r) (1 - r) / (4 sqrt(2 pi))``, one radial node at ``r = 1``."""
    return Orbital(
        "beta_2s",
        lambda r: _BETA_NORM * np.exp(-r) * (1 - r),
        lambda r: _BETA_NORM * np.exp(-r) * (r - 2),
        lambda r: _BETA_NORM * np.exp(-r) * (3 - r),
    )


ORBITALS = {"alpha_1s": alpha_1s, "beta_2s": beta_2s}


@dataclass(frozen=True)
class AufbauState:
    kind: str
    field: VectorField
    orbitals: tuple
    params: Optional[PadeJastrowParams] = None


def _radii(x):
    x = as_config(x, 2)
    a, b = x[..., 0:3], x[..., 3:6]
    r1 = np.linalg.norm(a, axis=-1)
    r2 = np.linalg.norm(b, axis=-1)
    return x, a / r1[..., None], b / r2[..., None], r1, r2


def orbital_product(o1: Orbital, o2: Orbital) -> ScalarField:
    """``o1(r1) * o2(r2)`` on the six-dimensional configuration space."""

    def value(x):
        x = as_config(x, 2)
        r1 = np.linalg.norm(x[..., 0:3], axis=-1)
        r2 = np.linalg.norm(x[..., 3:6], axis=-1)
        return o1.radial(r1) * o2.radial(r2)

    def gradient(x):
        _, n1, n2, r1, r2 = _radii(x)
        g1 = (o1.d_radial(r1) * o2.radial(r2))[..., None] * n1
        g2 = (o1.radial(r1) * o2.d_radial(r2))[..., None] * n2
        return np.concatenate([g1, g2], axis=-1)

    def lap(x):
        _, _, _, r1, r2 = _radii(x)
        l1 = o1.d2_radial(r1) + 2 * o1.d_radial(r1) / r1
        l2 = o2.d2_radial(r2) + 2 * o2.d_radial(r2) / r2
        return l1 * o2.radial(r2) + o1.radial(r1) * l2

    def hess(x):
        x, n1, n2, r1, r2 = _radii(x)

        def radial_block(o, r, n):
            nn = n[..., :, None] * n[..., None, :]
            return o.d2_radial(r)[..., None, None] * nn + (o.d_radial(r) / r)[..., None, None] * (np.eye(3) - nn)

        out = np.zeros(x.shape + (6,))
        out[..., 0:3, 0:3] = radial_block(o1, r1, n1) * o2.radial(r2)[..., None, None]
        out[..., 3:6, 3:6] = radial_block(o2, r2, n2) * o1.radial(r1)[..., None, None]
        cross = (o1.d_radial(r1)[..., None] * n1)[..., :, None] * (o2.d_radial(r2)[..., None] * n2)[..., None, :]
        out[..., 0:3, 3:6] = cross
        out[..., 3:6, 0:3] = np.swapaxes(cross, -1, -2)
        return out

    return ScalarField(value, gradient, lap, hess, singular=frozenset({NUCLEI}))


def context_for(name: str, delta: float = 0.353, scheme: FdScheme = ANALYTIC) -> ChargeContext:
    """``pj``: correlated trial-state W; ``bare``: ``2 r1_hat + 2 r2_hat``; ``none``: ``W = 0``."""
    if name == "pj":
        return helium_context(PadeJastrowParams(delta), scheme=scheme)
    if name == "bare":
        return bare_context(2.0, scheme)
    if name == "none":
        return ChargeContext(zero_vector_field(), 0.0, scheme)
    raise KeyError(f"unknown context {name!r}; expected one of {CONTEXTS}")


def building_block(ctx: ChargeContext, o1: Orbital, o2: Orbital) -> AufbauState:
    return AufbauState("building_block", apply_A(ctx, orbital_product(o1, o2)), (o1, o2))


def exchanged_block(block: AufbauState) -> AufbauState:
    if block.kind != "building_block":
        raise ValueError(f"expected a building block, got {block.kind}")
    return AufbauState("exchanged_block", exchange_vector_field(block.field), block.orbitals)


def combine(block: AufbauState, mode: str) -> AufbauState:
    if block.kind != "building_block":
        raise ValueError(f"expected a building block, got {block.kind}")
    if mode not in ("triplet", "singlet"):
        raise ValueError(f"mode must be 'triplet' or 'singlet', got {mode!r}")
    sign = -1.0 if mode == "triplet" else 1.0
    partner = exchange_vector_field(block.field)
    return AufbauState(mode, add_vector_fields(block.field, partner, sign), block.orbitals)


def correlation_factor(delta: float, coeff: float = 0.5) -> ScalarField:
    """``exp(u(r12))`` with the Padé exponent ``u(s) = coeff s / (1 + delta s)``."""

    def parts(x):
        x = as_config(x, 2)
        d = x[..., 0:3] - x[..., 3:6]
        s = np.linalg.norm(d, axis=-1)
        return d, s

    def value(x):
        return np.exp(jastrow(parts(x)[1], delta, coeff))

    def gradient(x):
        d, s = parts(x)
        g = (np.exp(jastrow(s, delta, coeff)) * jastrow_prime(s, delta, coeff) / s)[..., None] * d
        return np.concatenate([g, -g], axis=-1)

    return ScalarField(value, gradient, singular=frozenset({COINCIDENCE}))


def attach_correlation(state: AufbauState, params: PadeJastrowParams) -> AufbauState:
    if state.kind not in ("triplet", "singlet"):
        raise ValueError(f"correlation attaches to triplet or singlet states, got {state.kind}")
    J = correlation_factor(params.alpha, params.jastrow_coeff)
    F = state.field

    def value(x):
        return J.value(x)[..., None] * F.value(x)

    jac = div = None
    if F.jacobian is not None:

        def jac(x):
            return J.gradient(x)[..., :, None] * F.value(x)[..., None, :] + J.value(x)[..., None, None] * F.jacobian(x)

    if F.divergence is not None:

        def div(x):
            return np.sum(J.gradient(x) * F.value(x), axis=-1) + J.value(x) * F.divergence(x)

    field = VectorField(value, jac, div, singular=F.singular | J.singular)
    return AufbauState(f"correlated_{state.kind}", field, state.orbitals, params)


def regeneration_target(state: AufbauState) -> ScalarField:
    """``o1(r1) o2(r2) -/+ o1(r2) o2(r1)`` matching the state's exchange symmetry."""
    o1, o2 = state.orbitals
    f = orbital_product(o1, o2)
    pf = exchange_scalar_field(f)
    sign = -1.0 if state.kind.endswith("triplet") else 1.0
    return ScalarField(lambda x: f.value(x) + sign * pf.value(x), singular=f.singular)


@dataclass(frozen=True)
class RegenerationReport:
    kind: str
    points: int
    cosine_similarity: float
    scale: float


def regeneration_check(ctx: ChargeContext, state: AufbauState, sample) -> RegenerationReport:
    """Compare ``A^+ . state`` with the symmetrized orbital product over ``sample``.

    This is a report: the two are proportional only when the product is an
    eigenfunction of the Hamiltonian that generated the context's ``W``.
    """
    if state.kind not in ("triplet", "singlet"):
        raise ValueError(f"regeneration is checked on triplet or singlet states, got {state.kind}")
    x = np.atleast_2d(as_config(sample, 2))
    back = apply_Adag_dot(ctx, state.field).value(x)
    target = regeneration_target(state).value(x)
    return RegenerationReport(state.kind, len(x), cosine_similarity(back, target), best_fit_scale(back, target))


def closed_form_block(x) -> np.ndarray:
    """Hand-written comparison form ``-exp(-2r1 - r2) [2 (1 - r2) r1_hat, r2_hat]`` of the 1s-2s block."""
    _, n1, n2, r1, r2 = _radii(x)
    e = np.exp(-2 * r1 - r2)
    return np.concatenate([(-2 * e * (1 - r2))[..., None] * n1, (-e)[..., None] * n2], axis=-1)


@dataclass(frozen=True)
class BlockComparison:
    context: str
    particle_1_cosine: float
    particle_1_scale: float
    particle_2_cosine: float
    particle_2_scale: float


def compare_block_form(context: str, sample) -> BlockComparison:
    """Per-particle agreement between the built 1s-2s block and :func:`closed_form_block`.

    A cosine of ``nan`` means the built block vanishes identically in that particle block.
    """
    x = np.atleast_2d(as_config(sample, 2))
    built = building_block(context_for(context), alpha_1s(), beta_2s()).field.value(x)
    ref = closed_form_block(x)
    out = []
    for sl in (slice(0, 3), slice(3, 6)):
        a, b = built[..., sl], ref[..., sl]
        if np.linalg.norm(a) == 0:
            out += [float("nan"), 0.0]
        else:
            out += [cosine_similarity(a, b), best_fit_scale(a, b)]
    return BlockComparison(context, *out)
