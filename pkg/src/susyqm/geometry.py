"""Configuration-space primitives.

A configuration of ``n`` particles is a flat float array of length ``3n`` laid
out block by block, ``(x1, y1, z1, x2, y2, z2, ...)``.  Every function here also
accepts a batch of configurations with shape ``(m, 3n)``; the particle axis is
always the last one.
"""

from __future__ import annotations

import numpy as np

RADIUS_EPSILON = 1e-10


class SingularPointError(ValueError):
    """Raised when a formula that divides by a distance is evaluated too close to zero."""


def as_config(x, n_particles: int | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 or x.shape[-1] % 3 != 0 or x.shape[-1] == 0:
        raise ValueError(f"configuration length must be a positive multiple of 3, got shape {x.shape}")
    if n_particles is not None and x.shape[-1] != 3 * n_particles:
        raise ValueError(f"expected {3 * n_particles} coordinates, got {x.shape[-1]}")
    return x


def n_particles(x) -> int:
    return np.shape(x)[-1] // 3


def block(x, i: int) -> np.ndarray:
    """View of particle ``i``'s three coordinates."""
    n = n_particles(x)
    if not 0 <= i < n:
        raise IndexError(f"particle index {i} out of range for {n} particles")
    return x[..., 3 * i:3 * i + 3]


def particle_radius(x, i: int):
    x = as_config(x)
    return np.linalg.norm(block(x, i), axis=-1)


def pair_distance(x, i: int, j: int):
    if i == j:
        raise ValueError("pair_distance needs two distinct particles")
    x = as_config(x)
    return np.linalg.norm(block(x, i) - block(x, j), axis=-1)


def unit_vector_lift(x, i: int) -> np.ndarray:
    """Radial unit vector of particle ``i`` embedded in the full 3n space."""
    x = as_config(x)
    r = particle_radius(x, i)
    if np.any(r <= RADIUS_EPSILON):
        raise SingularPointError(f"particle {i} is within {RADIUS_EPSILON} of the origin")
    out = np.zeros_like(x)
    out[..., 3 * i:3 * i + 3] = block(x, i) / r[..., None]
    return out


def swap_blocks(v) -> np.ndarray:
    """Swap the first two particle blocks of a two-particle vector."""
    v = as_config(v)
    if n_particles(v) != 2:
        raise NotImplementedError("particle exchange is only defined for two particles")
    return np.concatenate([v[..., 3:6], v[..., 0:3]], axis=-1)


def exchange_12(x) -> np.ndarray:
    return swap_blocks(x)


def exchange_12_vector(x, v) -> np.ndarray:
    """Exchange a vector attached to configuration ``x``.

    Returns the swapped point together with the swapped components; for a field
    ``F`` the exchanged field is ``swap_blocks(F(exchange_12(x)))``.
    """
    return exchange_12(x), swap_blocks(v)


def min_nuclear_distance(x):
    x = as_config(x)
    return np.min(np.stack([particle_radius(x, i) for i in range(n_particles(x))]), axis=0)


def min_pair_distance(x):
    x = as_config(x)
    n = n_particles(x)
    if n < 2:
        return np.full(x.shape[:-1], np.inf)
    d = [pair_distance(x, i, j) for i in range(n) for j in range(i + 1, n)]
    return np.min(np.stack(d), axis=0)


def random_shell_points(rng, m: int, n_particles: int = 1, r_min: float = 0.1, r_max: float = 20.0):
    """``m`` configurations with every particle at an isotropic direction and a
    radius drawn uniformly from ``[r_min, r_max]``."""
    d = rng.normal(size=(m, n_particles, 3))
    d /= np.linalg.norm(d, axis=-1, keepdims=True)
    r = rng.uniform(r_min, r_max, size=(m, n_particles, 1))
    return (d * r).reshape(m, 3 * n_particles)
