"""Metropolis sampling of ``|psi|^2``, Monte Carlo estimates with blocking errors,
and Gauss-Laguerre quadrature for radial integrals.

Random numbers come from NumPy's PCG64 bit generator.  Walker ``w`` of a run with
seed ``s`` owns the stream ``PCG64(SeedSequence([s, w]))``; its proposals are
drawn in fixed-size chunks from that stream only, so the samples of a walker do
not depend on how walkers are grouped, vectorized or spread over threads.
Results are always merged in walker order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .diffops import ANALYTIC, FdScheme, ScalarField, singular_distance
from .geometry import RADIUS_EPSILON
from .helium import PadeJastrowParams, helium_potential, local_energy, pade_jastrow

CHUNK = 512
PLATEAU_TOL = 0.05
MIN_BLOCKS = 16
MAX_SKIP_FRACTION = 0.01


class SamplerQualityError(RuntimeError):
    """Too many samples had to be discarded to trust the estimate."""


@dataclass(frozen=True)
class MetropolisConfig:
    steps_per_walker: int
    burn_in: int = 0
    n_walkers: int = 64
    step_size: float = 0.5
    seed: int = 0
    target_acceptance: float = 0.5

    def __post_init__(self):
        if self.n_walkers < 1:
            raise ValueError("n_walkers must be positive")
        if self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")
        if self.steps_per_walker <= self.burn_in:
            raise ValueError("steps_per_walker must exceed burn_in")
        if not self.step_size > 0:
            raise ValueError("step_size must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 0 < self.target_acceptance < 1:
            raise ValueError("target_acceptance must lie in (0, 1)")

    @property
    def kept_steps(self) -> int:
        return self.steps_per_walker - self.burn_in

    def with_seed(self, seed: int) -> "MetropolisConfig":
        return MetropolisConfig(
            self.steps_per_walker, self.burn_in, self.n_walkers, self.step_size, seed, self.target_acceptance
        )


@dataclass(frozen=True)
class EnergyEstimate:
    """Monte Carlo mean with a blocking error bar (Hartree for energies)."""

    mean: float
    std_error: float
    n_samples: int
    acceptance_rate: float
    blocks: int
    skipped: int = 0


@dataclass
class SampleSet:
    points: np.ndarray  # (kept_steps, n_walkers, 3n)
    acceptance_rate: float
    singular_rejections: int

    def flat(self) -> np.ndarray:
        return self.points.reshape(-1, self.points.shape[-1])


@dataclass
class _WalkerRun:
    observations: np.ndarray
    accepted: int
    proposals: int
    singular_rejections: int


def walker_rng(seed: int, walker: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, walker])))


def thread_count(workers: int | None = None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("SUSYQM_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _initial_positions(rngs, dim: int, loci) -> np.ndarray:
    x = np.empty((len(rngs), dim))
    for k, rng in enumerate(rngs):
        while True:
            x[k] = rng.standard_normal(dim)
            if not loci or singular_distance(x[k], loci) > RADIUS_EPSILON:
                break
    return x


def _density_values(density, x) -> np.ndarray:
    rho = np.asarray(density(x), dtype=float)
    if np.any(rho < 0):
        raise ValueError("sampling density evaluated negative")
    return rho


def _walk(density, cfg: MetropolisConfig, dim: int, walkers: Sequence[int]) -> Iterator:
    """Yield ``(step, x, accepted_mask, singular_mask)`` for every step of the given walkers."""
    loci = getattr(density, "singular", frozenset())
    rngs = [walker_rng(cfg.seed, w) for w in walkers]
    x = _initial_positions(rngs, dim, loci)
    rho = _density_values(density, x)
    step = 0
    while step < cfg.steps_per_walker:
        k = min(CHUNK, cfg.steps_per_walker - step)
        noise = np.stack([r.standard_normal((k, dim)) for r in rngs], axis=1)
        unif = np.stack([r.random(k) for r in rngs], axis=1)
        for t in range(k):
            y = x + cfg.step_size * noise[t]
            if loci:
                near = singular_distance(y, loci) <= RADIUS_EPSILON
            else:
                near = np.zeros(len(x), dtype=bool)
            rho_y = np.where(near, 0.0, _density_values(density, np.where(near[:, None], x, y)))
            accept = (unif[t] * rho < rho_y) & ~near
            x = np.where(accept[:, None], y, x)
            rho = np.where(accept, rho_y, rho)
            yield step, x, accept, near
            step += 1


def _run_walkers(density, cfg, dim, walkers, observe) -> _WalkerRun:
    obs = []
    accepted = proposals = singular = 0
    for step, x, accept, near in _walk(density, cfg, dim, walkers):
        if step < cfg.burn_in:
            continue
        accepted += int(accept.sum())
        proposals += len(accept)
        singular += int(near.sum())
        obs.append(observe(x))
    return _WalkerRun(np.stack(obs), accepted, proposals, singular)


def _collect(density, cfg: MetropolisConfig, dim: int, observe: Callable, workers: int | None = 1):
    """Run every walker and return observations shaped ``(kept_steps, n_walkers, ...)``."""
    n = min(thread_count(workers), cfg.n_walkers)
    groups = [list(g) for g in np.array_split(np.arange(cfg.n_walkers), n)]
    if n == 1:
        runs = [_run_walkers(density, cfg, dim, groups[0], observe)]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            runs = list(pool.map(lambda g: _run_walkers(density, cfg, dim, g, observe), groups))
    obs = np.concatenate([r.observations for r in runs], axis=1)
    accepted = sum(r.accepted for r in runs)
    proposals = sum(r.proposals for r in runs)
    singular = sum(r.singular_rejections for r in runs)
    return obs, accepted / proposals, singular


def metropolis_sample(
    density, cfg: MetropolisConfig, n_particles: int = 1, workers: int | None = 1
) -> SampleSet:
    """Post-burn-in configurations of every walker, distributed as ``density``."""
    pts, acc, singular = _collect(density, cfg, 3 * n_particles, lambda x: x.copy(), workers)
    return SampleSet(pts, acc, singular)


def blocking_levels(series) -> list[tuple[int, float]]:
    """``(n_blocks, standard error)`` for block sizes 1, 2, 4, ... down to two blocks."""
    x = np.asarray(series, dtype=float)
    out = []
    while len(x) >= 2:
        n = len(x)
        out.append((n, float(np.sqrt(np.var(x) / (n - 1)))))
        m = n // 2
        x = 0.5 * (x[0:2 * m:2] + x[1:2 * m:2])
    return out


def blocking_error(series) -> tuple[float, int]:
    """Standard error of the mean of a correlated series and the block count it was read at.

    Blocks are doubled until the error estimate changes by less than 5% across
    one doubling.  If no plateau appears while at least ``MIN_BLOCKS`` blocks
    remain, the largest estimate seen is returned.
    """
    levels = blocking_levels(series)
    if not levels:
        return 0.0, len(np.atleast_1d(series))
    usable = [lv for lv in levels if lv[0] >= MIN_BLOCKS] or levels[:1]
    for (n0, e0), (_, e1) in zip(usable, usable[1:]):
        if e0 == 0.0 and e1 == 0.0:
            return 0.0, n0
        if e0 > 0 and abs(e1 - e0) / e0 < PLATEAU_TOL:
            return max(e0, e1), n0
    n_best, e_best = max(usable, key=lambda lv: lv[1])
    return e_best, n_best


def _estimate(values: np.ndarray, acceptance: float) -> EnergyEstimate:
    """Reduce ``(kept_steps, n_walkers)`` observations, skipping non-finite entries."""
    finite = np.isfinite(values)
    skipped = int(values.size - finite.sum())
    if skipped > MAX_SKIP_FRACTION * values.size:
        raise SamplerQualityError(f"{skipped} of {values.size} samples were not finite")
    clean = np.where(finite, values, 0.0)
    counts = finite.sum(axis=1)
    per_step = clean.sum(axis=1) / np.maximum(counts, 1)
    per_step = per_step[counts > 0]
    err, blocks = blocking_error(per_step)
    return EnergyEstimate(
        mean=float(clean.sum() / finite.sum()),
        std_error=err,
        n_samples=int(finite.sum()),
        acceptance_rate=float(acceptance),
        blocks=int(blocks),
        skipped=skipped,
    )


def squared(psi: ScalarField) -> ScalarField:
    return ScalarField(value=lambda x: psi.value(x) ** 2, singular=psi.singular)


def vmc_energy(
    psi: ScalarField,
    potential,
    cfg: MetropolisConfig,
    n_particles: int = 2,
    scheme: FdScheme = ANALYTIC,
    workers: int | None = 1,
) -> EnergyEstimate:
    """Variational energy: mean local energy over Metropolis samples of ``psi^2``."""

    def observe(x):
        with np.errstate(all="ignore"):
            try:
                return local_energy(psi, x, potential, scheme)
            except ValueError:
                return np.array([_safe_local_energy(psi, xi, potential, scheme) for xi in x])

    obs, acc, _ = _collect(squared(psi), cfg, 3 * n_particles, observe, workers)
    return _estimate(obs, acc)


def _safe_local_energy(psi, x, potential, scheme) -> float:
    try:
        return float(local_energy(psi, x[None, :], potential, scheme)[0])
    except ValueError:
        return np.nan


@dataclass
class AlphaScan:
    curve: list[tuple[float, EnergyEstimate]] = field(default_factory=list)

    @property
    def argmin(self) -> float:
        return min(self.curve, key=lambda item: item[1].mean)[0]


def alpha_scan(
    alphas: Sequence[float],
    cfg: MetropolisConfig,
    z_eff: float = 2.0,
    jastrow_coeff: float = 0.5,
    potential=helium_potential,
    workers: int | None = 1,
) -> AlphaScan:
    """VMC energy of the Padé-Jastrow state on a grid of ``alpha``; entry ``i`` uses seed ``cfg.seed + i``."""
    if len(alphas) == 0:
        raise ValueError("alpha grid is empty")
    scan = AlphaScan()
    for i, a in enumerate(alphas):
        psi = pade_jastrow(PadeJastrowParams(a, z_eff, jastrow_coeff))
        est = vmc_energy(psi, potential, cfg.with_seed(cfg.seed + i), workers=workers)
        scan.curve.append((float(a), est))
    return scan


def _pointwise_product(f, g):
    def integrand(x):
        a, b = f(x), g(x)
        if np.ndim(a) == np.ndim(x):
            return np.sum(a * b, axis=-1)
        return a * b

    return integrand


def mc_inner_product(f, g, weight, cfg: MetropolisConfig, n_particles: int = 1, workers: int | None = 1):
    """Estimate ``int f.g / int weight`` by sampling ``weight``.

    ``f`` and ``g`` may be scalar or vector fields; vector values are dotted
    pointwise.
    """
    fg = _pointwise_product(f, g)

    def observe(x):
        with np.errstate(all="ignore"):
            return fg(x) / weight(x)

    obs, acc, _ = _collect(weight, cfg, 3 * n_particles, observe, workers)
    return _estimate(obs, acc)


def mc_ratio(numerator, denominator, weight, cfg: MetropolisConfig, n_particles: int = 1, workers: int | None = 1):
    """Estimate ``int numerator / int denominator`` from one chain sampling ``weight``.

    The error bar uses the linearized ratio ``(a_t - R b_t) / mean(b)`` per step,
    blocked like any other series.
    """

    def observe(x):
        w = weight(x)
        return np.stack([numerator(x) / w, denominator(x) / w], axis=-1)

    obs, acc, _ = _collect(weight, cfg, 3 * n_particles, observe, workers)
    a, b = obs[..., 0], obs[..., 1]
    ratio = a.sum() / b.sum()
    lin = (a.mean(axis=1) - ratio * b.mean(axis=1)) / b.mean()
    err, blocks = blocking_error(lin)
    return EnergyEstimate(float(ratio), err, int(a.size), float(acc), int(blocks))


def radial_quadrature(integrand: Callable, order: int = 64, rate: float = 1.0) -> float:
    """``int_0^inf integrand(r) dr`` by Gauss-Laguerre quadrature.

    Nodes are scaled by ``1/rate``, so the rule is exact for ``poly(r) exp(-rate r)``.
    """
    t, w = np.polynomial.laguerre.laggauss(order)
    r = t / rate
    return float(np.sum(w * np.exp(t) * integrand(r)) / rate)
