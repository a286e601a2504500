"""Classical map approximations near a quantum resonance.

Close to hbar_eff = 2 pi m the ladder dynamics of one quasimomentum class
reduces to an area-preserving map in the detuning-rescaled momentum
rho = epsilon * (ladder index):

    phi' = phi + sign(eps) rho + pi l + hbar_eff beta   (mod 2 pi)
    rho' = rho + |eps| * kick_ratio * R * sin(phi')

with R the per-kick amplitude factor.  Kinetic energies come back through
E = <rho^2> / (2 eps^2), so the model stays finite while eps shrinks; at
eps = 0 the map itself degenerates (the kick term carries a factor |eps|)
and the analytic resonant limit is used instead, where momentum after n
kicks is the phasor sum rho_n / |eps| = n0 + kick_ratio * sum_s R_s
sin(phi_0 + s a) with per-kick phase advance a = pi l + hbar_eff beta.

Dropping the gauge terms (pi l, hbar_eff beta) and the eps rescaling gives
the ordinary standard map, used here as a brute-force oracle for the
kick-to-kick correlation expansion of the diffusion rate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .noise import (
    STREAM_ATOM_MOMENTA,
    STREAM_MAP_PHASE,
    NoiseConfig,
    sample_realization,
    stream_rng,
)
from .qkr import EnsembleSpec, _norm_ppf, sample_atoms
from .theory import resonance_height

TWO_PI = 2.0 * math.pi
EPS_WARN_LIMIT = 0.5
_RHO_SIGMA = 4.0 * TWO_PI  # broad momentum start for the standard-map oracle


class EpsilonZeroError(ValueError):
    """The map degenerates at eps = 0; ask for the analytic limit instead."""


class UnsupportedNoiseError(ValueError):
    """Only amplitude noise has a map counterpart here."""


@dataclass(frozen=True)
class EpsParams:
    """Map parameters: resonance detuning and kick strength.

    epsilon is the distance of hbar_eff from the resonance 2 pi m (either
    sign); kick_ratio is kappa / hbar_eff; parity enters through the pi * l
    gauge term (l = 1 for the primary ladder resonances); beta is the
    quasimomentum used when no per-trajectory values are supplied.
    """

    epsilon: float
    kick_ratio: float
    parity: int = 1
    resonance_order: int = 1
    beta: float = 0.0

    def __post_init__(self) -> None:
        if self.kick_ratio < 0.0:
            raise ValueError(f"kick_ratio must be >= 0, got {self.kick_ratio}")
        if self.parity < 0:
            raise ValueError(f"parity must be a nonnegative integer, got {self.parity}")
        if self.resonance_order < 1:
            raise ValueError(
                f"resonance_order must be a positive integer, got {self.resonance_order}"
            )
        if not 0.0 <= self.beta < 1.0:
            raise ValueError(f"beta must lie in [0, 1), got {self.beta}")
        if abs(self.epsilon) > EPS_WARN_LIMIT:
            warnings.warn(
                f"|epsilon| = {abs(self.epsilon)} is large for a near-resonance model",
                stacklevel=2,
            )

    @property
    def hbar_eff(self) -> float:
        return TWO_PI * self.resonance_order + self.epsilon


def _phase_advance(p: EpsParams, beta) -> np.ndarray | float:
    return math.pi * p.parity + p.hbar_eff * np.asarray(beta, dtype=float)


def eps_step(phi, rho, p: EpsParams, kick_factor=1.0, beta=None):
    """One map iteration; phi updates first and feeds the kick.

    phi, rho may be scalars or arrays (broadcast together).  kick_factor is
    the per-kick amplitude factor; beta overrides p.beta per trajectory.
    """
    b = p.beta if beta is None else beta
    phi = np.mod(phi + np.sign(p.epsilon) * np.asarray(rho) + _phase_advance(p, b), TWO_PI)
    rho = rho + abs(p.epsilon) * p.kick_ratio * np.asarray(kick_factor) * np.sin(phi)
    return phi, rho


def eps_step_inverse(phi, rho, p: EpsParams, kick_factor=1.0, beta=None):
    """Exact inverse of `eps_step`: undo the kick, then the rotation."""
    b = p.beta if beta is None else beta
    rho = rho - abs(p.epsilon) * p.kick_ratio * np.asarray(kick_factor) * np.sin(phi)
    phi = np.mod(phi - np.sign(p.epsilon) * np.asarray(rho) - _phase_advance(p, b), TWO_PI)
    return phi, rho


def _require_amplitude_only(cfg: NoiseConfig) -> None:
    if cfg.period_level != 0.0 or cfg.se_probability != 0.0:
        raise UnsupportedNoiseError(
            "the map models amplitude noise only; period noise and spontaneous "
            "emission have no counterpart here"
        )


def _stratified_phases(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform [0, 2pi) start angles, stratified then shuffled.

    The shuffle decorrelates the angle strata from any other stratified
    per-trajectory quantity (quasimomentum, start momentum).
    """
    phases = TWO_PI * (np.arange(n) + rng.random(n)) / n
    return rng.permutation(phases)


def _resonant_limit_history(
    p: EpsParams,
    n_kicks: int,
    betas: np.ndarray,
    n0s: np.ndarray,
    gains: np.ndarray,
    factors: np.ndarray,
) -> np.ndarray:
    """eps -> 0 limit of the rescaled energies after kicks 0..n_kicks.

    Momentum becomes the phasor sum rho_n / |eps| = n0 + g r sum_s R_s
    sin(phi_0 + s a); averaging the start angle analytically leaves
    E_n = <n0^2/2 + (g r)^2 |sum_s R_s e^(i s a)|^2 / 4> per trajectory.
    """
    a = math.pi * p.parity + p.hbar_eff * betas
    steps = np.arange(1, n_kicks + 1)
    partial = np.cumsum(factors[None, :] * np.exp(1j * np.outer(a, steps)), axis=1)
    base = n0s.astype(float) ** 2 / 2.0
    growth = (gains * p.kick_ratio) ** 2 / 4.0
    out = np.empty(n_kicks + 1)
    out[0] = float(np.mean(base))
    out[1:] = np.mean(base[:, None] + growth[:, None] * np.abs(partial) ** 2, axis=0)
    return out


def eps_energy_history(
    p: EpsParams,
    n_kicks: int,
    spec: EnsembleSpec,
    cfg: NoiseConfig = NoiseConfig(),
    n_realizations: int = 1,
    analytic_limit: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Rescaled mean energy E_n = <rho_n^2> / (2 eps^2) after each kick.

    The ensemble (trajectory count, quasimomentum mode, momentum spread,
    per-trajectory kick factors) follows `spec` exactly as in the quantum
    engine, with rho_0 = |eps| * n0, so the two models share initial
    conditions and noise streams realization by realization.  At eps = 0
    the analytic resonant limit is evaluated instead of iterating (or
    EpsilonZeroError is raised when analytic_limit is false).
    """
    if n_kicks < 0:
        raise ValueError(f"n_kicks must be >= 0, got {n_kicks}")
    if n_realizations < 1:
        raise ValueError(f"n_realizations must be >= 1, got {n_realizations}")
    _require_amplitude_only(cfg)
    if spec.p_max is not None:
        raise ValueError("detection windows are not modeled for map ensembles")
    if p.epsilon == 0.0 and not analytic_limit:
        raise EpsilonZeroError(
            "eps = 0 degenerates the map; pass analytic_limit=True for the resonant limit"
        )

    runs = np.empty((n_realizations, n_kicks + 1))
    for r in range(n_realizations):
        rcfg = NoiseConfig(
            amplitude_level=cfg.amplitude_level,
            master_seed=cfg.master_seed,
            realization_index=cfg.realization_index + r,
            time_resolution=cfg.time_resolution,
        )
        realization = sample_realization(rcfg, n_kicks, 1)
        factors = realization.amplitude_factors
        n0s, betas, gains = sample_atoms(spec, rcfg)
        if p.epsilon == 0.0:
            runs[r] = _resonant_limit_history(p, n_kicks, betas, n0s, gains, factors)
            continue

        rng = stream_rng(rcfg.master_seed, rcfg.realization_index, STREAM_MAP_PHASE)
        phi = _stratified_phases(rng, spec.n_atoms)
        rho = abs(p.epsilon) * n0s.astype(float)
        scale = 0.5 / p.epsilon**2
        runs[r, 0] = float(np.mean(rho**2)) * scale
        for n in range(n_kicks):
            phi, rho = eps_step(phi, rho, p, kick_factor=factors[n] * gains, beta=betas)
            runs[r, n + 1] = float(np.mean(rho**2)) * scale

    mean = runs.mean(axis=0)
    if n_realizations > 1:
        sem = runs.std(axis=0, ddof=1) / math.sqrt(n_realizations)
    else:
        sem = np.zeros_like(mean)
    return mean, sem


def eps_energy(
    p: EpsParams,
    n_kicks: int,
    spec: EnsembleSpec,
    cfg: NoiseConfig = NoiseConfig(),
    n_realizations: int = 1,
    analytic_limit: bool = True,
) -> tuple[float, float]:
    """Rescaled mean energy after the final kick, with s.e.m. across realizations."""
    mean, sem = eps_energy_history(p, n_kicks, spec, cfg, n_realizations, analytic_limit)
    return float(mean[-1]), float(sem[-1])


def phase_portrait(
    p: EpsParams,
    n_phi: int = 16,
    n_rho: int = 16,
    n_iters: int = 128,
    cfg: NoiseConfig = NoiseConfig(),
) -> np.ndarray:
    """Iterate a uniform grid of starts and record every visited point.

    Returns an array of shape (n_phi * n_rho * (n_iters + 1), 2) holding
    (phi, rho mod 2pi) rows: the initial grid plus one row set per
    iteration.  rho is folded into [0, 2pi) because the map commutes with
    2pi shifts of rho.  Amplitude noise draws one realization for the whole
    grid; n_iters = 0 returns exactly the initial grid.
    """
    if n_phi < 1 or n_rho < 1:
        raise ValueError(f"grid must be at least 1x1, got {n_phi}x{n_rho}")
    if n_iters < 0:
        raise ValueError(f"n_iters must be >= 0, got {n_iters}")
    _require_amplitude_only(cfg)
    if p.epsilon == 0.0:
        raise EpsilonZeroError("eps = 0 degenerates the map; no portrait exists")

    if n_iters > 0:
        factors = sample_realization(cfg, n_iters, 1).amplitude_factors
    else:
        factors = np.empty(0)
    phi = np.repeat(TWO_PI * (np.arange(n_phi) + 0.5) / n_phi, n_rho)
    rho = np.tile(TWO_PI * (np.arange(n_rho) + 0.5) / n_rho, n_phi)
    points = np.empty((n_phi * n_rho * (n_iters + 1), 2))
    points[: phi.size, 0] = phi
    points[: phi.size, 1] = rho
    for n in range(n_iters):
        phi, rho = eps_step(phi, rho, p, kick_factor=factors[n])
        block = slice((n + 1) * phi.size, (n + 2) * phi.size)
        points[block, 0] = phi
        points[block, 1] = np.mod(rho, TWO_PI)
    return points


def classical_map_energy(
    kappa: float,
    hbar_eff: float,
    n_kicks: int = 5,
    n_traj: int = 100_000,
    cfg: NoiseConfig = NoiseConfig(),
    n_realizations: int = 1,
    fit_range: tuple[int, int] = (0, 5),
) -> tuple[float, float]:
    """Energy growth rate of the plain standard map, by least squares.

    phi' = phi + rho; rho' = rho + kappa * R * sin(phi'), with uniform
    start angles and a broad Gaussian momentum spread (narrow starts leave
    a spurious start-angle correlation in the first kicks).  Returns the
    slope of <rho^2> / (2 hbar_eff^2) against kick number over the
    inclusive window fit_range, averaged over noise realizations, with its
    s.e.m.  hbar_eff only sets the energy units for comparison with the
    quantum-facing rate formulas.

    With amplitude noise the first two kicks run at the bare quasilinear
    rate before the kick-to-kick correlations switch on, so the default
    early window overestimates the asymptotic rate by several percent;
    pass a later window (say n_kicks=16, fit_range=(8, 16)) to measure
    the settled rate in that case.
    """
    if kappa < 0.0:
        raise ValueError(f"kappa must be >= 0, got {kappa}")
    if hbar_eff <= 0.0:
        raise ValueError(f"hbar_eff must be positive, got {hbar_eff}")
    if n_traj < 2:
        raise ValueError(f"n_traj must be >= 2, got {n_traj}")
    lo, hi = fit_range
    if not 0 <= lo < hi <= n_kicks:
        raise ValueError(
            f"fit_range must satisfy 0 <= lo < hi <= n_kicks, got {fit_range} with n_kicks={n_kicks}"
        )
    if n_realizations < 1:
        raise ValueError(f"n_realizations must be >= 1, got {n_realizations}")
    _require_amplitude_only(cfg)

    kicks = np.arange(lo, hi + 1, dtype=float)
    slopes = np.empty(n_realizations)
    for r in range(n_realizations):
        rcfg = NoiseConfig(
            amplitude_level=cfg.amplitude_level,
            master_seed=cfg.master_seed,
            realization_index=cfg.realization_index + r,
            time_resolution=cfg.time_resolution,
        )
        factors = sample_realization(rcfg, n_kicks, 1).amplitude_factors
        rng_phi = stream_rng(rcfg.master_seed, rcfg.realization_index, STREAM_MAP_PHASE)
        phi = _stratified_phases(rng_phi, n_traj)
        rng_rho = stream_rng(rcfg.master_seed, rcfg.realization_index, STREAM_ATOM_MOMENTA)
        rho = _RHO_SIGMA * _norm_ppf((np.arange(n_traj) + rng_rho.random(n_traj)) / n_traj)

        energy = np.empty(n_kicks + 1)
        energy[0] = np.mean(rho**2)
        for n in range(n_kicks):
            phi = np.mod(phi + rho, TWO_PI)
            rho = rho + kappa * factors[n] * np.sin(phi)
            energy[n + 1] = np.mean(rho**2)
        energy /= 2.0 * hbar_eff**2
        window = energy[lo : hi + 1]
        slopes[r] = float(np.polyfit(kicks, window, 1)[0])

    if n_realizations > 1:
        sem = float(np.std(slopes, ddof=1) / math.sqrt(n_realizations))
    else:
        sem = 0.0
    return float(np.mean(slopes)), sem
