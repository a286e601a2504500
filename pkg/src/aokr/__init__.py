"""Simulation laboratory for the atom-optics kicked rotor with pulse-train noise.

Layers, bottom up: `core` converts laboratory pulse parameters to the
scaled units of the kicked rotor; `noise` draws reproducible pulse-train
noise realizations (amplitude, period, spontaneous emission); `qkr` evolves
quantum ensembles on the momentum ladder; `epsmap` runs the classical map
approximations valid near the quantum resonances; `theory` supplies the
closed-form diffusion rates and resonance peak heights; `cli` scans any of
them over a pulse-period range and writes plot-ready files.
"""

__version__ = "0.1.0"

from .core import (
    OMEGA_R_CS,
    DetuningError,
    LabParams,
    ScaledParams,
    effective_potential,
    hbar_from_period,
    scale_params,
)
from .noise import (
    AMPLITUDE_LEVEL_MAX,
    PERIOD_LEVEL_MAX,
    IntervalError,
    NoiseConfig,
    NoiseLevelError,
    NoiseRealization,
    free_evolution_intervals,
    sample_realization,
    stream_rng,
)
from .theory import (
    QuadratureError,
    UnsupportedLevelError,
    bessel_j,
    bessel_j_row,
    diffusion_curve,
    diffusion_rate,
    diffusion_rate_with_noise,
    kick_strength_from_energy,
    noise_averaged_bessel,
    quantum_kick_strength,
    resonance_height,
    write_diffusion_curve,
)
from .qkr import (
    DEFAULT_CUTOFF,
    CutoffError,
    EnsembleSpec,
    MomentumDistribution,
    QuantumState,
    ensemble_energy,
    ensemble_energy_history,
    evolve_atom,
    free_evolve,
    kick,
    momentum_distribution,
    plane_wave,
    reshuffle,
    sample_atoms,
)
from .epsmap import (
    EpsilonZeroError,
    EpsParams,
    UnsupportedNoiseError,
    classical_map_energy,
    eps_energy,
    eps_energy_history,
    eps_step,
    eps_step_inverse,
    phase_portrait,
)

__all__ = [
    "__version__",
    "OMEGA_R_CS",
    "DetuningError",
    "LabParams",
    "ScaledParams",
    "effective_potential",
    "hbar_from_period",
    "scale_params",
    "AMPLITUDE_LEVEL_MAX",
    "PERIOD_LEVEL_MAX",
    "IntervalError",
    "NoiseConfig",
    "NoiseLevelError",
    "NoiseRealization",
    "free_evolution_intervals",
    "sample_realization",
    "stream_rng",
    "QuadratureError",
    "UnsupportedLevelError",
    "bessel_j",
    "bessel_j_row",
    "diffusion_curve",
    "diffusion_rate",
    "diffusion_rate_with_noise",
    "kick_strength_from_energy",
    "noise_averaged_bessel",
    "quantum_kick_strength",
    "resonance_height",
    "write_diffusion_curve",
    "DEFAULT_CUTOFF",
    "CutoffError",
    "EnsembleSpec",
    "MomentumDistribution",
    "QuantumState",
    "ensemble_energy",
    "ensemble_energy_history",
    "evolve_atom",
    "free_evolve",
    "kick",
    "momentum_distribution",
    "plane_wave",
    "reshuffle",
    "sample_atoms",
    "EpsilonZeroError",
    "EpsParams",
    "UnsupportedNoiseError",
    "classical_map_energy",
    "eps_energy",
    "eps_energy_history",
    "eps_step",
    "eps_step_inverse",
    "phase_portrait",
]
