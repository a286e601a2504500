"""Pulse-train noise: per-kick random levels and their sampling streams.

Every random draw in the package flows through `stream_rng`, a counter-based
Philox generator keyed by (master_seed, realization_index, stream id).  Two
realizations of the same configuration are statistically independent; the
same triple always reproduces the same bits, on any machine and with any
worker count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

# fixed stream ids; never renumber, stored seeds depend on them
STREAM_AMPLITUDE = 0
STREAM_PERIOD = 1
STREAM_SE_EVENTS = 2
STREAM_SE_BETA = 3
STREAM_ATOM_MOMENTA = 4
STREAM_ATOM_BETA = 5
STREAM_KICK_SPREAD = 6
STREAM_MAP_PHASE = 7

AMPLITUDE_LEVEL_MAX = 2.0
PERIOD_LEVEL_MAX = 1.0  # exclusive


class NoiseLevelError(ValueError):
    """A noise level lies outside its admissible range."""


class IntervalError(ValueError):
    """Period offsets put two pulses in the wrong order (interval <= 0)."""


def stream_rng(master_seed: int, realization_index: int, stream: int) -> np.random.Generator:
    """Philox generator for one (seed, realization, stream) triple."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(realization_index, stream))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class NoiseConfig:
    """Noise levels of one pulse train plus the seed that realizes them.

    amplitude_level: L_A in [0, 2]; kick factors R_n = 1 + delta_n with
                     delta_n uniform on [-L_A/2, +L_A/2]
    period_level:    L_P in [0, 1); pulse n fires at scaled time n + d_n with
                     d_n uniform on [-L_P/2, +L_P/2], d_0 = 0.  Offsets are
                     attached to the regular grid, not accumulated, so the
                     pulse clock never drifts.
    se_probability:  spontaneous-emission probability per atom per pulse
    time_resolution: optional pulse-generator quantization step (period
                     units); offsets are rounded to multiples of it
    """

    amplitude_level: float = 0.0
    period_level: float = 0.0
    se_probability: float = 0.0
    master_seed: int = 0
    realization_index: int = 0
    time_resolution: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.amplitude_level <= AMPLITUDE_LEVEL_MAX:
            raise NoiseLevelError(
                f"amplitude_level must lie in [0, {AMPLITUDE_LEVEL_MAX}], "
                f"got {self.amplitude_level}"
            )
        if not 0.0 <= self.period_level < PERIOD_LEVEL_MAX:
            raise NoiseLevelError(
                f"period_level must lie in [0, {PERIOD_LEVEL_MAX}), got {self.period_level}"
            )
        if not 0.0 <= self.se_probability <= 1.0:
            raise NoiseLevelError(
                f"se_probability must lie in [0, 1], got {self.se_probability}"
            )
        if self.realization_index < 0:
            raise ValueError(f"realization_index must be >= 0, got {self.realization_index}")
        if self.time_resolution is not None and self.time_resolution <= 0.0:
            raise ValueError(f"time_resolution must be positive, got {self.time_resolution}")


@dataclass(frozen=True)
class NoiseRealization:
    """One concrete pulse train: the numbers every atom of a run shares.

    amplitude_factors: R_n, shape (n_kicks,)
    period_offsets:    d_n, shape (n_kicks,), d_0 = 0
    se_events:         bool, shape (n_atoms, n_kicks); True = reshuffle after kick
    se_betas:          replacement quasimomenta, same shape, uniform [0, 1)
    """

    config: NoiseConfig
    amplitude_factors: np.ndarray
    period_offsets: np.ndarray
    se_events: np.ndarray
    se_betas: np.ndarray

    @property
    def n_kicks(self) -> int:
        return len(self.amplitude_factors)

    @property
    def n_atoms(self) -> int:
        return self.se_events.shape[0]

    def se_event(self, atom: int, kick: int) -> bool:
        """Whether the given atom reshuffles right after the given kick."""
        return bool(self.se_events[atom, kick])

    def to_json(self) -> str:
        """Serialize for audit/replay; SE events stored sparsely."""
        hits = np.argwhere(self.se_events)
        record = {
            "config": {
                "amplitude_level": self.config.amplitude_level,
                "period_level": self.config.period_level,
                "se_probability": self.config.se_probability,
                "master_seed": self.config.master_seed,
                "realization_index": self.config.realization_index,
                "time_resolution": self.config.time_resolution,
            },
            "n_kicks": self.n_kicks,
            "n_atoms": self.n_atoms,
            "amplitude_factors": self.amplitude_factors.tolist(),
            "period_offsets": self.period_offsets.tolist(),
            "se_hits": [
                [int(a), int(k), float(self.se_betas[a, k])] for a, k in hits
            ],
        }
        return json.dumps(record, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "NoiseRealization":
        record = json.loads(text)
        cfg = NoiseConfig(**record["config"])
        n_atoms, n_kicks = record["n_atoms"], record["n_kicks"]
        se_events = np.zeros((n_atoms, n_kicks), dtype=bool)
        se_betas = np.zeros((n_atoms, n_kicks))
        for a, k, b in record["se_hits"]:
            se_events[a, k] = True
            se_betas[a, k] = b
        return NoiseRealization(
            config=cfg,
            amplitude_factors=np.asarray(record["amplitude_factors"], dtype=float),
            period_offsets=np.asarray(record["period_offsets"], dtype=float),
            se_events=se_events,
            se_betas=se_betas,
        )


def sample_realization(cfg: NoiseConfig, n_kicks: int, n_atoms: int = 1) -> NoiseRealization:
    """Draw one pulse train (and per-atom SE schedule) from the config's streams."""
    if n_kicks < 0:
        raise ValueError(f"n_kicks must be >= 0, got {n_kicks}")
    if n_atoms < 1:
        raise ValueError(f"n_atoms must be >= 1, got {n_atoms}")

    half_a = 0.5 * cfg.amplitude_level
    rng = stream_rng(cfg.master_seed, cfg.realization_index, STREAM_AMPLITUDE)
    factors = 1.0 + rng.uniform(-half_a, half_a, n_kicks) if half_a > 0 else np.ones(n_kicks)

    half_p = 0.5 * cfg.period_level
    rng = stream_rng(cfg.master_seed, cfg.realization_index, STREAM_PERIOD)
    offsets = rng.uniform(-half_p, half_p, n_kicks) if half_p > 0 else np.zeros(n_kicks)
    if n_kicks > 0:
        offsets[0] = 0.0
    if cfg.time_resolution is not None:
        offsets = np.round(offsets / cfg.time_resolution) * cfg.time_resolution

    if cfg.se_probability > 0:
        rng = stream_rng(cfg.master_seed, cfg.realization_index, STREAM_SE_EVENTS)
        se_events = rng.random((n_atoms, n_kicks)) < cfg.se_probability
        rng = stream_rng(cfg.master_seed, cfg.realization_index, STREAM_SE_BETA)
        se_betas = rng.random((n_atoms, n_kicks))
    else:
        se_events = np.zeros((n_atoms, n_kicks), dtype=bool)
        se_betas = np.zeros((n_atoms, n_kicks))

    return NoiseRealization(
        config=cfg,
        amplitude_factors=factors,
        period_offsets=offsets,
        se_events=se_events,
        se_betas=se_betas,
    )


def free_evolution_intervals(period_offsets: np.ndarray) -> np.ndarray:
    """Gaps between consecutive pulses: dtau_n = 1 + d_{n+1} - d_n.

    N pulses give N-1 intervals, summing to N-1 + d_{N-1} (offsets attach to
    the grid, so total elapsed time keeps the grid's length).  Raises if any
    interval is not positive, which a level below 1 cannot produce.
    """
    offsets = np.asarray(period_offsets, dtype=float)
    if offsets.ndim != 1:
        raise ValueError("period_offsets must be one-dimensional")
    intervals = 1.0 + np.diff(offsets)
    if np.any(intervals <= 0.0):
        bad = int(np.argmax(intervals <= 0.0))
        raise IntervalError(
            f"interval between pulses {bad} and {bad + 1} is {intervals[bad]:g} <= 0"
        )
    return intervals
