"""Scan harness and command line interface.

Drives the simulation engines over a range of pulse periods (expressed as
hbar_eff, as a detuning from resonance, or directly in microseconds),
averages realizations per point, and writes plot-ready CSV files with a
JSON metadata sidecar.  All randomness is derived from one master seed via
per-(point, level) sequence spawning, so results are byte-identical no
matter how many workers run the scan or in which order points finish.

Subcommands: scan (energy curves), portrait (map phase-space point
clouds), predict (closed-form diffusion rates), extract-k (invert a
measured resonance peak to the kick strength).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import IO, Sequence

import numpy as np

from . import __version__
from .core import ScaledParams, hbar_from_period
from .epsmap import EpsParams, classical_map_energy, eps_energy, phase_portrait
from .noise import AMPLITUDE_LEVEL_MAX, PERIOD_LEVEL_MAX, NoiseConfig
from .qkr import DEFAULT_CUTOFF, CutoffError, EnsembleSpec, ensemble_energy
from .theory import diffusion_rate, diffusion_rate_with_noise, kick_strength_from_energy

log = logging.getLogger("aokr")

TWO_PI = 2.0 * math.pi

ENGINES = ("quantum", "eps-classical", "theory")
ABSCISSAS = ("hbar", "epsilon", "period-us")
NOISE_KINDS = ("amplitude", "period")

DEFAULT_REALIZATIONS = 12
DEFAULT_REALIZATIONS_NOISELESS = 3


class ConfigError(ValueError):
    """A scan configuration violated an invariant; message names the field."""


@dataclass(frozen=True)
class ScanSpec:
    """One scan: engine, abscissa range, noise levels, ensemble knobs."""

    engine: str
    abscissa: str
    lo: float
    hi: float
    step: float
    kick_ratio: float
    levels: tuple[float, ...] = (0.0,)
    noise: str = "amplitude"
    kicks: int = 20
    atoms: int = 1000
    realizations: int | None = None  # None: 12 per level, 3 at level 0
    seed: int = 0
    sigma_p: float = 2.5
    beta_mode: str = "thermal"
    beta_fixed: float = 0.0
    kick_spread: float = 0.0
    p_max: float | None = None
    cutoff: int = DEFAULT_CUTOFF
    se_probability: float = 0.0
    resonance_order: int = 1

    def __post_init__(self) -> None:
        if self.engine not in ENGINES:
            raise ConfigError(f"engine = {self.engine!r} not one of {ENGINES}")
        if self.abscissa not in ABSCISSAS:
            raise ConfigError(f"abscissa = {self.abscissa!r} not one of {ABSCISSAS}")
        if self.noise not in NOISE_KINDS:
            raise ConfigError(f"noise = {self.noise!r} not one of {NOISE_KINDS}")
        if not self.lo < self.hi:
            raise ConfigError(f"range requires lo < hi, got lo = {self.lo}, hi = {self.hi}")
        if self.step <= 0.0:
            raise ConfigError(f"step must be positive, got {self.step}")
        if len(self.levels) == 0:
            raise ConfigError("levels must not be empty")
        bound = AMPLITUDE_LEVEL_MAX if self.noise == "amplitude" else PERIOD_LEVEL_MAX
        for i, level in enumerate(self.levels):
            if self.noise == "amplitude" and not 0.0 <= level <= bound:
                raise ConfigError(
                    f"levels[{i}] = {level} outside amplitude-noise bounds [0, {bound}]"
                )
            if self.noise == "period" and not 0.0 <= level < bound:
                raise ConfigError(
                    f"levels[{i}] = {level} outside period-noise bounds [0, {bound})"
                )
        if self.kick_ratio < 0.0:
            raise ConfigError(f"kick_ratio must be >= 0, got {self.kick_ratio}")
        if self.kicks < 0:
            raise ConfigError(f"kicks must be >= 0, got {self.kicks}")
        if self.atoms < 1:
            raise ConfigError(f"atoms must be >= 1, got {self.atoms}")
        if self.realizations is not None and self.realizations < 1:
            raise ConfigError(f"realizations must be >= 1, got {self.realizations}")
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")
        if self.resonance_order < 1:
            raise ConfigError(f"resonance_order must be >= 1, got {self.resonance_order}")
        if not 0.0 <= self.se_probability <= 1.0:
            raise ConfigError(
                f"se_probability = {self.se_probability} outside [0, 1]"
            )
        if self.engine in ("eps-classical", "theory"):
            if self.noise == "period":
                raise ConfigError(
                    f"engine {self.engine!r} supports amplitude noise only"
                )
            if self.se_probability != 0.0:
                raise ConfigError(
                    f"engine {self.engine!r} does not model spontaneous emission"
                )
        self.ensemble()  # fail on bad ensemble knobs now, not mid-scan

    def points(self) -> np.ndarray:
        """Abscissa grid lo, lo+step, .. capped at hi (inclusive up to rounding)."""
        count = int(math.floor((self.hi - self.lo) / self.step + 1e-9)) + 1
        return self.lo + self.step * np.arange(count)

    def hbar_of(self, point: float) -> float:
        if self.abscissa == "hbar":
            return float(point)
        if self.abscissa == "epsilon":
            return TWO_PI * self.resonance_order + float(point)
        return hbar_from_period(float(point) * 1e-6)

    def realizations_at(self, level: float) -> int:
        if self.realizations is not None:
            return self.realizations
        return DEFAULT_REALIZATIONS_NOISELESS if level == 0.0 else DEFAULT_REALIZATIONS

    def ensemble(self) -> EnsembleSpec:
        try:
            return EnsembleSpec(
                n_atoms=self.atoms,
                sigma_p=self.sigma_p,
                beta_mode=self.beta_mode,
                beta_fixed=self.beta_fixed,
                kick_spread=self.kick_spread,
                p_max=self.p_max,
                cutoff=self.cutoff,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


_SCAN_KEYS = frozenset(ScanSpec.__dataclass_fields__)


def _reject_duplicates(pairs: list[tuple[str, object]]) -> dict:
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise ConfigError(f"duplicate key {key!r} in configuration")
        seen[key] = value
    return seen


def load_config(path: str, overrides: dict | None = None) -> ScanSpec:
    """Parse a strict JSON scan configuration; unknown keys are errors."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh, object_pairs_hook=_reject_duplicates)
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path!r}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"configuration root must be an object, got {type(raw).__name__}")
    return build_spec(raw, overrides)


def build_spec(raw: dict, overrides: dict | None = None) -> ScanSpec:
    """Merge a raw config dict with command-line overrides into a ScanSpec."""
    merged = dict(raw)
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    unknown = set(merged) - _SCAN_KEYS
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    missing = [
        key
        for key in ("engine", "abscissa", "lo", "hi", "step", "kick_ratio")
        if key not in merged
    ]
    if missing:
        raise ConfigError(f"missing required configuration keys: {missing}")
    if "levels" in merged:
        levels = merged["levels"]
        if not isinstance(levels, (list, tuple)):
            raise ConfigError(f"levels must be a list, got {type(levels).__name__}")
        merged["levels"] = tuple(float(level) for level in levels)
    try:
        return ScanSpec(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# scan execution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnergyCurve:
    """Scan result: per-level energy (or rate) arrays over the abscissa."""

    abscissa_name: str
    points: np.ndarray
    hbar_values: np.ndarray
    levels: tuple[float, ...]
    energies: np.ndarray  # (levels, points)
    sems: np.ndarray
    classical_rates: np.ndarray | None  # theory engine only
    config: dict
    point_seeds: list[list[int]]  # [level][point]

    def _columns(self) -> list[str]:
        cols = [self.abscissa_name.replace("-", "_")]
        if self.abscissa_name != "hbar":
            cols.append("hbar")
        cols.append("level")
        if self.classical_rates is None:
            cols += ["energy", "sem"]
        else:
            cols += ["d_classical", "d_quantum"]
        return cols

    def to_csv(self, out: IO[str]) -> None:
        out.write(f"# meta: {json.dumps(self.config, sort_keys=True)}\n")
        out.write(",".join(self._columns()) + "\n")
        for li, level in enumerate(self.levels):
            for pi, point in enumerate(self.points):
                row = [repr(float(point))]
                if self.abscissa_name != "hbar":
                    row.append(repr(float(self.hbar_values[pi])))
                row.append(repr(float(level)))
                if self.classical_rates is None:
                    row += [repr(float(self.energies[li, pi])), repr(float(self.sems[li, pi]))]
                else:
                    row += [
                        repr(float(self.classical_rates[li, pi])),
                        repr(float(self.energies[li, pi])),
                    ]
                out.write(",".join(row) + "\n")

    def to_json(self, out: IO[str]) -> None:
        payload = {
            "config": self.config,
            "abscissa": self.abscissa_name,
            "points": [float(p) for p in self.points],
            "hbar": [float(h) for h in self.hbar_values],
            "levels": list(self.levels),
            "energies": [[float(e) for e in row] for row in self.energies],
            "sems": [[float(s) for s in row] for row in self.sems],
            "point_seeds": self.point_seeds,
        }
        if self.classical_rates is not None:
            payload["d_classical"] = [[float(d) for d in row] for row in self.classical_rates]
            payload["d_quantum"] = payload.pop("energies")
            payload.pop("sems")
        json.dump(payload, out, sort_keys=True, indent=2)
        out.write("\n")


def _point_seed(master_seed: int, point_index: int, level_index: int) -> int:
    seq = np.random.SeedSequence(master_seed, spawn_key=(point_index, level_index))
    return int(seq.generate_state(1, np.uint64)[0])


def _noise_config(spec: ScanSpec, level: float, subseed: int) -> NoiseConfig:
    return NoiseConfig(
        amplitude_level=level if spec.noise == "amplitude" else 0.0,
        period_level=level if spec.noise == "period" else 0.0,
        se_probability=spec.se_probability,
        master_seed=subseed,
    )


def _scan_task(spec: ScanSpec, point: float, level: float, subseed: int) -> tuple[float, float]:
    """Energy and s.e.m. for one (abscissa point, noise level) cell."""
    hbar = spec.hbar_of(point)
    cfg = _noise_config(spec, level, subseed)
    n_real = spec.realizations_at(level)
    if spec.engine == "quantum":
        params = ScaledParams(
            hbar_eff=hbar, kick_strength=spec.kick_ratio * hbar, kick_count=spec.kicks
        )
        return ensemble_energy(spec.ensemble(), params, cfg, n_real)
    p = EpsParams(
        epsilon=hbar - TWO_PI * spec.resonance_order,
        kick_ratio=spec.kick_ratio,
        resonance_order=spec.resonance_order,
    )
    return eps_energy(p, spec.kicks, spec.ensemble(), cfg, n_real)


def run_scan(spec: ScanSpec, workers: int = 1) -> EnergyCurve:
    """Execute the scan; deterministic for a given spec regardless of workers."""
    points = spec.points()
    hbars = np.array([spec.hbar_of(p) for p in points])
    levels = spec.levels
    seeds = [
        [_point_seed(spec.seed, pi, li) for pi in range(len(points))]
        for li in range(len(levels))
    ]
    config = dict(asdict(spec), version=__version__)
    config["levels"] = list(spec.levels)

    energies = np.zeros((len(levels), len(points)))
    sems = np.zeros_like(energies)

    if spec.engine == "theory":
        rates = np.zeros_like(energies)
        for li, level in enumerate(levels):
            for pi, hbar in enumerate(hbars):
                kappa = spec.kick_ratio * hbar
                if level == 0.0:
                    rates[li, pi] = diffusion_rate(kappa, hbar, "classical")
                    energies[li, pi] = diffusion_rate(kappa, hbar, "quantum")
                else:
                    rates[li, pi] = diffusion_rate_with_noise(kappa, hbar, level, "classical")
                    energies[li, pi] = diffusion_rate_with_noise(kappa, hbar, level, "quantum")
        return EnergyCurve(
            abscissa_name=spec.abscissa,
            points=points,
            hbar_values=hbars,
            levels=levels,
            energies=energies,
            sems=sems,
            classical_rates=rates,
            config=config,
            point_seeds=seeds,
        )

    tasks = [(pi, li) for li in range(len(levels)) for pi in range(len(points))]
    log.info(
        "scan: engine=%s, %d points x %d levels, %d workers",
        spec.engine, len(points), len(levels), workers,
    )
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(
                    lambda cell: _scan_task(
                        spec, float(points[cell[0]]), levels[cell[1]], seeds[cell[1]][cell[0]]
                    ),
                    tasks,
                )
            )
    else:
        results = [
            _scan_task(spec, float(points[pi]), levels[li], seeds[li][pi])
            for pi, li in tasks
        ]
    for (pi, li), (energy, sem) in zip(tasks, results):
        energies[li, pi] = energy
        sems[li, pi] = sem
    return EnergyCurve(
        abscissa_name=spec.abscissa,
        points=points,
        hbar_values=hbars,
        levels=levels,
        energies=energies,
        sems=sems,
        classical_rates=None,
        config=config,
        point_seeds=seeds,
    )


def run_portrait(
    epsilon: float,
    kick_ratio: float,
    level: float,
    n_phi: int,
    n_rho: int,
    n_iters: int,
    seed: int,
    out: IO[str],
) -> None:
    """Write a phase-portrait point cloud as two-column CSV."""
    p = EpsParams(epsilon=epsilon, kick_ratio=kick_ratio)
    cfg = NoiseConfig(amplitude_level=level, master_seed=seed)
    points = phase_portrait(p, n_phi=n_phi, n_rho=n_rho, n_iters=n_iters, cfg=cfg)
    meta = {
        "epsilon": epsilon,
        "kick_ratio": kick_ratio,
        "amplitude_level": level,
        "grid": [n_phi, n_rho],
        "iters": n_iters,
        "seed": seed,
        "version": __version__,
    }
    out.write(f"# meta: {json.dumps(meta, sort_keys=True)}\n")
    out.write("phi,rho\n")
    for phi, rho in points:
        out.write(f"{float(phi)!r},{float(rho)!r}\n")


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; remap to 1 (validation)."""

    def error(self, message: str):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="aokr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="energy curve over an abscissa range")
    scan.add_argument("--config", help="JSON configuration file (flags override it)")
    scan.add_argument("--engine", choices=ENGINES)
    scan.add_argument("--abscissa", choices=ABSCISSAS)
    scan.add_argument("--lo", type=float)
    scan.add_argument("--hi", type=float)
    scan.add_argument("--step", type=float)
    scan.add_argument("--kick-ratio", dest="kick_ratio", type=float)
    scan.add_argument("--noise", choices=NOISE_KINDS)
    scan.add_argument("--levels", type=float, nargs="+")
    scan.add_argument("--kicks", type=int)
    scan.add_argument("--atoms", type=int)
    scan.add_argument("--realizations", type=int)
    scan.add_argument("--seed", type=int)
    scan.add_argument("--sigma-p", dest="sigma_p", type=float)
    scan.add_argument("--beta-mode", dest="beta_mode", choices=("thermal", "uniform", "fixed"))
    scan.add_argument("--beta-fixed", dest="beta_fixed", type=float)
    scan.add_argument("--kick-spread", dest="kick_spread", type=float)
    scan.add_argument("--p-max", dest="p_max", type=float)
    scan.add_argument("--cutoff", type=int)
    scan.add_argument("--se-probability", dest="se_probability", type=float)
    scan.add_argument("--resonance-order", dest="resonance_order", type=int)
    scan.add_argument("--workers", type=int, default=1)
    scan.add_argument("--out", required=True, help="CSV output path ('-' for stdout)")
    scan.add_argument("--json", dest="json_path", help="JSON sidecar path")

    portrait = sub.add_parser("portrait", help="map phase-space point cloud")
    portrait.add_argument("--epsilon", type=float, required=True)
    portrait.add_argument("--kick-ratio", dest="kick_ratio", type=float, required=True)
    portrait.add_argument("--level", type=float, default=0.0)
    portrait.add_argument("--grid", default="16x16", help="initial grid, e.g. 16x16")
    portrait.add_argument("--iters", type=int, default=128)
    portrait.add_argument("--seed", type=int, default=0)
    portrait.add_argument("--out", required=True, help="CSV output path ('-' for stdout)")

    predict = sub.add_parser("predict", help="closed-form diffusion rates")
    predict.add_argument("--kick-ratio", dest="kick_ratio", type=float, required=True)
    predict.add_argument("--hbar", type=float, required=True)
    predict.add_argument("--level", type=float, default=0.0)

    extract = sub.add_parser("extract-k", help="kick ratio from a measured peak energy")
    extract.add_argument("--energy", type=float, required=True)
    extract.add_argument("--kicks", type=int, required=True)
    extract.add_argument(
        "--mode",
        choices=("quasilinear", "resonant", "resonant-max-noise"),
        default="quasilinear",
    )

    return parser


_SCAN_OVERRIDE_KEYS = (
    "engine", "abscissa", "lo", "hi", "step", "kick_ratio", "noise", "levels",
    "kicks", "atoms", "realizations", "seed", "sigma_p", "beta_mode",
    "beta_fixed", "kick_spread", "p_max", "cutoff", "se_probability",
    "resonance_order",
)


def _cmd_scan(args: argparse.Namespace) -> int:
    overrides = {key: getattr(args, key) for key in _SCAN_OVERRIDE_KEYS}
    if overrides.get("levels") is not None:
        overrides["levels"] = tuple(overrides["levels"])
    if args.config:
        spec = load_config(args.config, overrides)
    else:
        spec = build_spec({}, overrides)
    if args.workers < 1:
        raise ConfigError(f"workers must be >= 1, got {args.workers}")
    curve = run_scan(spec, workers=args.workers)
    if args.out == "-":
        curve.to_csv(sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            curve.to_csv(fh)
        log.info("wrote %s", args.out)
    if args.json_path:
        with open(args.json_path, "w", encoding="utf-8") as fh:
            curve.to_json(fh)
        log.info("wrote %s", args.json_path)
    return 0


def _cmd_portrait(args: argparse.Namespace) -> int:
    try:
        n_phi, n_rho = (int(part) for part in args.grid.lower().split("x"))
    except ValueError as exc:
        raise ConfigError(f"grid must look like 16x16, got {args.grid!r}") from exc
    if args.out == "-":
        run_portrait(
            args.epsilon, args.kick_ratio, args.level, n_phi, n_rho,
            args.iters, args.seed, sys.stdout,
        )
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            run_portrait(
                args.epsilon, args.kick_ratio, args.level, n_phi, n_rho,
                args.iters, args.seed, fh,
            )
        log.info("wrote %s", args.out)
    return 0


def _cmd_predict(args: argparse.Namespace) -> int:
    kappa = args.kick_ratio * args.hbar
    if args.level == 0.0:
        dc = diffusion_rate(kappa, args.hbar, "classical")
        dq = diffusion_rate(kappa, args.hbar, "quantum")
    else:
        dc = diffusion_rate_with_noise(kappa, args.hbar, args.level, "classical")
        dq = diffusion_rate_with_noise(kappa, args.hbar, args.level, "quantum")
    sys.stdout.write("hbar,level,d_classical,d_quantum\n")
    sys.stdout.write(f"{args.hbar!r},{args.level!r},{dc!r},{dq!r}\n")
    return 0


def _cmd_extract_k(args: argparse.Namespace) -> int:
    ratio = kick_strength_from_energy(args.energy, args.kicks, args.mode)
    sys.stdout.write(f"{ratio!r}\n")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    parser = _build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help/--version or flag errors
            return int(exc.code or 0)
        if args.command == "scan":
            return _cmd_scan(args)
        if args.command == "portrait":
            return _cmd_portrait(args)
        if args.command == "predict":
            return _cmd_predict(args)
        return _cmd_extract_k(args)
    except (ConfigError, ValueError) as exc:
        log.error("configuration error: %s", exc)
        return 1
    except (CutoffError, RuntimeError, OSError) as exc:
        log.error("runtime error: %s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
