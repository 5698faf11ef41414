"""Seeded Monte Carlo recovery experiments.

Instances are generated from a counter-based stream keyed by
``(seed, trial_index)``, so a batch is reproducible under any parallel
partition of the trial range: worker count changes the schedule, never the
data. Aggregation is a plain fold in trial-index order.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import BlockedMatrix, BlockLayout, BlockSignal, SensingProblem, block_support
from .errors import BompError
from .io import load_layout, load_matrix, load_vector
from .solver import FIXED_ITERATIONS, StoppingRule, run_bomp

GAUSSIAN = "gaussian"
FROM_FILE = "from_file"

_CONFIG_KEYS = {
    "m", "M", "d", "K",
    "noise_norm", "min_block_norm", "trials", "seed",
    "matrix_ensemble", "stopping",
    "matrix_path", "layout_path", "observation_path", "truth_path",
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Batch description. JSON config files mirror these field names.

    With ``matrix_ensemble="from_file"`` every trial runs on the single
    instance loaded from the four path fields; the layout and truth still
    have to agree with (m, M, d, K). ``stopping`` left as None means a
    fixed budget of exactly K iterations.
    """

    m: int
    M: int
    d: int
    K: int
    noise_norm: float = 0.0
    min_block_norm: float = 1.0
    trials: int = 100
    seed: int = 0
    matrix_ensemble: str = GAUSSIAN
    stopping: StoppingRule | None = None
    matrix_path: str | None = None
    layout_path: str | None = None
    observation_path: str | None = None
    truth_path: str | None = None

    def __post_init__(self):
        for name in ("m", "M", "d", "K", "trials"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if self.K > self.M:
            raise ValueError(f"K={self.K} exceeds the number of blocks M={self.M}")
        if self.K * self.d > self.m:
            raise ValueError(
                f"K*d={self.K * self.d} exceeds m={self.m}; least squares on the "
                "support would be underdetermined"
            )
        if self.noise_norm < 0.0:
            raise ValueError("noise_norm must be nonnegative")
        if self.min_block_norm <= 0.0:
            raise ValueError("min_block_norm must be positive")
        if self.matrix_ensemble not in (GAUSSIAN, FROM_FILE):
            raise ValueError(
                f"unknown matrix_ensemble {self.matrix_ensemble!r}; "
                f"expected {GAUSSIAN!r} or {FROM_FILE!r}"
            )
        if self.matrix_ensemble == FROM_FILE:
            for name in ("matrix_path", "layout_path", "observation_path", "truth_path"):
                if getattr(self, name) is None:
                    raise ValueError(f"matrix_ensemble={FROM_FILE!r} requires {name}")
        if self.stopping is None:
            object.__setattr__(
                self,
                "stopping",
                StoppingRule(mode=FIXED_ITERATIONS, max_iterations=self.K),
            )

    @property
    def layout(self) -> BlockLayout:
        return BlockLayout(self.M, self.d)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        missing = {"m", "M", "d", "K"} - set(data)
        if missing:
            raise ValueError(f"config is missing required keys: {sorted(missing)}")
        data = dict(data)
        stopping = data.get("stopping")
        if isinstance(stopping, dict):
            data["stopping"] = StoppingRule(**stopping)
        return cls(**data)

    @classmethod
    def load(cls, path, overrides: dict | None = None) -> "ExperimentConfig":
        """Read a JSON config file; entries in ``overrides`` win."""
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError(f"{path}: config must be a JSON object")
        data.update(overrides or {})
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        out = {
            "m": self.m, "M": self.M, "d": self.d, "K": self.K,
            "noise_norm": self.noise_norm,
            "min_block_norm": self.min_block_norm,
            "trials": self.trials, "seed": self.seed,
            "matrix_ensemble": self.matrix_ensemble,
            "stopping": {
                "mode": self.stopping.mode,
                "epsilon": self.stopping.epsilon,
                "max_iterations": self.stopping.max_iterations,
            },
        }
        for name in ("matrix_path", "layout_path", "observation_path", "truth_path"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out


def _unit_direction(rng: np.random.Generator, d: int) -> np.ndarray:
    while True:
        g = rng.normal(size=d)
        norm = np.linalg.norm(g)
        if norm > 0.0:
            return g / norm


def _load_instance(cfg: ExperimentConfig):
    rows, layout = load_layout(cfg.layout_path)
    if (rows, layout.num_blocks, layout.block_width) != (cfg.m, cfg.M, cfg.d):
        raise ValueError(
            f"layout file describes m={rows}, M={layout.num_blocks}, "
            f"d={layout.block_width}; config says m={cfg.m}, M={cfg.M}, d={cfg.d}"
        )
    A = load_matrix(cfg.matrix_path, cfg.layout_path)
    y = load_vector(cfg.observation_path)
    truth = BlockSignal(layout, load_vector(cfg.truth_path))
    support = block_support(truth)
    if len(support) != cfg.K:
        raise ValueError(
            f"truth file has {len(support)} active blocks; config says K={cfg.K}"
        )
    problem = SensingProblem(matrix=A, observation=y, noise_bound=cfg.noise_norm)
    return problem, truth


def generate_instance(cfg: ExperimentConfig, trial_index: int):
    """Build the instance for one trial; returns (problem, truth).

    Gaussian ensemble: i.i.d. matrix entries of variance 1/m; uniform random
    size-K block support; supported blocks are random directions with norms
    at least min_block_norm and the smallest norm equal to it exactly; noise
    rescaled to the exact norm noise_norm. Everything is a pure function of
    (seed, trial_index).
    """
    if trial_index < 0:
        raise ValueError("trial_index must be nonnegative")
    if cfg.matrix_ensemble == FROM_FILE:
        return _load_instance(cfg)

    rng = np.random.default_rng((cfg.seed, trial_index))
    layout = cfg.layout
    A = BlockedMatrix(layout, rng.normal(size=(cfg.m, layout.ambient_dim)) / math.sqrt(cfg.m))

    support = sorted(int(i) for i in rng.choice(cfg.M, size=cfg.K, replace=False) + 1)
    excess = np.abs(rng.normal(size=cfg.K))
    excess[int(np.argmin(excess))] = 0.0
    blocks = {
        i: cfg.min_block_norm * (1.0 + excess[k]) * _unit_direction(rng, cfg.d)
        for k, i in enumerate(support)
    }
    truth = BlockSignal.from_blocks(layout, blocks)

    noise = np.zeros(cfg.m)
    if cfg.noise_norm > 0.0:
        raw = rng.normal(size=cfg.m)
        noise = raw * (cfg.noise_norm / np.linalg.norm(raw))
    y = A.entries @ truth.values + noise
    return SensingProblem(matrix=A, observation=y, noise_bound=cfg.noise_norm), truth


@dataclass(frozen=True)
class TrialRecord:
    seed_offset: int
    recovered: bool
    iterations: int
    error: str | None = None

    def to_dict(self) -> dict:
        out = {
            "seed_offset": self.seed_offset,
            "recovered": self.recovered,
            "iterations": self.iterations,
        }
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass(frozen=True)
class ExperimentResult:
    recovery_rate: float
    avg_iterations: float
    records: tuple

    def to_dict(self) -> dict:
        return {
            "recovery_rate": self.recovery_rate,
            "avg_iterations": self.avg_iterations,
            "records": [record.to_dict() for record in self.records],
        }


def _worker_count(trials: int) -> int:
    raw = os.environ.get("BOMP_THREADS", "0")
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"BOMP_THREADS must be an integer, got {raw!r}") from None
    if cap < 0:
        raise ValueError(f"BOMP_THREADS must be nonnegative, got {cap}")
    workers = os.cpu_count() or 1
    if cap > 0:
        workers = min(workers, cap)
    return max(1, min(workers, trials))


def _run_trial(cfg: ExperimentConfig, trial_index: int, shared=None) -> TrialRecord:
    try:
        problem, truth = shared if shared is not None else generate_instance(cfg, trial_index)
        trace = run_bomp(problem, cfg.stopping)
        recovered = set(trace.chosen_indices) == set(block_support(truth))
        return TrialRecord(trial_index, recovered, trace.iterations_run)
    except (BompError, np.linalg.LinAlgError) as exc:
        return TrialRecord(trial_index, False, 0, error=f"{type(exc).__name__}: {exc}")


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Run the batch; recovered means the chosen index set equals the support.

    Trials run on a thread pool (BOMP_THREADS caps the width, 0 means auto).
    Per-trial solver failures land in the record's error field instead of
    aborting the batch. Output is identical for any worker count.
    """
    # one shared read for the fixed-instance ensemble; file errors are
    # config errors and should abort before the pool spins up
    shared = _load_instance(cfg) if cfg.matrix_ensemble == FROM_FILE else None

    workers = _worker_count(cfg.trials)
    if workers == 1:
        records = [_run_trial(cfg, k, shared) for k in range(cfg.trials)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(
                pool.map(lambda k: _run_trial(cfg, k, shared), range(cfg.trials))
            )

    recovered = sum(record.recovered for record in records)
    avg = sum(record.iterations for record in records) / cfg.trials
    return ExperimentResult(
        recovery_rate=recovered / cfg.trials,
        avg_iterations=avg,
        records=tuple(records),
    )
