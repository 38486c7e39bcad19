"""Experiment orchestration: seeded repetitions, baseline and sequential
methods, trace/summary emission, external subprocess objectives, and method
comparison tables."""

from __future__ import annotations

import csv
import json
import math
import subprocess
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .augud import AugudConfig, construct_ud
from .benchmarks import lookup
from .design import to_unit
from .samplers import sample
from .sequd import History, SequdConfig, Trial, run_seqrand, run_sequd
from .space import SearchSpace

__all__ = [
    "METHODS",
    "ConfigError",
    "ObjectiveProtocolError",
    "ExternalObjectiveSpec",
    "ExperimentConfig",
    "evaluate_external",
    "run_experiment",
    "compare_methods",
]

METHODS = ("sequd", "seqrand", "random", "lhs", "sobol", "grid", "ud")

_CURVE_STEP = 10  # best-so-far curves sampled every ten trials


class ConfigError(ValueError):
    """Invalid experiment configuration."""


class ObjectiveProtocolError(RuntimeError):
    """External objective command violated the stdin/stdout protocol."""


@dataclass(frozen=True)
class ExternalObjectiveSpec:
    """Black-box objective run as a subprocess.

    The command is an argv list (no shell).  Each trial writes one JSON line
    {"params": {...}, "trial": i} to stdin; the last non-empty stdout line
    must parse as a finite float.  Nonzero exit, timeout, or unparseable
    output counts as a failed trial.
    """

    command: tuple[str, ...]
    timeout: float = 60.0

    def __post_init__(self):
        if not self.command:
            raise ConfigError("external objective command must not be empty")


def evaluate_external(spec: ExternalObjectiveSpec, config: dict, trial: int = 0) -> float:
    """Run one external evaluation; raises ObjectiveProtocolError on any
    protocol violation (callers record it as a failed trial)."""
    payload = json.dumps({"params": config, "trial": trial}) + "\n"
    try:
        proc = subprocess.run(
            list(spec.command),
            input=payload,
            capture_output=True,
            text=True,
            timeout=spec.timeout,
        )
    except subprocess.TimeoutExpired as exc:
        raise ObjectiveProtocolError(f"objective timed out after {spec.timeout}s") from exc
    except OSError as exc:
        raise ObjectiveProtocolError(f"objective could not be spawned: {exc}") from exc
    if proc.returncode != 0:
        raise ObjectiveProtocolError(f"objective exited with status {proc.returncode}")
    lines = [ln for ln in proc.stdout.splitlines() if ln.strip()]
    if not lines:
        raise ObjectiveProtocolError("objective produced no output")
    try:
        value = float(lines[-1])
    except ValueError as exc:
        raise ObjectiveProtocolError(
            f"objective output {lines[-1]!r} is not a float"
        ) from exc
    if not math.isfinite(value):
        raise ObjectiveProtocolError(f"objective returned non-finite value {value}")
    return value


@dataclass(frozen=True)
class ExperimentConfig:
    method: str
    objective: str | ExternalObjectiveSpec  # builtin name or external spec
    t_max: int = 100
    space: SearchSpace | None = None  # defaults to the builtin's domain
    direction: str | None = None  # defaults to the builtin's direction
    repetitions: int = 1
    seed: int = 0
    parallelism: int = 1
    n_per_stage: int | None = None
    q_levels: int | None = None
    augud: AugudConfig = field(default_factory=AugudConfig)
    out_dir: str | Path | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.t_max < 1:
            raise ConfigError("t_max must be >= 1")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")


def _resolve(cfg: ExperimentConfig):
    """Returns (space, objective callable over config dicts, direction)."""
    if isinstance(cfg.objective, ExternalObjectiveSpec):
        if cfg.space is None:
            raise ConfigError("external objectives require an explicit space")
        direction = cfg.direction or "maximize"
        spec = cfg.objective

        counter = {"i": 0}

        def objective(config):
            counter["i"] += 1
            return evaluate_external(spec, config, trial=counter["i"])

        return cfg.space, objective, direction

    fn = lookup(cfg.objective)
    space = cfg.space or SearchSpace.from_bounds(fn.domain)
    direction = cfg.direction or fn.direction

    def objective(config):
        return fn([config[name] for name in space.column_names()])

    return space, objective, direction


def _run_nonsequential(cfg, space, objective, direction, seed) -> History:
    s = space.dimension
    if cfg.method == "grid" and s != 2:
        raise ConfigError("grid search is restricted to 2-D spaces")
    if cfg.method == "ud":
        n, q = cfg.t_max, cfg.t_max
        augud_cfg = replace(cfg.augud, seed=seed)
        pts = to_unit(construct_ud(n, s, q, augud_cfg).design).points
    else:
        pts = sample(cfg.method, cfg.t_max, s, seed=seed).points
    history = History(direction)
    for x in pts:
        config = space.decode(x)
        try:
            v = float(objective(config))
            status = "ok" if math.isfinite(v) else "failed"
        except Exception:
            v, status = math.nan, "failed"
        if status == "failed":
            v = -math.inf if direction == "maximize" else math.inf
        history.append(
            Trial(
                index=len(history) + 1,
                stage=1,
                unit=tuple(float(c) for c in x),
                config=config,
                value=v,
                status=status,
            )
        )
    return history


def run_single(cfg: ExperimentConfig, seed: int) -> History:
    """One repetition of the configured method with an explicit seed."""
    space, objective, direction = _resolve(cfg)
    if cfg.method in ("sequd", "seqrand"):
        scfg = SequdConfig(
            t_max=cfg.t_max,
            n_per_stage=cfg.n_per_stage,
            q_levels=cfg.q_levels,
            augud=cfg.augud,
            seed=seed,
            parallelism=cfg.parallelism,
            direction=direction,
        )
        runner = run_sequd if cfg.method == "sequd" else run_seqrand
        return runner(space, objective, scfg)
    return _run_nonsequential(cfg, space, objective, direction, seed)


def _trace_rows(history: History, space: SearchSpace):
    s = space.dimension
    header = (
        ["trial", "stage", "y", "status"]
        + [f"x_{i + 1}" for i in range(s)]
        + space.column_names()
    )
    yield header
    for t in history.trials:
        yield (
            [t.index, t.stage, repr(t.value), t.status]
            + [repr(c) for c in t.unit]
            + [t.config[name] for name in space.column_names()]
        )


def write_trace(history: History, space: SearchSpace, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows(_trace_rows(history, space))


def best_so_far(history: History, step: int = _CURVE_STEP) -> list[tuple[int, float]]:
    sign = 1.0 if history.direction == "maximize" else -1.0
    best = -math.inf
    curve = []
    for t in history.trials:
        if t.status == "ok":
            best = max(best, sign * t.value)
        if t.index % step == 0:
            curve.append((t.index, sign * best if math.isfinite(best) else math.nan))
    return curve


def run_experiment(cfg: ExperimentConfig) -> dict:
    """Run all repetitions; returns the summary dict and, when out_dir is
    set, writes one trace CSV per repetition plus summary.json."""
    space, _, _ = _resolve(cfg)
    out = Path(cfg.out_dir) if cfg.out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)

    start = time.perf_counter()
    rep_best = []
    rep_configs = []
    curves = []
    totals = []
    for r in range(cfg.repetitions):
        seed = cfg.seed + r
        history = run_single(cfg, seed)
        if isinstance(cfg.objective, ExternalObjectiveSpec) and not any(
            t.status == "ok" for t in history.trials
        ):
            raise ObjectiveProtocolError(
                "external objective failed on every trial of repetition "
                f"{r} (seed {seed})"
            )
        inc = history.incumbent()
        rep_best.append(inc.value)
        rep_configs.append(inc.config)
        curves.append(best_so_far(history))
        totals.append(len(history))
        if out is not None:
            write_trace(history, space, out / f"trace_rep{r:03d}.csv")
    elapsed = time.perf_counter() - start

    arr = np.array(rep_best, dtype=np.float64)
    sign = 1.0
    cfg_dir = cfg.direction
    if cfg_dir is None and not isinstance(cfg.objective, ExternalObjectiveSpec):
        cfg_dir = lookup(cfg.objective).direction
    if cfg_dir == "minimize":
        sign = -1.0
    best_rep = int(np.argmax(sign * arr))
    summary = {
        "method": cfg.method,
        "objective": cfg.objective
        if isinstance(cfg.objective, str)
        else list(cfg.objective.command),
        "t_max": cfg.t_max,
        "repetitions": cfg.repetitions,
        "base_seed": cfg.seed,
        "per_repetition_best": rep_best,
        "mean_best": float(arr.mean()),
        "std_best": float(arr.std(ddof=1)) if len(arr) > 1 else 0.0,
        "incumbent_value": rep_best[best_rep],
        "incumbent_config": rep_configs[best_rep],
        "total_trials": totals,
        "curves_every_10": curves,
        "wall_time_seconds": elapsed,
    }
    if out is not None:
        with open(out / "summary.json", "w") as fh:
            json.dump(summary, fh, indent=2, default=str)
    return summary


def compare_methods(cfgs: list[ExperimentConfig]) -> dict:
    """Run >=2 configs sharing objective and budget; rank methods by their
    seed-paired final best values (rank 1 = best)."""
    if len(cfgs) < 2:
        raise ConfigError("compare needs at least two configurations")
    budgets = {c.t_max for c in cfgs}
    if len(budgets) != 1:
        raise ConfigError("compared methods must share the same budget")
    reps = {c.repetitions for c in cfgs}
    if len(reps) != 1:
        raise ConfigError("compared methods must share the repetition count")

    summaries = [run_experiment(c) for c in cfgs]
    per_method = np.array(
        [s["per_repetition_best"] for s in summaries], dtype=np.float64
    )
    sign = -1.0
    first = cfgs[0]
    direction = first.direction
    if direction is None and isinstance(first.objective, str):
        direction = lookup(first.objective).direction
    if direction == "maximize":
        sign = 1.0
    # Rank per seed: 1 = best; ties share the average rank.
    m, r = per_method.shape
    ranks = np.zeros((m, r))
    for col in range(r):
        vals = -sign * per_method[:, col]
        order = np.argsort(vals, kind="stable")
        rank = np.empty(m)
        i = 0
        while i < m:
            jdx = i
            while jdx + 1 < m and vals[order[jdx + 1]] == vals[order[i]]:
                jdx += 1
            rank[order[i : jdx + 1]] = (i + jdx) / 2.0 + 1.0
            i = jdx + 1
        ranks[:, col] = rank
    return {
        "methods": [c.method for c in cfgs],
        "mean_best": [s["mean_best"] for s in summaries],
        "std_best": [s["std_best"] for s in summaries],
        "mean_rank": ranks.mean(axis=1).tolist(),
        "per_seed_best": per_method.tolist(),
        "per_seed_rank": ranks.tolist(),
    }


def comparison_csv(table: dict) -> str:
    lines = ["method,mean_best,std_best,mean_rank"]
    for i, name in enumerate(table["methods"]):
        lines.append(
            f"{name},{table['mean_best'][i]!r},{table['std_best'][i]!r},"
            f"{table['mean_rank'][i]!r}"
        )
    return "\n".join(lines) + "\n"
