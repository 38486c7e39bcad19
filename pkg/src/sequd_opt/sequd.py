"""Sequential uniform-design optimization (coarse-to-fine space halving).

Stage 1 evaluates a constructed uniform design over the unit cube.  Each
later stage halves the search box around the incumbent while doubling the
grid granularity, shifts the box back inside [0,1] if needed, snaps already
evaluated points onto the new grid as a fixed block, and augments the
remaining runs with AugUD.  SeqRand is the ablation that fills each stage
with uniform random points instead.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .augud import AugudConfig, construct_ud, run_augud
from .design import UTypeDesign
from .space import SearchSpace

__all__ = [
    "SubspaceGrid",
    "Trial",
    "History",
    "SequdConfig",
    "default_stage_size",
    "zoom_levels",
    "shift_into_bounds",
    "snap_existing",
    "run_sequd",
    "run_seqrand",
]

# Stages beyond this have grid spacing below double precision resolution.
_MAX_STAGE = 64


def default_stage_size(s: int) -> tuple[int, int]:
    """Runs and levels per stage: 15 for s <= 5, 25 for higher dimensions."""
    if s < 1:
        raise ValueError("dimension must be positive")
    return (15, 15) if s <= 5 else (25, 25)


def zoom_levels(x_star: float, j: int, q: int) -> np.ndarray:
    """Level values of the stage-j subspace grid for one dimension.

    Spacing is 1/(2^(j-1) q); the incumbent coordinate is the level at
    index (q-1)//2 (the middle level for odd q, just left of middle for
    even q), which reproduces the odd/even zoom bounds exactly.
    """
    if j < 2:
        raise ValueError("zooming starts at stage 2")
    spacing = 1.0 / (2 ** (j - 1) * q)
    center = (q - 1) // 2
    return x_star + (np.arange(q) - center) * spacing


def shift_into_bounds(levels: np.ndarray) -> np.ndarray:
    """Translate an out-of-bounds grid back inside [0,1]; spacing unchanged."""
    span = levels[-1] - levels[0]
    if span > 1.0 + 1e-12:
        raise ValueError("grid span exceeds the unit interval")
    if levels[0] < 0.0:
        return levels - levels[0]
    if levels[-1] > 1.0:
        return levels - (levels[-1] - 1.0)
    return levels


@dataclass(frozen=True)
class SubspaceGrid:
    """Per-dimension level sets at one stage; levels has shape (s, q)."""

    stage: int
    levels: np.ndarray

    @property
    def s(self) -> int:
        return self.levels.shape[0]

    @property
    def q(self) -> int:
        return self.levels.shape[1]

    @property
    def spacing(self) -> float:
        return 1.0 / (2 ** (self.stage - 1) * self.q)

    @classmethod
    def initial(cls, s: int, q: int) -> "SubspaceGrid":
        base = (2.0 * np.arange(1, q + 1) - 1.0) / (2.0 * q)
        return cls(stage=1, levels=np.tile(base, (s, 1)))

    @classmethod
    def around(cls, x_star: np.ndarray, j: int, q: int) -> "SubspaceGrid":
        rows = [shift_into_bounds(zoom_levels(float(c), j, q)) for c in x_star]
        return cls(stage=j, levels=np.array(rows))

    def unit_points(self, levels: np.ndarray) -> np.ndarray:
        """Map integer levels (1..q) to unit coordinates on this grid."""
        idx = np.asarray(levels, dtype=np.int64) - 1
        return self.levels[np.arange(self.s)[None, :], idx]

    def box(self) -> tuple[np.ndarray, np.ndarray]:
        """Closed axis-aligned box covered by the grid (half a cell beyond
        the extreme levels)."""
        half = self.spacing / 2.0
        return self.levels[:, 0] - half, self.levels[:, -1] + half

    def snap(self, points: np.ndarray) -> np.ndarray:
        """Nearest-level index (1-based) per coordinate; ties to the lower."""
        rel = (points - self.levels[None, :, 0]) / self.spacing
        idx = np.ceil(rel - 0.5).astype(np.int64)
        return np.clip(idx, 0, self.q - 1) + 1


@dataclass(frozen=True)
class Trial:
    index: int
    stage: int
    unit: tuple[float, ...]
    config: dict
    value: float
    status: str  # "ok" | "failed"


class History:
    """Append-only trial log; incumbent maximizes the internal score."""

    def __init__(self, direction: str = "maximize"):
        if direction not in ("maximize", "minimize"):
            raise ValueError("direction must be maximize or minimize")
        self.direction = direction
        self.trials: list[Trial] = []

    def __len__(self) -> int:
        return len(self.trials)

    def append(self, trial: Trial) -> None:
        if self.trials and trial.index <= self.trials[-1].index:
            raise ValueError("trial indices must be strictly increasing")
        self.trials.append(trial)

    def _score(self, t: Trial) -> float:
        if t.status != "ok":
            return -math.inf
        return t.value if self.direction == "maximize" else -t.value

    def incumbent(self) -> Trial:
        """Best successful trial; earliest wins ties."""
        best = None
        for t in self.trials:
            if best is None or self._score(t) > self._score(best):
                best = t
        if best is None:
            raise ValueError("history is empty")
        return best

    def best_value(self) -> float:
        return self.incumbent().value

    def unit_matrix(self) -> np.ndarray:
        return np.array([t.unit for t in self.trials], dtype=np.float64)


@dataclass(frozen=True)
class SequdConfig:
    t_max: int
    n_per_stage: int | None = None
    q_levels: int | None = None
    augud: AugudConfig = field(default_factory=AugudConfig)
    seed: int | None = None
    parallelism: int = 1
    direction: str = "maximize"
    top_k: int = 1  # multiple-shooting centers per stage; >1 is experimental

    def resolve_stage(self, s: int) -> tuple[int, int]:
        n = self.n_per_stage or default_stage_size(s)[0]
        q = self.q_levels or default_stage_size(s)[1]
        if n % q != 0:
            raise ValueError(f"n_per_stage={n} must be divisible by q_levels={q}")
        if self.t_max < n:
            raise ValueError("t_max must cover at least one full stage")
        return n, q


def snap_existing(history: History, grid: SubspaceGrid) -> tuple[UTypeDesign, int]:
    """Existing evaluated points inside the grid box, snapped to grid levels.

    Returns the snapped level block (generally unbalanced) and its size.
    """
    pts = history.unit_matrix()
    if pts.size == 0:
        return UTypeDesign(np.empty((0, grid.s), dtype=np.int64), grid.q,
                           check_balance=False), 0
    lo, hi = grid.box()
    inside = ((pts >= lo[None, :]) & (pts <= hi[None, :])).all(axis=1)
    picked = pts[inside]
    levels = grid.snap(picked)
    return UTypeDesign(levels, grid.q, check_balance=False), levels.shape[0]


def _evaluate_batch(objective, configs, parallelism: int) -> list[tuple[float, str]]:
    """Evaluate configs in a fixed order; results keep submission order so
    parallelism never changes recorded content."""

    def one(cfg):
        try:
            v = float(objective(cfg))
        except Exception:
            return math.nan, "failed"
        if not math.isfinite(v):
            return math.nan, "failed"
        return v, "ok"

    if parallelism <= 1 or len(configs) <= 1:
        return [one(c) for c in configs]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(one, configs))


def _failed_value(direction: str) -> float:
    return -math.inf if direction == "maximize" else math.inf


def _append_batch(history, space, grid_stage, unit_pts, results) -> None:
    direction = history.direction
    for x, (v, status) in zip(unit_pts, results):
        value = v if status == "ok" else _failed_value(direction)
        history.append(
            Trial(
                index=len(history) + 1,
                stage=grid_stage,
                unit=tuple(float(c) for c in x),
                config=space.decode(x),
                value=value,
                status=status,
            )
        )


def _run_stage1(space, objective, cfg, n, q, seed_seq, history) -> None:
    grid = SubspaceGrid.initial(space.dimension, q)
    augud_cfg = replace(cfg.augud, seed=int(seed_seq.generate_state(1)[0]))
    design = construct_ud(n, space.dimension, q, augud_cfg).design
    unit_pts = grid.unit_points(design.levels)
    configs = [space.decode(x) for x in unit_pts]
    results = _evaluate_batch(objective, configs, cfg.parallelism)
    _append_batch(history, space, 1, unit_pts, results)


def run_sequd(space: SearchSpace, objective, cfg: SequdConfig) -> History:
    """Run the full sequential uniform-design optimization loop.

    ``objective`` maps a decoded configuration dict to a float; failures
    (exceptions or non-finite values) are recorded as failed trials and
    consume budget.  Deterministic given ``cfg.seed`` and a deterministic
    objective.
    """
    s = space.dimension
    n, q = cfg.resolve_stage(s)
    master = np.random.SeedSequence(cfg.seed)
    stage_seeds = master.spawn(_MAX_STAGE + 1)
    history = History(cfg.direction)

    _run_stage1(space, objective, cfg, n, q, stage_seeds[0], history)

    total = len(history)
    j = 2
    while j <= _MAX_STAGE:
        centers = _top_centers(history, cfg.top_k)
        advanced = False
        for ci, center in enumerate(centers):
            grid = SubspaceGrid.around(center, j, q)
            fixed, n_e = snap_existing(history, grid)
            n_j = max(0, n - n_e)
            if total + n_j > cfg.t_max:
                return history
            if n_j == 0:
                continue  # stage fully covered by existing points; keep zooming
            seed = int(stage_seeds[j].generate_state(ci + 1)[ci])
            augud_cfg = replace(cfg.augud, seed=seed)
            free = run_augud(fixed, n_j, s, q, augud_cfg, relaxed=True).design
            unit_pts = grid.unit_points(free.levels)
            configs = [space.decode(np.clip(x, 0.0, 1.0)) for x in unit_pts]
            results = _evaluate_batch(objective, configs, cfg.parallelism)
            _append_batch(history, space, j, unit_pts, results)
            total += n_j
            advanced = True
        j += 1
        if not advanced and total >= cfg.t_max:
            return history
    return history


def run_seqrand(space: SearchSpace, objective, cfg: SequdConfig) -> History:
    """Space-halving with n uniform random points per stage (no uniformity
    optimization, no reuse of existing points)."""
    s = space.dimension
    n, q = cfg.resolve_stage(s)
    master = np.random.SeedSequence(cfg.seed)
    rng = np.random.default_rng(master)
    history = History(cfg.direction)

    # Stage 1: random points over the full cube.
    unit_pts = rng.random((n, s))
    configs = [space.decode(x) for x in unit_pts]
    results = _evaluate_batch(objective, configs, cfg.parallelism)
    _append_batch(history, space, 1, unit_pts, results)

    total = n
    j = 2
    while total + n <= cfg.t_max and j <= _MAX_STAGE:
        center = np.array(history.incumbent().unit)
        grid = SubspaceGrid.around(center, j, q)
        lo, hi = grid.box()
        lo = np.clip(lo, 0.0, 1.0)
        hi = np.clip(hi, 0.0, 1.0)
        unit_pts = lo + rng.random((n, s)) * (hi - lo)
        configs = [space.decode(x) for x in unit_pts]
        results = _evaluate_batch(objective, configs, cfg.parallelism)
        _append_batch(history, space, j, unit_pts, results)
        total += n
        j += 1
    return history


def _top_centers(history: History, k: int) -> list[np.ndarray]:
    if k <= 1:
        return [np.array(history.incumbent().unit)]
    ranked = sorted(
        (t for t in history.trials if t.status == "ok"),
        key=lambda t: (-history._score(t), t.index),
    )
    out = []
    for t in ranked:
        x = np.array(t.unit)
        if all(np.any(np.abs(x - c) > 1e-9) for c in out):
            out.append(x)
        if len(out) == k:
            break
    return out or [np.array(history.incumbent().unit)]
