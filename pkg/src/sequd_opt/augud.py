"""Augmented uniform design construction by threshold accepting.

Two nested loops: the inner loop cycles over columns, prices a batch of
candidate within-column element exchanges in the free block, and accepts the
best one with probability 1 - min(1, max(0, delta / T)); the outer loop
adapts the threshold T from the acceptance hit ratio.  Plain uniform-design
construction is the special case of an empty fixed block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .design import (
    Cd2Cache,
    DesignError,
    UnitDesign,
    UTypeDesign,
    cd2_combined,
    to_unit,
)

__all__ = [
    "AugudConfig",
    "AugudResult",
    "exchange_budget",
    "accept_probability",
    "init_augmented",
    "run_augud",
    "construct_ud",
]

# Floor for the adaptive threshold; keeps the acceptance ratio well defined
# when the initial discrepancy underflows (e.g. a one-run free block).
_MIN_THRESHOLD = 1e-12


@dataclass(frozen=True)
class AugudConfig:
    gamma: float = 0.005
    eta: float = 0.1
    alpha: float = 0.8
    m_outer: int = 50
    m_inner: int = 100
    m_exchange: int | None = None
    restarts: int = 1
    seed: int | None = None

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ValueError("alpha must be in (0, 1)")
        if not (0.0 <= self.eta <= 1.0):
            raise ValueError("eta must be in [0, 1]")
        if self.gamma <= 0.0:
            raise ValueError("gamma must be positive")
        if self.m_outer < 1 or self.m_inner < 1:
            raise ValueError("loop counts must be >= 1")
        if self.m_exchange is not None and self.m_exchange < 1:
            raise ValueError("m_exchange must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


@dataclass(frozen=True)
class AugudResult:
    design: UTypeDesign
    combined_cd2: float
    iterations: int
    restart_index: int


def exchange_budget(n2: int, q: int) -> int:
    """Per-step candidate exchange count min{50, 0.2 n2^2 (q-1) / (2q)},
    floored but clamped to at least one exchange."""
    if n2 < 2:
        raise ValueError("exchange budget requires n2 >= 2")
    raw = min(50.0, 0.2 * n2 * n2 * (q - 1) / (2.0 * q))
    return max(1, math.floor(raw))


def accept_probability(delta: float, threshold: float) -> float:
    """p = 1 - min(1, max(0, delta/threshold)); improving moves always pass."""
    if threshold <= 0.0:
        raise ValueError("threshold must be positive")
    return 1.0 - min(1.0, max(0.0, delta / threshold))


def _fixed_block(fixed: UTypeDesign | None, s: int, q: int) -> np.ndarray:
    if fixed is None:
        return np.empty((0, s), dtype=np.int64)
    if fixed.s != s:
        raise DesignError(f"fixed block has {fixed.s} factors, expected {s}")
    if fixed.q != q:
        raise DesignError(f"fixed block has q={fixed.q}, expected {q}")
    return fixed.levels


def _fill_levels(counts: np.ndarray, n2: int) -> np.ndarray:
    """Assign n2 level slots one at a time to the least-used level
    (ties to the lowest level value)."""
    counts = counts.astype(np.int64).copy()
    out = np.empty(n2, dtype=np.int64)
    for i in range(n2):
        lev = int(np.argmin(counts))
        out[i] = lev + 1
        counts[lev] += 1
    return out


def init_augmented(
    fixed: UTypeDesign | None,
    n2: int,
    s: int,
    q: int,
    seed=None,
    relaxed: bool = False,
) -> UTypeDesign:
    """Random free block making the combined design balanced.

    Per column the level deficits of the fixed block are filled in level
    order, then the rows are shuffled.  With ``relaxed=True`` an infeasible
    fixed block (some level already over-represented) is tolerated: the free
    slots go round-robin to the least-used levels instead of erroring.
    """
    if n2 < 1 or s < 1 or q < 1:
        raise DesignError("n2, s, q must be positive")
    fixed_lv = _fixed_block(fixed, s, q)
    n1 = fixed_lv.shape[0]
    n = n1 + n2
    if n % q != 0:
        raise DesignError(f"combined run count {n} must be divisible by q={q}")
    target = n // q
    rng = np.random.default_rng(seed)
    cols = []
    for j in range(s):
        counts = np.bincount(fixed_lv[:, j], minlength=q + 1)[1:]
        if not relaxed and counts.max(initial=0) > target:
            raise DesignError(
                f"combined balance infeasible in column {j}: a level already "
                f"appears more than {target} times"
            )
        col = _fill_levels(counts, n2)
        rng.shuffle(col)
        cols.append(col)
    return UTypeDesign(np.column_stack(cols), q, check_balance=False)


def _single_run(
    fixed_lv: np.ndarray,
    n2: int,
    s: int,
    q: int,
    cfg: AugudConfig,
    seed_seq: np.random.SeedSequence,
    relaxed: bool,
) -> tuple[np.ndarray, float, int]:
    rng = np.random.default_rng(seed_seq)
    n1 = fixed_lv.shape[0]
    fixed_design = (
        UTypeDesign(fixed_lv, q, check_balance=False) if n1 else None
    )
    free = init_augmented(fixed_design, n2, s, q, seed=rng, relaxed=relaxed).levels
    free = free.copy()

    combined = np.vstack([fixed_lv, free])
    cache = Cd2Cache(UnitDesign((2.0 * combined - 1.0) / (2.0 * q)))
    best_sq = cache.squared
    best_free = free.copy()
    iterations = 0

    if n2 >= 2:
        budget = cfg.m_exchange if cfg.m_exchange is not None else exchange_budget(n2, q)
        pairs_a, pairs_b = np.triu_indices(n2, k=1)
        budget = min(budget, len(pairs_a))
        threshold = max(cfg.gamma * cache.squared, _MIN_THRESHOLD)
        for _ in range(cfg.m_outer):
            hits = 0
            for j in range(1, cfg.m_inner + 1):
                col = j % s
                if budget < len(pairs_a):
                    pick = rng.choice(len(pairs_a), size=budget, replace=False)
                else:
                    pick = np.arange(len(pairs_a))
                rows_a = pairs_a[pick] + n1
                rows_b = pairs_b[pick] + n1
                deltas = cache.batch_deltas(col, rows_a, rows_b)
                best = int(np.argmin(deltas))
                delta = float(deltas[best])
                iterations += 1
                p = accept_probability(delta, threshold)
                if rng.random() < p:
                    ra, rb = int(rows_a[best]), int(rows_b[best])
                    cache.commit(col, ra, rb)
                    fa, fb = ra - n1, rb - n1
                    free[fa, col], free[fb, col] = free[fb, col], free[fa, col]
                    hits += 1
                    if cache.squared < best_sq:
                        best_sq = cache.squared
                        best_free = free.copy()
            if hits / cfg.m_inner < cfg.eta:
                threshold = threshold / cfg.alpha
            else:
                threshold = max(cfg.alpha * threshold, _MIN_THRESHOLD)

    return best_free, best_sq, iterations


def run_augud(
    fixed: UTypeDesign | None,
    n2: int,
    s: int,
    q: int,
    cfg: AugudConfig | None = None,
    relaxed: bool = False,
) -> AugudResult:
    """Optimize a follow-up design minimizing CD2 of the stacked design.

    Deterministic given ``cfg.seed``; with restarts the winner is the
    lexicographic minimum of (combined CD2, restart index).
    """
    cfg = cfg or AugudConfig()
    fixed_lv = _fixed_block(fixed, s, q)
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    best = None
    total_iters = 0
    for idx, seed_seq in enumerate(seeds):
        free, sq, iters = _single_run(fixed_lv, n2, s, q, cfg, seed_seq, relaxed)
        total_iters += iters
        if best is None or sq < best[1]:
            best = (free, sq, idx)
    free, _, idx = best
    design = UTypeDesign(free, q, check_balance=False)
    fixed_unit = (
        UnitDesign((2.0 * fixed_lv - 1.0) / (2.0 * q)) if fixed_lv.size else None
    )
    combined = cd2_combined(fixed_unit, to_unit(design))
    return AugudResult(
        design=design, combined_cd2=combined, iterations=total_iters, restart_index=idx
    )


def construct_ud(n: int, s: int, q: int, cfg: AugudConfig | None = None) -> AugudResult:
    """Uniform design construction: augmentation from an empty fixed block."""
    return run_augud(None, n, s, q, cfg)
