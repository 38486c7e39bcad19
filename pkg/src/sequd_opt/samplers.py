"""Non-sequential baseline point generators over the unit cube."""

from __future__ import annotations

import warnings

import numpy as np
from scipy.stats import qmc

from .design import UnitDesign

__all__ = ["SAMPLER_KINDS", "sample", "grid_shape"]

SAMPLER_KINDS = ("grid", "random", "lhs", "sobol")


def grid_shape(n: int) -> tuple[int, int]:
    """Largest a x b lattice with a*b <= n, ties broken toward square."""
    best = (1, 1)
    for a in range(1, n + 1):
        b = n // a
        if a * b > best[0] * best[1] or (
            a * b == best[0] * best[1] and abs(a - b) < abs(best[0] - best[1])
        ):
            best = (a, b)
    return best


def sample(kind: str, n: int, s: int, seed=None) -> UnitDesign:
    """Draw n points in [0,1]^s.

    random: i.i.d. uniform.  lhs: one point per stratum [k/n, (k+1)/n) per
    dimension, independently permuted.  sobol: unscrambled Sobol sequence
    starting from index 1 (the all-zeros point is skipped).  grid: midpoint
    lattice, 2-D only; budget not fitting the lattice is forfeited.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if s < 1:
        raise ValueError("s must be >= 1")
    if kind == "random":
        rng = np.random.default_rng(seed)
        return UnitDesign(rng.random((n, s)))
    if kind == "lhs":
        rng = np.random.default_rng(seed)
        cols = []
        for _ in range(s):
            strata = rng.permutation(n)
            cols.append((strata + rng.random(n)) / n)
        return UnitDesign(np.column_stack(cols))
    if kind == "sobol":
        gen = qmc.Sobol(d=s, scramble=False)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            pts = gen.random(n + 1)
        return UnitDesign(pts[1:])
    if kind == "grid":
        if s != 2:
            raise ValueError("grid sampling is restricted to s=2")
        a, b = grid_shape(n)
        xs = (np.arange(a) + 0.5) / a
        ys = (np.arange(b) + 0.5) / b
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        return UnitDesign(np.column_stack([gx.ravel(), gy.ravel()]))
    raise ValueError(f"unknown sampler kind {kind!r}")
