"""Synthetic objective suite for the optimizer benchmarks.

The registry covers 32 standard unconstrained global-minimization functions
(definitions and constants follow the Virtual Library of Simulation
Experiments test-function collection) plus the 2-D "cliff" and "octopus"
maximization examples.  Known optima are exact closed forms where available
and otherwise frozen from high-precision Nelder-Mead refinement of the
published approximate minimizers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["BenchmarkFunction", "cliff", "octopus", "lookup", "names"]


@dataclass(frozen=True)
class BenchmarkFunction:
    name: str
    dimension: int
    domain: tuple[tuple[float, float], ...]
    evaluate: callable
    direction: str = "minimize"
    optimum_value: float | None = None
    optimum_locations: tuple[tuple[float, ...], ...] = ()

    def __call__(self, x) -> float:
        return float(self.evaluate(np.asarray(x, dtype=np.float64)))


def cliff(x1: float, x2: float) -> float:
    """exp{-x1^2/200 - (x2 + 0.03 x1^2 - 3)^2 / 2}; max 1 at (0, 3)."""
    return math.exp(-0.5 * x1 * x1 / 100.0 - 0.5 * (x2 + 0.03 * x1 * x1 - 3.0) ** 2)


def octopus(x1: float, x2: float) -> float:
    """2 cos(10 x1) sin(10 x2) + sin(10 x1 x2) on [0,1]^2."""
    return 2.0 * math.cos(10.0 * x1) * math.sin(10.0 * x2) + math.sin(10.0 * x1 * x2)


# -- minimization suite ------------------------------------------------------


def _bukin6(x):
    return 100.0 * np.sqrt(abs(x[1] - 0.01 * x[0] ** 2)) + 0.01 * abs(x[0] + 10.0)


def _crossit(x):
    t = abs(100.0 - np.hypot(x[0], x[1]) / np.pi)
    return -0.0001 * (abs(np.sin(x[0]) * np.sin(x[1]) * np.exp(t)) + 1.0) ** 0.1


def _egg(x):
    x1, x2 = x
    return -(x2 + 47.0) * np.sin(np.sqrt(abs(x2 + x1 / 2.0 + 47.0))) - x1 * np.sin(
        np.sqrt(abs(x1 - (x2 + 47.0)))
    )


def _holder(x):
    t = abs(1.0 - np.hypot(x[0], x[1]) / np.pi)
    return -abs(np.sin(x[0]) * np.cos(x[1]) * np.exp(t))


_LANGER_C = np.array([1.0, 2.0, 5.0, 2.0, 3.0])
_LANGER_A = np.array([[3.0, 5.0], [5.0, 2.0], [2.0, 1.0], [1.0, 4.0], [7.0, 9.0]])


def _langer(x):
    d = np.sum((x - _LANGER_A) ** 2, axis=1)
    return np.sum(_LANGER_C * np.exp(-d / np.pi) * np.cos(np.pi * d))


def _levy(x):
    w = 1.0 + (x - 1.0) / 4.0
    head = np.sin(np.pi * w[0]) ** 2
    mid = np.sum((w[:-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * w[:-1] + 1.0) ** 2))
    tail = (w[-1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * w[-1]) ** 2)
    return head + mid + tail


def _levy13(x):
    x1, x2 = x
    return (
        np.sin(3.0 * np.pi * x1) ** 2
        + (x1 - 1.0) ** 2 * (1.0 + np.sin(3.0 * np.pi * x2) ** 2)
        + (x2 - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * x2) ** 2)
    )


def _schwef(x):
    return 418.9829 * len(x) - np.sum(x * np.sin(np.sqrt(np.abs(x))))


def _shubert(x):
    i = np.arange(1.0, 6.0)
    return np.prod([np.sum(i * np.cos((i + 1.0) * xj + i)) for xj in x])


def _booth(x):
    return (x[0] + 2.0 * x[1] - 7.0) ** 2 + (2.0 * x[0] + x[1] - 5.0) ** 2


def _mccorm(x):
    return (
        np.sin(x[0] + x[1])
        + (x[0] - x[1]) ** 2
        - 1.5 * x[0]
        + 2.5 * x[1]
        + 1.0
    )


_POWERSUM_B = np.array([8.0, 18.0, 44.0, 114.0])


def _powersum(x):
    k = np.arange(1, 5)
    return np.sum((np.sum(x[None, :] ** k[:, None], axis=1) - _POWERSUM_B) ** 2)


def _zakharov(x):
    i = np.arange(1.0, len(x) + 1.0)
    t = np.sum(0.5 * i * x)
    return np.sum(x**2) + t**2 + t**4


def _camel6(x):
    x1, x2 = x
    return (
        (4.0 - 2.1 * x1**2 + x1**4 / 3.0) * x1**2
        + x1 * x2
        + (-4.0 + 4.0 * x2**2) * x2**2
    )


def _dixonpr(x):
    i = np.arange(2.0, len(x) + 1.0)
    return (x[0] - 1.0) ** 2 + np.sum(i * (2.0 * x[1:] ** 2 - x[:-1]) ** 2)


def _rosen(x):
    return np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1.0) ** 2)


def _perm0db(x, beta=10.0):
    d = len(x)
    i = np.arange(1.0, d + 1.0)
    total = 0.0
    for k in range(1, d + 1):
        total += np.sum((i + beta) * (x**k - (1.0 / i) ** k)) ** 2
    return total


def _trid(x):
    return np.sum((x - 1.0) ** 2) - np.sum(x[1:] * x[:-1])


_DEJONG_A1 = np.tile(np.array([-32.0, -16.0, 0.0, 16.0, 32.0]), 5)
_DEJONG_A2 = np.repeat(np.array([-32.0, -16.0, 0.0, 16.0, 32.0]), 5)


def _dejong5(x):
    i = np.arange(1.0, 26.0)
    return 1.0 / (
        0.002 + np.sum(1.0 / (i + (x[0] - _DEJONG_A1) ** 6 + (x[1] - _DEJONG_A2) ** 6))
    )


def _easom(x):
    return (
        -np.cos(x[0])
        * np.cos(x[1])
        * np.exp(-((x[0] - np.pi) ** 2) - (x[1] - np.pi) ** 2)
    )


def _michal(x, m=10.0):
    i = np.arange(1.0, len(x) + 1.0)
    return -np.sum(np.sin(x) * np.sin(i * x**2 / np.pi) ** (2.0 * m))


def _beale(x):
    x1, x2 = x
    return (
        (1.5 - x1 + x1 * x2) ** 2
        + (2.25 - x1 + x1 * x2**2) ** 2
        + (2.625 - x1 + x1 * x2**3) ** 2
    )


def _branin(x):
    a, b, c = 1.0, 5.1 / (4.0 * np.pi**2), 5.0 / np.pi
    r, s, t = 6.0, 10.0, 1.0 / (8.0 * np.pi)
    return a * (x[1] - b * x[0] ** 2 + c * x[0] - r) ** 2 + s * (1.0 - t) * np.cos(
        x[0]
    ) + s


def _colville(x):
    x1, x2, x3, x4 = x
    return (
        100.0 * (x1**2 - x2) ** 2
        + (x1 - 1.0) ** 2
        + (x3 - 1.0) ** 2
        + 90.0 * (x3**2 - x4) ** 2
        + 10.1 * ((x2 - 1.0) ** 2 + (x4 - 1.0) ** 2)
        + 19.8 * (x2 - 1.0) * (x4 - 1.0)
    )


def _goldpr(x):
    x1, x2 = x
    p1 = 1.0 + (x1 + x2 + 1.0) ** 2 * (
        19.0 - 14.0 * x1 + 3.0 * x1**2 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2**2
    )
    p2 = 30.0 + (2.0 * x1 - 3.0 * x2) ** 2 * (
        18.0 - 32.0 * x1 + 12.0 * x1**2 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2**2
    )
    return p1 * p2


_HART_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
_HART3_A = np.array(
    [[3.0, 10, 30], [0.1, 10, 35], [3.0, 10, 30], [0.1, 10, 35]]
)
_HART3_P = 1e-4 * np.array(
    [[3689, 1170, 2673], [4699, 4387, 7470], [1091, 8732, 5547], [381, 5743, 8828]]
)
_HART6_A = np.array(
    [
        [10, 3, 17, 3.5, 1.7, 8],
        [0.05, 10, 17, 0.1, 8, 14],
        [3, 3.5, 1.7, 10, 17, 8],
        [17, 8, 0.05, 10, 0.1, 14],
    ],
    dtype=np.float64,
)
_HART6_P = 1e-4 * np.array(
    [
        [1312, 1696, 5569, 124, 8283, 5886],
        [2329, 4135, 8307, 3736, 1004, 9991],
        [2348, 1451, 3522, 2883, 3047, 6650],
        [4047, 8828, 8732, 5743, 1091, 381],
    ]
)


def _hart3(x):
    return -np.sum(
        _HART_ALPHA * np.exp(-np.sum(_HART3_A * (x - _HART3_P) ** 2, axis=1))
    )


def _hart4(x):
    inner = np.sum(_HART6_A[:, :4] * (x - _HART6_P[:, :4]) ** 2, axis=1)
    return (1.1 - np.sum(_HART_ALPHA * np.exp(-inner))) / 0.839


def _hart6(x):
    return -np.sum(
        _HART_ALPHA * np.exp(-np.sum(_HART6_A * (x - _HART6_P) ** 2, axis=1))
    )


def _permdb(x, beta=0.5):
    d = len(x)
    i = np.arange(1.0, d + 1.0)
    total = 0.0
    for k in range(1, d + 1):
        total += np.sum((i**k + beta) * ((x / i) ** k - 1.0)) ** 2
    return total


def _powell(x):
    x1, x2, x3, x4 = x
    return (
        (x1 + 10.0 * x2) ** 2
        + 5.0 * (x3 - x4) ** 2
        + (x2 - 2.0 * x3) ** 4
        + 10.0 * (x1 - x4) ** 4
    )


_SHEKEL_C = np.array(
    [
        [4, 1, 8, 6, 3, 2, 5, 8, 6, 7],
        [4, 1, 8, 6, 7, 9, 3, 1, 2, 3.6],
        [4, 1, 8, 6, 3, 2, 5, 8, 6, 7],
        [4, 1, 8, 6, 7, 9, 3, 1, 2, 3.6],
    ]
)
_SHEKEL_BETA = np.array([1, 2, 2, 4, 4, 6, 3, 7, 5, 5]) / 10.0


def _shekel(x):
    return -np.sum(1.0 / (np.sum((x[:, None] - _SHEKEL_C) ** 2, axis=0) + _SHEKEL_BETA))


def _stybtang(x):
    return 0.5 * np.sum(x**4 - 16.0 * x**2 + 5.0 * x)


def _dixonpr_argmin(d):
    return tuple(2.0 ** (-(2.0**i - 2.0) / 2.0**i) for i in range(1, d + 1))


_STYB_X = -2.9035340314007785
_STYB_F1 = -39.16616570377141

_REGISTRY: dict[str, BenchmarkFunction] = {}


def _register(name, dim, domain, fn, value=None, locations=(), direction="minimize"):
    if len(domain) == 1 and dim > 1:
        domain = domain * dim
    _REGISTRY[name] = BenchmarkFunction(
        name=name,
        dimension=dim,
        domain=tuple(domain),
        evaluate=fn,
        direction=direction,
        optimum_value=value,
        optimum_locations=tuple(tuple(loc) for loc in locations),
    )


_register(
    "cliff", 2, [(-20.0, 20.0), (-10.0, 5.0)],
    lambda x: cliff(x[0], x[1]), value=1.0, locations=[(0.0, 3.0)],
    direction="maximize",
)
_register(
    "octopus", 2, [(0.0, 1.0)],
    lambda x: octopus(x[0], x[1]),
    value=2.9964854440233726,
    locations=[(0.31599598217182784, 0.4724674086471432)],
    direction="maximize",
)
_register(
    "bukin6", 2, [(-15.0, -5.0), (-3.0, 3.0)], _bukin6,
    value=0.0, locations=[(-10.0, 1.0)],
)
_register(
    "crossit", 2, [(-10.0, 10.0)], _crossit,
    value=-2.062611870822739,
    locations=[(1.3494065393507553, 1.3494065911745596)],
)
_register(
    "egg", 2, [(-512.0, 512.0)], _egg,
    value=-959.640662720851, locations=[(512.0, 404.2318052512796)],
)
_register(
    "holder", 2, [(-10.0, 10.0)], _holder,
    value=-19.208502567886747,
    locations=[(8.05502348789846, 9.664590020886543)],
)
# Langermann with c=(1,2,5,2,3) and the standard 5x2 A matrix; minimum
# -4.15580929 near (2.7934, 1.5972) (numeric, not asserted at 1e-9).
_register("langer", 2, [(0.0, 10.0)], _langer)
_register("levy", 2, [(-10.0, 10.0)], _levy, value=0.0, locations=[(1.0, 1.0)])
_register("levy13", 2, [(-10.0, 10.0)], _levy13, value=0.0, locations=[(1.0, 1.0)])
# Schwefel's 418.9829*d offset is itself rounded, so the minimum is only
# zero to ~1e-4 precision; no exact optimum recorded.
_register("schwef", 6, [(-500.0, 500.0)], _schwef)
_register(
    "shubert", 2, [(-10.0, 10.0)], _shubert,
    value=-186.73090883102392,
    locations=[(-7.708313737219148, -0.8003211007252179)],
)
_register("booth", 2, [(-10.0, 10.0)], _booth, value=0.0, locations=[(1.0, 3.0)])
_register(
    "mccorm", 2, [(-1.5, 4.0), (-3.0, 4.0)], _mccorm,
    value=-math.sqrt(3.0) / 2.0 - math.pi / 3.0,
    locations=[(0.5 - math.pi / 3.0, -0.5 - math.pi / 3.0)],
)
_register(
    "powersum", 4, [(0.0, 4.0)], _powersum,
    value=0.0, locations=[(1.0, 2.0, 2.0, 3.0)],
)
_register(
    "zakharov", 4, [(-5.0, 10.0)], _zakharov,
    value=0.0, locations=[(0.0, 0.0, 0.0, 0.0)],
)
_register(
    "camel6", 2, [(-3.0, 3.0), (-2.0, 2.0)], _camel6,
    value=-1.0316284534898774,
    locations=[
        (0.08984201181742917, -0.7126564056224669),
        (-0.08984201181742917, 0.7126564056224669),
    ],
)
_register(
    "dixonpr", 4, [(-10.0, 10.0)], _dixonpr,
    value=0.0, locations=[_dixonpr_argmin(4)],
)
_register(
    "rosen", 8, [(-5.0, 10.0)], _rosen, value=0.0, locations=[(1.0,) * 8]
)
_register(
    "perm0db", 2, [(-2.0, 2.0)], _perm0db, value=0.0, locations=[(1.0, 0.5)]
)
_register("trid", 2, [(-4.0, 4.0)], _trid, value=-2.0, locations=[(2.0, 2.0)])
_register(
    "dejong5", 2, [(-65.536, 65.536)], _dejong5,
    value=0.9980038377944498,
    locations=[(-31.97833357139726, -31.978336789414364)],
)
_register(
    "easom", 2, [(-100.0, 100.0)], _easom,
    value=-1.0, locations=[(math.pi, math.pi)],
)
# Michalewicz (m=10), d=5: minimum about -4.687658 (numeric).
_register("michal", 5, [(0.0, math.pi)], _michal)
_register("beale", 2, [(-4.5, 4.5)], _beale, value=0.0, locations=[(3.0, 0.5)])
_register(
    "branin", 2, [(-5.0, 10.0), (0.0, 15.0)], _branin,
    value=5.0 / (4.0 * math.pi),
    locations=[(math.pi, 2.275), (-math.pi, 12.275), (3.0 * math.pi, 2.475)],
)
_register(
    "colville", 4, [(-10.0, 10.0)], _colville,
    value=0.0, locations=[(1.0, 1.0, 1.0, 1.0)],
)
_register(
    "goldpr", 2, [(-2.0, 2.0)], _goldpr, value=3.0, locations=[(0.0, -1.0)]
)
_register(
    "hart3", 3, [(0.0, 1.0)], _hart3,
    value=-3.862779787332663,
    locations=[(0.11458886908541062, 0.5556488928322367, 0.8525469854282611)],
)
_register(
    "hart4", 4, [(0.0, 1.0)], _hart4,
    value=-3.1344941412224,
    locations=[
        (0.1873952729804964, 0.1941515274026699, 0.557917779896157,
         0.2647796254456737)
    ],
)
_register(
    "hart6", 6, [(0.0, 1.0)], _hart6,
    value=-3.3223680114155147,
    locations=[
        (0.20168950909365746, 0.15001069354111374, 0.4768739729250998,
         0.2753324275220782, 0.3116516172395686, 0.6573005345536702)
    ],
)
_register("permdb", 2, [(-2.0, 2.0)], _permdb, value=0.0, locations=[(1.0, 2.0)])
_register(
    "powell", 4, [(-4.0, 5.0)], _powell,
    value=0.0, locations=[(0.0, 0.0, 0.0, 0.0)],
)
_register(
    "shekel", 4, [(0.0, 10.0)], _shekel,
    value=-10.53644315348353,
    locations=[
        (4.000746866658956, 3.9995094808675886, 4.000746866997999,
         3.9995094822423836)
    ],
)
_register(
    "stybtang", 6, [(-5.0, 5.0)], _stybtang,
    value=6.0 * _STYB_F1, locations=[(_STYB_X,) * 6],
)


def names() -> list[str]:
    return sorted(_REGISTRY)


def lookup(name: str) -> BenchmarkFunction:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(
            f"unknown benchmark {name!r}; known: {', '.join(names())}"
        ) from None
