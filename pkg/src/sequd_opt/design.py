"""U-type designs, the unit-cube mapping, and the centered L2 discrepancy.

A U-type design is an n x s integer matrix with entries in 1..q where each
column contains every level exactly n/q times.  Mapped to the unit cube via
x = (2u - 1) / (2q), its uniformity is measured by the centered L2
discrepancy (CD2).  The squared discrepancy admits exact O(n*s) incremental
updates under within-column element exchanges, which is what makes
threshold-accepting search over designs affordable; ``Cd2Cache`` implements
those updates.
"""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

try:  # optional JIT acceleration of the exchange hot path
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional speedup
    _HAVE_NUMBA = False

    def _njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


__all__ = [
    "UTypeDesign",
    "UnitDesign",
    "Cd2Cache",
    "random_balanced",
    "to_unit",
    "cd2",
    "cd2_squared",
    "cd2_combined",
]


class DesignError(ValueError):
    """Invalid design matrix or design parameters."""


class UTypeDesign:
    """An n x s matrix of integer levels in 1..q.

    By default the balance invariant (each level appears n/q times per
    column) is enforced.  Pass ``check_balance=False`` for blocks that are
    intentionally unbalanced, e.g. existing points snapped into a subspace
    grid during sequential optimization.
    """

    __slots__ = ("levels", "q")

    def __init__(self, levels, q: int, check_balance: bool = True):
        levels = np.asarray(levels, dtype=np.int64)
        if levels.ndim != 2:
            raise DesignError("levels must be a 2-D matrix")
        if q < 1:
            raise DesignError("q must be >= 1")
        if levels.size and (levels.min() < 1 or levels.max() > q):
            raise DesignError("levels must lie in 1..q")
        self.levels = levels
        self.q = int(q)
        if check_balance and not self.is_balanced():
            raise DesignError(
                f"design is not balanced: n={self.n} runs over q={q} levels"
            )

    @property
    def n(self) -> int:
        return self.levels.shape[0]

    @property
    def s(self) -> int:
        return self.levels.shape[1]

    def is_balanced(self) -> bool:
        n, q = self.n, self.q
        if n == 0:
            return True
        if n % q != 0:
            return False
        want = n // q
        for j in range(self.s):
            counts = np.bincount(self.levels[:, j], minlength=q + 1)[1:]
            if not (counts == want).all():
                return False
        return True

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UTypeDesign)
            and self.q == other.q
            and self.levels.shape == other.levels.shape
            and bool((self.levels == other.levels).all())
        )

    def __repr__(self) -> str:
        return f"UTypeDesign(n={self.n}, s={self.s}, q={self.q})"

    # -- serialization -----------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        for row in self.levels:
            writer.writerow([int(v) for v in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, q: int, check_balance: bool = True) -> "UTypeDesign":
        rows = [
            [int(cell) for cell in row]
            for row in csv.reader(io.StringIO(text))
            if row
        ]
        return cls(np.array(rows, dtype=np.int64).reshape(len(rows), -1), q,
                   check_balance=check_balance)

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "s": self.s,
                "q": self.q,
                "levels": self.levels.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str, check_balance: bool = True) -> "UTypeDesign":
        obj = json.loads(text)
        levels = np.array(obj["levels"], dtype=np.int64).reshape(obj["n"], obj["s"])
        return cls(levels, obj["q"], check_balance=check_balance)


class UnitDesign:
    """An n x s matrix of points in the unit cube [0, 1]^s."""

    __slots__ = ("points",)

    def __init__(self, points):
        points = np.asarray(points, dtype=np.float64)
        if points.ndim != 2:
            raise DesignError("points must be a 2-D matrix")
        if points.size and (points.min() < 0.0 or points.max() > 1.0):
            raise DesignError("unit design entries must lie in [0, 1]")
        self.points = points

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def s(self) -> int:
        return self.points.shape[1]

    def __repr__(self) -> str:
        return f"UnitDesign(n={self.n}, s={self.s})"


def random_balanced(n: int, s: int, q: int, seed=None) -> UTypeDesign:
    """Each column is an independent random permutation of the balanced
    multiset {1,...,1, 2,...,2, ..., q,...,q} with n/q copies per level."""
    if n < 1 or s < 1 or q < 1:
        raise DesignError("n, s, q must be positive")
    if n % q != 0:
        raise DesignError(f"n={n} must be divisible by q={q}")
    rng = np.random.default_rng(seed)
    base = np.repeat(np.arange(1, q + 1), n // q)
    cols = [rng.permutation(base) for _ in range(s)]
    return UTypeDesign(np.column_stack(cols), q)


def to_unit(design: UTypeDesign) -> UnitDesign:
    """Map level u to the cell midpoint (2u - 1) / (2q)."""
    return UnitDesign((2.0 * design.levels - 1.0) / (2.0 * design.q))


def levels_from_unit(x: UnitDesign, q: int) -> np.ndarray:
    """Recover integer levels from midpoint-mapped unit points (exact)."""
    lv = (2.0 * q * x.points + 1.0) / 2.0
    out = np.rint(lv).astype(np.int64)
    if not np.allclose(lv, out, atol=1e-9):
        raise DesignError("points are not on the level-midpoint lattice")
    return out


def _second_factors(x: np.ndarray) -> np.ndarray:
    a = np.abs(x - 0.5)
    return 1.0 + 0.5 * a - 0.5 * a * a


def _kernel_matrix(x: np.ndarray) -> np.ndarray:
    n, s = x.shape
    a = np.abs(x - 0.5)
    kern = np.ones((n, n))
    for i in range(s):
        xi = x[:, i]
        ai = a[:, i]
        kern *= (
            1.0
            + 0.5 * (ai[:, None] + ai[None, :])
            - 0.5 * np.abs(xi[:, None] - xi[None, :])
        )
    return kern


def cd2_squared(x: UnitDesign) -> float:
    """Squared centered L2 discrepancy of a unit design.

    CD2^2 = (13/12)^s - (2/n) sum_k prod_j g(x_kj) + (1/n^2) sum_kl prod_i
    h(x_ki, x_li) with g(x) = 1 + |x-.5|/2 - |x-.5|^2/2 and
    h(x, y) = 1 + |x-.5|/2 + |y-.5|/2 - |x-y|/2.
    """
    if x.n == 0:
        raise DesignError("cd2 is undefined for an empty design")
    pts = x.points
    n, s = pts.shape
    part2 = _second_factors(pts).prod(axis=1).sum()
    part3 = _kernel_matrix(pts).sum()
    return (13.0 / 12.0) ** s - (2.0 / n) * part2 + part3 / (n * n)


def cd2(x: UnitDesign) -> float:
    """Root centered L2 discrepancy (the externally reported value)."""
    return math.sqrt(max(cd2_squared(x), 0.0))


def cd2_combined(fixed: UnitDesign | None, free: UnitDesign | None) -> float:
    """CD2 of the row-stacked design; either block may be empty (or None)."""
    blocks = []
    width = None
    for blk in (fixed, free):
        if blk is not None and blk.n > 0:
            if width is not None and blk.s != width:
                raise DesignError("factor counts differ between blocks")
            width = blk.s
            blocks.append(blk.points)
    if not blocks:
        raise DesignError("both blocks are empty")
    return cd2(UnitDesign(np.vstack(blocks)))


@_njit(cache=True)
def _deltas_jit(x_col, a_col, g_col, prod, kern, rows_a, rows_b, n):
    m = rows_a.shape[0]
    out = np.empty(m)
    for i in range(m):
        ra = rows_a[i]
        rb = rows_b[i]
        u = x_col[ra]
        v = x_col[rb]
        au = a_col[ra]
        av = a_col[rb]
        gu = g_col[ra]
        gv = g_col[rb]
        d2 = prod[ra] * (gv / gu - 1.0) + prod[rb] * (gu / gv - 1.0)
        s3 = 0.0
        for l in range(n):
            if l == ra or l == rb:
                continue
            hu = 1.0 + 0.5 * (au + a_col[l]) - 0.5 * abs(u - x_col[l])
            hv = 1.0 + 0.5 * (av + a_col[l]) - 0.5 * abs(v - x_col[l])
            r = hv / hu
            s3 += kern[ra, l] * (r - 1.0) + kern[rb, l] * (1.0 / r - 1.0)
        huu = 1.0 + au
        hvv = 1.0 + av
        dd = kern[ra, ra] * (hvv / huu - 1.0) + kern[rb, rb] * (huu / hvv - 1.0)
        out[i] = -(2.0 / n) * d2 + (2.0 * s3 + dd) / (n * n)
    return out


@_njit(cache=True)
def _commit_jit(x, a, g, prod, kern, col, row_a, row_b):
    n, s = x.shape
    tmp = x[row_a, col]
    x[row_a, col] = x[row_b, col]
    x[row_b, col] = tmp
    for r in (row_a, row_b):
        av = abs(x[r, col] - 0.5)
        a[r, col] = av
        g[r, col] = 1.0 + 0.5 * av - 0.5 * av * av
    for r in (row_a, row_b):
        p = 1.0
        for i in range(s):
            p *= g[r, i]
        prod[r] = p
        for l in range(n):
            row = 1.0
            for i in range(s):
                row *= (
                    1.0
                    + 0.5 * (a[r, i] + a[l, i])
                    - 0.5 * abs(x[r, i] - x[l, i])
                )
            kern[r, l] = row
            kern[l, r] = row


class Cd2Cache:
    """Incremental squared-CD2 bookkeeping for within-column exchanges.

    Holds the combined unit matrix plus the per-row second-sum products and
    the full symmetric kernel matrix of the third sum.  ``exchange_delta``
    prices a swap without mutating anything; ``commit`` applies it and
    refreshes exactly the touched entries (two row products, two kernel
    rows) from scratch, so no floating-point drift accumulates.
    """

    def __init__(self, x: UnitDesign):
        if x.n == 0:
            raise DesignError("cache requires a nonempty design")
        self.x = np.array(x.points, dtype=np.float64)
        self.n, self.s = self.x.shape
        self._a = np.abs(self.x - 0.5)
        self._g = _second_factors(self.x)
        self._prod = self._g.prod(axis=1)
        self._kern = _kernel_matrix(self.x)

    @property
    def squared(self) -> float:
        n = self.n
        return (
            (13.0 / 12.0) ** self.s
            - (2.0 / n) * self._prod.sum()
            + self._kern.sum() / (n * n)
        )

    @property
    def root(self) -> float:
        return math.sqrt(max(self.squared, 0.0))

    def _check(self, col: int, row_a: int, row_b: int) -> None:
        if not (0 <= col < self.s):
            raise IndexError(f"column {col} out of range")
        if not (0 <= row_a < self.n and 0 <= row_b < self.n):
            raise IndexError("row index out of range")
        if row_a == row_b:
            raise IndexError("exchange rows must be distinct")

    def batch_deltas(self, col: int, rows_a, rows_b) -> np.ndarray:
        """Squared-CD2 change for each candidate swap, vectorized."""
        rows_a = np.asarray(rows_a, dtype=np.intp)
        rows_b = np.asarray(rows_b, dtype=np.intp)
        if _HAVE_NUMBA:
            return _deltas_jit(
                np.ascontiguousarray(self.x[:, col]),
                np.ascontiguousarray(self._a[:, col]),
                np.ascontiguousarray(self._g[:, col]),
                self._prod,
                self._kern,
                rows_a,
                rows_b,
                self.n,
            )
        xc = self.x[:, col]
        ac = self._a[:, col]
        u = xc[rows_a]
        v = xc[rows_b]
        au = ac[rows_a]
        av = ac[rows_b]
        n = self.n

        # Second sum: row products scale by the ratio of exchanged factors.
        gu = self._g[rows_a, col]
        gv = self._g[rows_b, col]
        d_part2 = self._prod[rows_a] * (gv / gu - 1.0) + self._prod[rows_b] * (
            gu / gv - 1.0
        )

        # Third sum: off-diagonal kernel factors in the touched column.
        h_u = 1.0 + 0.5 * (au[:, None] + ac[None, :]) - 0.5 * np.abs(
            u[:, None] - xc[None, :]
        )
        h_v = 1.0 + 0.5 * (av[:, None] + ac[None, :]) - 0.5 * np.abs(
            v[:, None] - xc[None, :]
        )
        ratio = h_v / h_u
        d_rows = self._kern[rows_a, :] * (ratio - 1.0) + self._kern[rows_b, :] * (
            1.0 / ratio - 1.0
        )
        # Exclude the (a, b) cross term (unchanged by a joint swap) and the
        # diagonals (handled below with h(u, u) -> h(v, v) factors).
        m = len(rows_a)
        idx = np.arange(m)
        d_off = d_rows.sum(axis=1)
        d_off -= d_rows[idx, rows_a] + d_rows[idx, rows_b]
        h_uu = 1.0 + au
        h_vv = 1.0 + av
        d_diag = self._kern[rows_a, rows_a] * (h_vv / h_uu - 1.0) + self._kern[
            rows_b, rows_b
        ] * (h_uu / h_vv - 1.0)
        d_part3 = 2.0 * d_off + d_diag
        return -(2.0 / n) * d_part2 + d_part3 / (n * n)

    def exchange_delta(self, col: int, row_a: int, row_b: int) -> float:
        """Change in squared CD2 if x[row_a, col] and x[row_b, col] swapped."""
        self._check(col, row_a, row_b)
        return float(self.batch_deltas(col, [row_a], [row_b])[0])

    def commit(self, col: int, row_a: int, row_b: int) -> None:
        """Apply a swap and refresh the touched cache entries exactly."""
        self._check(col, row_a, row_b)
        if _HAVE_NUMBA:
            _commit_jit(
                self.x, self._a, self._g, self._prod, self._kern,
                col, row_a, row_b,
            )
            return
        x = self.x
        x[row_a, col], x[row_b, col] = x[row_b, col], x[row_a, col]
        for r in (row_a, row_b):
            self._a[r, col] = abs(x[r, col] - 0.5)
            self._g[r, col] = _second_factors(x[r : r + 1, col : col + 1])[0, 0]
            self._prod[r] = self._g[r].prod()
            a_r = self._a[r]
            row = np.ones(self.n)
            for i in range(self.s):
                row *= (
                    1.0
                    + 0.5 * (a_r[i] + self._a[:, i])
                    - 0.5 * np.abs(x[r, i] - x[:, i])
                )
            self._kern[r, :] = row
            self._kern[:, r] = row
