"""Typed hyperparameter search spaces and the unit-cube encoding.

Continuous and integer parameters occupy one unit dimension each (after an
optional log transform); categorical parameters are one-hot encoded, one
dimension per category, decoded by argmax.  The unit dimension of a space is
therefore at least the number of parameters.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["ParamSpec", "SearchSpace", "SpaceError"]

_SCALES = ("linear", "log2", "log10")
_KINDS = ("continuous", "integer", "categorical")


class SpaceError(ValueError):
    """Invalid space definition or point."""


@dataclass(frozen=True)
class ParamSpec:
    name: str
    kind: str
    lo: float | None = None
    hi: float | None = None
    scale: str = "linear"
    categories: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.name:
            raise SpaceError("parameter name must be non-empty")
        if self.kind not in _KINDS:
            raise SpaceError(f"{self.name}: unknown kind {self.kind!r}")
        if self.kind == "categorical":
            if len(self.categories) < 2:
                raise SpaceError(f"{self.name}: need at least 2 categories")
            if len(set(self.categories)) != len(self.categories):
                raise SpaceError(f"{self.name}: duplicate categories")
            return
        if self.lo is None or self.hi is None:
            raise SpaceError(f"{self.name}: lo and hi are required")
        if not self.lo < self.hi:
            raise SpaceError(f"{self.name}: lo must be < hi")
        if self.scale not in _SCALES:
            raise SpaceError(f"{self.name}: unknown scale {self.scale!r}")
        if self.scale != "linear" and self.lo <= 0:
            raise SpaceError(f"{self.name}: log scales require lo > 0")

    @property
    def width(self) -> int:
        """Unit dimensions this parameter occupies."""
        return len(self.categories) if self.kind == "categorical" else 1

    def bounds_transformed(self) -> tuple[float, float]:
        """Bounds in the (scale-applied) space used for the linear unit map."""
        if self.kind == "categorical":
            raise SpaceError(f"{self.name}: categorical has no numeric bounds")
        return self._fwd(self.lo), self._fwd(self.hi)

    def _fwd(self, v: float) -> float:
        if self.scale == "log2":
            return math.log2(v)
        if self.scale == "log10":
            return math.log10(v)
        return v

    def _inv(self, v: float) -> float:
        if self.scale == "log2":
            return 2.0 ** v
        if self.scale == "log10":
            return 10.0 ** v
        return v

    def decode(self, block: np.ndarray):
        """Decode this parameter's slice of a unit point."""
        if self.kind == "categorical":
            return self.categories[int(np.argmax(block))]
        lo_t, hi_t = self.bounds_transformed()
        v = self._inv(lo_t + float(block[0]) * (hi_t - lo_t))
        if self.kind == "integer":
            return int(min(max(math.floor(v + 0.5), self.lo), self.hi))
        return float(min(max(v, self.lo), self.hi))


class SearchSpace:
    """Ordered list of parameter specs defining the unit-cube embedding."""

    def __init__(self, specs):
        specs = list(specs)
        if not specs:
            raise SpaceError("a search space needs at least one parameter")
        names = [sp.name for sp in specs]
        if len(set(names)) != len(names):
            raise SpaceError("duplicate parameter names")
        self.specs = specs

    @property
    def dimension(self) -> int:
        return sum(sp.width for sp in self.specs)

    def decode(self, unit_point) -> dict:
        """Map a point in [0,1]^s to a named configuration."""
        x = np.asarray(unit_point, dtype=np.float64).ravel()
        if x.shape[0] != self.dimension:
            raise SpaceError(
                f"expected a {self.dimension}-dim point, got {x.shape[0]}"
            )
        if x.size and (x.min() < 0.0 or x.max() > 1.0):
            raise SpaceError("unit point entries must lie in [0, 1]")
        out = {}
        pos = 0
        for sp in self.specs:
            out[sp.name] = sp.decode(x[pos : pos + sp.width])
            pos += sp.width
        return out

    def column_names(self) -> list[str]:
        return [sp.name for sp in self.specs]

    # -- JSON definition file ----------------------------------------------

    @classmethod
    def from_json(cls, text: str) -> "SearchSpace":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpaceError(f"invalid JSON: {exc}") from exc
        if not isinstance(raw, list):
            raise SpaceError("space definition must be a JSON array")
        specs = []
        for i, item in enumerate(raw):
            if not isinstance(item, dict):
                raise SpaceError(f"entry {i}: expected an object")
            try:
                name = item["name"]
                kind = item["kind"]
            except KeyError as exc:
                raise SpaceError(f"entry {i}: missing field {exc}") from exc
            try:
                if kind == "categorical":
                    specs.append(
                        ParamSpec(
                            name=name,
                            kind=kind,
                            categories=tuple(item.get("categories", ())),
                        )
                    )
                else:
                    specs.append(
                        ParamSpec(
                            name=name,
                            kind=kind,
                            lo=item.get("lo"),
                            hi=item.get("hi"),
                            scale=item.get("scale", "linear"),
                        )
                    )
            except SpaceError as exc:
                raise SpaceError(f"entry {i} ({name!r}): {exc}") from exc
        return cls(specs)

    @classmethod
    def from_file(cls, path) -> "SearchSpace":
        with open(path) as fh:
            return cls.from_json(fh.read())

    @classmethod
    def unit_box(cls, names_or_dim) -> "SearchSpace":
        """Continuous linear space over [0,1] per dimension."""
        if isinstance(names_or_dim, int):
            names = [f"x{i + 1}" for i in range(names_or_dim)]
        else:
            names = list(names_or_dim)
        return cls(
            [ParamSpec(name=n, kind="continuous", lo=0.0, hi=1.0) for n in names]
        )

    @classmethod
    def from_bounds(cls, bounds, names=None) -> "SearchSpace":
        """Continuous linear space from per-dimension (lo, hi) pairs."""
        names = names or [f"x{i + 1}" for i in range(len(bounds))]
        return cls(
            [
                ParamSpec(name=n, kind="continuous", lo=float(lo), hi=float(hi))
                for n, (lo, hi) in zip(names, bounds)
            ]
        )
