"""Sampled real functions on a uniform arc-length grid.

These are the lattice elements the planner works with: pointwise ``meet``
(min) and ``join`` (max), a tolerant order test and a forward-difference
derivative.  Instances are immutable; the value arrays are flagged read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np


class GridMismatchError(ValueError):
    """Raised when two sampled functions live on different grids."""


@dataclass(frozen=True)
class Grid:
    """Uniform grid ``s_i = i*h``, ``i = 0..n`` over ``[0, s_f]``."""

    s_f: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.s_f) and self.s_f > 0):
            raise ValueError(f"grid length must be positive and finite, got {self.s_f}")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"grid needs at least 2 intervals, got n={self.n}")
        object.__setattr__(self, "s_f", float(self.s_f))
        object.__setattr__(self, "n", int(self.n))

    @property
    def h(self) -> float:
        return self.s_f / self.n

    @property
    def points(self) -> np.ndarray:
        s = np.arange(self.n + 1) * self.h
        s[-1] = self.s_f
        return s

    def __len__(self) -> int:
        return self.n + 1

    @classmethod
    def from_points(cls, s: Sequence[float], rtol: float = 1e-9) -> "Grid":
        """Recover a grid from sample positions; non-uniform spacing is rejected."""
        s = np.asarray(s, dtype=float)
        if s.ndim != 1 or s.size < 3:
            raise ValueError("need at least 3 sample positions")
        grid = cls(s[-1] - s[0], s.size - 1)
        if s[0] != 0.0 or not np.allclose(s, grid.points, rtol=0, atol=rtol * grid.s_f):
            raise ValueError("sample positions are not a uniform grid starting at 0")
        return grid


Values = Union[float, Sequence[float], np.ndarray, Callable[[np.ndarray], np.ndarray]]


class SampledFunction:
    """A real function given by its values at the ``n+1`` points of a grid."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid, values: Values):
        if callable(values):
            values = values(grid.points)
        arr = np.array(values, dtype=float)
        if arr.ndim == 0:
            arr = np.full(len(grid), float(arr))
        if arr.shape != (len(grid),):
            raise ValueError(f"expected {len(grid)} samples, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sampled function has non-finite entries")
        arr.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("SampledFunction is immutable")

    @classmethod
    def constant(cls, grid: Grid, c: float) -> "SampledFunction":
        return cls(grid, c)

    @property
    def s(self) -> np.ndarray:
        return self.grid.points

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __repr__(self) -> str:
        return f"SampledFunction(n={self.grid.n}, s_f={self.grid.s_f:g}, values={self.values!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, SampledFunction):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.values, other.values)

    __hash__ = None

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def with_values(self, values: Values) -> "SampledFunction":
        return SampledFunction(self.grid, values)

    def __call__(self, s):
        """Piecewise-linear interpolation at arbitrary positions in ``[0, s_f]``."""
        return np.interp(s, self.grid.points, self.values)

    def step_integrals(self) -> np.ndarray:
        """Trapezoid integral over each of the ``n`` cells."""
        v = self.values
        return 0.5 * self.grid.h * (v[:-1] + v[1:])

    def cumulative_integral(self) -> np.ndarray:
        """Running trapezoid integral from 0; entry 0 is exactly 0."""
        return np.concatenate(([0.0], np.cumsum(self.step_integrals())))


def _check_grids(f: SampledFunction, g: SampledFunction) -> None:
    if f.grid != g.grid:
        raise GridMismatchError(f"incompatible grids: {f.grid} vs {g.grid}")


def default_tolerance(f: SampledFunction) -> float:
    return 1e-9 * max(1.0, f.sup_norm())


def meet(f: SampledFunction, g: SampledFunction) -> SampledFunction:
    _check_grids(f, g)
    return SampledFunction(f.grid, np.minimum(f.values, g.values))


def join(f: SampledFunction, g: SampledFunction) -> SampledFunction:
    _check_grids(f, g)
    return SampledFunction(f.grid, np.maximum(f.values, g.values))


def leq(f: SampledFunction, g: SampledFunction, eps: float | None = None) -> bool:
    """``f <= g`` at every grid point, up to ``eps`` (default scaled to ``f``)."""
    _check_grids(f, g)
    if eps is None:
        eps = default_tolerance(f)
    if eps < 0:
        raise ValueError("tolerance must be non-negative")
    return bool(np.all(f.values <= g.values + eps))


def derivative(f: SampledFunction) -> SampledFunction:
    """Forward differences; the last entry repeats the last cell's slope."""
    d = np.diff(f.values) / f.grid.h
    return SampledFunction(f.grid, np.append(d, d[-1]))
