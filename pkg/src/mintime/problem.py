"""Problem construction: path curvature, bound functions and the squared-speed envelope.

Working in ``w = v**2`` turns the longitudinal acceleration limit into a
slope bound on ``w`` and the lateral limit ``|k| v**2 <= beta`` into the
pointwise cap ``w <= beta/|k|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy import integrate
from scipy.interpolate import make_interp_spline

from .lattice_fn import Grid, SampledFunction

KAPPA_EPS = 1e-9


class InconsistentBoundsError(ValueError):
    """Bounds contradict each other before any planning (e.g. ``v_minus > v_plus``)."""


class DegeneratePathError(ValueError):
    """The path parameterization has (numerically) vanishing speed."""


# --------------------------------------------------------------------------- curvature


def hermite_transition(l_a: float, l_b: float, k_a: float, k_b: float):
    """Return the blend ``s -> k`` going from ``k_a`` at ``l_a`` to ``k_b`` at ``l_b``.

    The blend is the quintic ``k_a + (k_b - k_a)(10t^3 - 15t^4 + 6t^5)`` with
    ``t = (s - l_a)/(l_b - l_a)``: value match at both ends and vanishing first
    and second derivatives there.
    """
    if not l_a < l_b:
        raise ValueError(f"transition needs l_a < l_b, got {l_a} >= {l_b}")
    width = l_b - l_a

    def blend(s):
        t = np.clip((np.asarray(s, dtype=float) - l_a) / width, 0.0, 1.0)
        return k_a + (k_b - k_a) * t**3 * (10.0 + t * (-15.0 + 6.0 * t))

    return blend


@dataclass(frozen=True)
class PiecewiseHermite:
    """Straight / transition / arc of radius ``R`` / transition / straight."""

    l1: float
    l2: float
    l3: float
    l4: float
    R: float
    s_f: float

    def __post_init__(self):
        if not (0 < self.l1 < self.l2 < self.l3 < self.l4 < self.s_f):
            raise ValueError("need 0 < l1 < l2 < l3 < l4 < s_f")
        if not self.R > 0:
            raise ValueError("arc radius must be positive")

    @property
    def length(self) -> float:
        return self.s_f

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        k_arc = 1.0 / self.R
        entry = hermite_transition(self.l1, self.l2, 0.0, k_arc)
        exit_ = hermite_transition(self.l3, self.l4, k_arc, 0.0)
        return np.select(
            [s < self.l1, s <= self.l2, s < self.l3, s <= self.l4],
            [0.0, entry(s), k_arc, exit_(s)],
            default=0.0,
        )

    def sample(self, grid: Grid) -> SampledFunction:
        return SampledFunction(grid, self(grid.points))


# 5-point Gauss-Legendre on [0, 1]
_GL_X, _GL_W = np.polynomial.legendre.leggauss(5)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


class SplinePath:
    """Planar path through waypoints, interpolated by a natural quintic spline.

    The spline is parameterized by cumulative chord length; ends carry zero
    third and fourth derivatives.  Arc length is obtained by quadrature of the
    parametric speed and inverted by Newton iteration.
    """

    def __init__(self, waypoints: Sequence[Sequence[float]], table_size: int = 4096):
        pts = np.asarray(waypoints, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("waypoints must be a sequence of (x, y) pairs")
        if len(pts) < 3:
            raise ValueError("a spline path needs at least 3 waypoints")
        chords = np.hypot(*np.diff(pts, axis=0).T)
        if np.any(chords <= 0):
            raise DegeneratePathError("consecutive waypoints coincide")
        self.waypoints = pts
        self.knots = np.concatenate(([0.0], np.cumsum(chords)))
        k = min(5, len(pts) - 1)
        if k % 2 == 0:
            k -= 1
        n_bc = (k - 1) // 2
        bc = [(d, np.zeros(2)) for d in range(k - n_bc, k)]
        self._spline = make_interp_spline(self.knots, pts, k=k, bc_type=(bc, bc) if bc else None)
        self.degree = k

        # dense u -> s table, aligned with the waypoint knots
        per = max(8, table_size // (len(pts) - 1))
        u = np.concatenate(
            [np.linspace(a, b, per, endpoint=False) for a, b in zip(self.knots[:-1], self.knots[1:])]
            + [self.knots[-1:]]
        )
        seg = self._gl_length(u[:-1], u[1:])
        self._u = u
        self._s = np.concatenate(([0.0], np.cumsum(seg)))
        if np.any(self.speed(u) < 1e-12):
            raise DegeneratePathError("path speed vanishes")

        quad_total = sum(
            integrate.quad(self.speed, a, b, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
            for a, b in zip(self.knots[:-1], self.knots[1:])
        )
        if abs(quad_total - self._s[-1]) > 1e-9 * quad_total:
            raise RuntimeError("arc-length table disagrees with adaptive quadrature")
        self._length = quad_total
        self._s[-1] = quad_total

    def speed(self, u):
        d1 = self._spline(u, 1)
        return np.hypot(d1[..., 0], d1[..., 1])

    def _gl_length(self, a, b):
        a = np.asarray(a, dtype=float)
        width = np.asarray(b, dtype=float) - a
        nodes = a[..., None] + width[..., None] * _GL_X
        return width * (self.speed(nodes) @ _GL_W)

    @property
    def length(self) -> float:
        return self._length

    def parameter_at(self, s) -> np.ndarray:
        """Invert arc length: spline parameter ``u`` with ``length(0..u) = s``."""
        s = np.clip(np.asarray(s, dtype=float), 0.0, self._length)
        j = np.clip(np.searchsorted(self._s, s, side="right") - 1, 0, len(self._u) - 2)
        u0, s0 = self._u[j], self._s[j]
        u = np.interp(s, self._s, self._u)
        for _ in range(30):
            resid = s0 + self._gl_length(u0, u) - s
            step = resid / self.speed(u)
            u = np.clip(u - step, self._u[j], self._u[j + 1])
            if np.max(np.abs(step), initial=0.0) < 1e-14 * max(1.0, self.knots[-1]):
                break
        return u

    def curvature_at_parameter(self, u):
        d1 = self._spline(u, 1)
        d2 = self._spline(u, 2)
        sp = np.hypot(d1[..., 0], d1[..., 1])
        if np.any(sp < 1e-12):
            raise DegeneratePathError("path speed vanishes at a sample")
        return (d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0]) / sp**3

    def point_at_parameter(self, u):
        return self._spline(u)

    def __call__(self, s):
        return self.curvature_at_parameter(self.parameter_at(s))

    def sample(self, grid: Grid) -> SampledFunction:
        return spline_curvature(self, grid)


def spline_curvature(waypoints, grid: Grid) -> SampledFunction:
    """Signed curvature of the spline through ``waypoints`` at the grid's arc lengths."""
    path = waypoints if isinstance(waypoints, SplinePath) else SplinePath(waypoints)
    if abs(path.length - grid.s_f) > 1e-6 * path.length:
        raise ValueError(f"grid length {grid.s_f} does not match path length {path.length}")
    s = grid.points * (path.length / grid.s_f)
    return SampledFunction(grid, path(s))


@dataclass(frozen=True)
class SampledCurvature:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def length(self):
        return None

    def sample(self, grid: Grid) -> SampledFunction:
        return SampledFunction(grid, self.values)


CurvatureModel = Union[PiecewiseHermite, SplinePath, SampledCurvature]


# --------------------------------------------------------------------------- bounds

BoundValue = Union[float, Sequence[float], np.ndarray]


def _sample(value: BoundValue, grid: Grid, name: str) -> np.ndarray:
    arr = np.array(value, dtype=float)
    if arr.ndim == 0:
        arr = np.full(len(grid), float(arr))
    if arr.shape != (len(grid),):
        raise ValueError(f"bound {name!r} has {arr.size} samples, grid has {len(grid)}")
    return arr


@dataclass(frozen=True)
class BoundSet:
    """Speed, longitudinal and normal acceleration limits.

    Each limit is either a constant or an array of grid samples.  ``v_start``
    and ``v_end``, when given, pin the speed at ``s = 0`` and ``s = s_f``
    (both ``v_minus`` and ``v_plus`` take that value there).  ``alpha_*``
    bound the slope of the squared speed ``w = v**2``.
    """

    v_plus: BoundValue
    alpha_plus: BoundValue
    alpha_minus: BoundValue
    beta: BoundValue
    v_minus: BoundValue = 0.0
    v_start: float | None = None
    v_end: float | None = None

    def speed_bounds(self, grid: Grid) -> tuple[np.ndarray, np.ndarray]:
        lo = _sample(self.v_minus, grid, "v_minus")
        hi = _sample(self.v_plus, grid, "v_plus")
        for idx, v in ((0, self.v_start), (-1, self.v_end)):
            if v is not None:
                lo[idx] = hi[idx] = v
        return lo, hi

    def sampled(self, grid: Grid) -> dict[str, SampledFunction]:
        lo, hi = self.speed_bounds(grid)
        out = {
            "v_minus": lo,
            "v_plus": hi,
            "alpha_plus": _sample(self.alpha_plus, grid, "alpha_plus"),
            "alpha_minus": _sample(self.alpha_minus, grid, "alpha_minus"),
            "beta": _sample(self.beta, grid, "beta"),
        }
        return {k: SampledFunction(grid, v) for k, v in out.items()}

    def check(self, grid: Grid) -> None:
        b = self.sampled(grid)
        if np.any(b["v_minus"].values < 0):
            raise InconsistentBoundsError("v_minus must be non-negative")
        bad = np.flatnonzero(b["v_minus"].values > b["v_plus"].values)
        if bad.size:
            i = int(bad[0])
            raise InconsistentBoundsError(
                f"v_minus > v_plus at s={grid.points[i]:g} (index {i}): "
                f"{b['v_minus'][i]:g} > {b['v_plus'][i]:g}"
            )
        if np.any(b["alpha_plus"].values < 0):
            raise InconsistentBoundsError("alpha_plus must be >= 0")
        if np.any(b["alpha_minus"].values > 0):
            raise InconsistentBoundsError("alpha_minus must be <= 0")
        if np.any(b["beta"].values < 0):
            raise InconsistentBoundsError("beta must be >= 0")


@dataclass(frozen=True)
class Envelope:
    mu_minus: SampledFunction
    mu_plus: SampledFunction


@dataclass(frozen=True)
class ProblemSpec:
    grid: Grid
    curvature: CurvatureModel
    bounds: BoundSet
    kappa_eps: float = KAPPA_EPS
    _k: SampledFunction = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        length = self.curvature.length
        if length is not None and abs(length - self.grid.s_f) > 1e-6 * length:
            raise ValueError(f"grid length {self.grid.s_f} != path length {length}")
        object.__setattr__(self, "_k", self.curvature.sample(self.grid))

    @property
    def k(self) -> SampledFunction:
        return self._k


def build_envelope(spec: ProblemSpec) -> Envelope:
    """Squared-speed bounds ``mu_minus = v_minus**2`` and ``mu_plus = v_plus**2 ^ beta/|k|``.

    The lateral term is dropped where ``|k| < spec.kappa_eps``.
    """
    grid = spec.grid
    spec.bounds.check(grid)
    b = spec.bounds.sampled(grid)
    absk = np.abs(spec.k.values)
    mu_plus = b["v_plus"].values ** 2
    curved = absk >= spec.kappa_eps
    lateral = np.divide(b["beta"].values, absk, out=np.full(len(grid), np.inf), where=curved)
    mu_plus = np.minimum(mu_plus, lateral)
    mu_minus = b["v_minus"].values ** 2
    # endpoint pins override both caps
    for idx, v in ((0, spec.bounds.v_start), (-1, spec.bounds.v_end)):
        if v is not None:
            mu_plus[idx] = mu_minus[idx] = v * v
    return Envelope(SampledFunction(grid, mu_minus), SampledFunction(grid, mu_plus))
