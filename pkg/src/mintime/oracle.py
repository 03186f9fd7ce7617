"""Brute-force lattice operators built on the hemi-metric.

``A(i, j)`` is the largest rise of ``w`` the slope bounds allow when moving
from ``s_i`` to ``s_j`` (a drop when ``j < i`` is taken with its sign
flipped, so ``A >= 0``).  The optimal profile is then the infimum
``min_j mu_j + A(j, i)``, evaluated here by direct O(n^2) search.  This is
deliberately naive and shares no code path with :mod:`mintime.solver`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice_fn import Grid, SampledFunction


@dataclass(frozen=True)
class HemiMetricTable:
    grid: Grid
    cum_plus: np.ndarray
    cum_minus: np.ndarray

    @classmethod
    def build(cls, alpha_minus: SampledFunction, alpha_plus: SampledFunction) -> "HemiMetricTable":
        if alpha_minus.grid != alpha_plus.grid:
            raise ValueError("alpha bounds on different grids")
        return cls(alpha_plus.grid, alpha_plus.cumulative_integral(),
                   alpha_minus.cumulative_integral())

    def matrix(self, rows=slice(None)) -> np.ndarray:
        """``out[r, j] = A(j, i)`` for ``i`` in ``rows`` (target index per row)."""
        i = np.arange(len(self.cum_plus))[rows][:, None]
        j = np.arange(len(self.cum_plus))[None, :]
        up = self.cum_plus[i] - self.cum_plus[j]
        down = self.cum_minus[i] - self.cum_minus[j]
        return np.where(j <= i, up, down)


def A(table: HemiMetricTable, i: int, j: int) -> float:
    if j >= i:
        return float(table.cum_plus[j] - table.cum_plus[i])
    return float(table.cum_minus[j] - table.cum_minus[i])


def _A_vec(table: HemiMetricTable, i, j):
    return np.where(j >= i, table.cum_plus[j] - table.cum_plus[i], table.cum_minus[j] - table.cum_minus[i])


def _brute(mu: SampledFunction, table: HemiMetricTable, side: str, chunk: int = 512):
    if mu.grid != table.grid:
        raise ValueError("mu and table on different grids")
    m = mu.values
    size = len(m)
    out = np.empty(size)
    j = np.arange(size)[None, :]
    for start in range(0, size, chunk):
        rows = slice(start, min(start + chunk, size))
        cand = m[None, :] + table.matrix(rows)
        i = np.arange(size)[rows][:, None]
        if side == "forward":
            cand = np.where(j <= i, cand, np.inf)
        elif side == "backward":
            cand = np.where(j >= i, cand, np.inf)
        out[rows] = cand.min(axis=1)
    return mu.with_values(out)


def brute_meet(mu: SampledFunction, table: HemiMetricTable) -> SampledFunction:
    return _brute(mu, table, "both")


def brute_forward(mu: SampledFunction, table: HemiMetricTable) -> SampledFunction:
    return _brute(mu, table, "forward")


def brute_backward(mu: SampledFunction, table: HemiMetricTable) -> SampledFunction:
    return _brute(mu, table, "backward")


@dataclass
class HemiMetricReport:
    checked: int = 0
    violations: list[tuple[str, tuple[int, ...], float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_hemimetric(table: HemiMetricTable, tol: float = 1e-9, samples: int = 10_000,
                     rng: np.random.Generator | None = None) -> HemiMetricReport:
    """Check non-negativity, ``A(i,i) = 0`` and the triangle inequality.

    Monotone triples (``i <= j <= k`` or ``i >= j >= k``) must satisfy the
    triangle inequality with equality.  Grids with more than 50 intervals are
    checked on ``samples`` random triples, smaller ones exhaustively.
    """
    size = len(table.cum_plus)
    report = HemiMetricReport()
    scale = tol * max(1.0, np.abs(table.cum_plus).max(), np.abs(table.cum_minus).max())

    for i in range(size):
        if A(table, i, i) != 0.0:
            report.violations.append(("identity", (i,), A(table, i, i)))

    if size - 1 > 50:
        rng = rng or np.random.default_rng(0)
        triples = rng.integers(0, size, size=(samples, 3))
    else:
        g = np.arange(size)
        triples = np.stack(np.meshgrid(g, g, g, indexing="ij"), -1).reshape(-1, 3)

    i, j, k = triples.T
    a_ij, a_jk, a_ik = _A_vec(table, i, j), _A_vec(table, j, k), _A_vec(table, i, k)
    report.checked = len(triples)
    for pair, vals in (((i, j), a_ij), ((j, k), a_jk), ((i, k), a_ik)):
        for r in np.flatnonzero(vals < -scale):
            report.violations.append(("nonnegative", (int(pair[0][r]), int(pair[1][r])), float(vals[r])))
    excess = a_ik - (a_ij + a_jk)
    for r in np.flatnonzero(excess > scale):
        report.violations.append(("triangle", (int(i[r]), int(j[r]), int(k[r])), float(excess[r])))
    monotone = ((i <= j) & (j <= k)) | ((i >= j) & (j >= k))
    for r in np.flatnonzero(monotone & (np.abs(excess) > scale)):
        report.violations.append(("monotone_equality", (int(i[r]), int(j[r]), int(k[r])), float(excess[r])))
    return report
