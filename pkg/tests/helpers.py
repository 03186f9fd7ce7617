"""Random instance generators shared by the property and acceptance suites."""

import numpy as np

from mintime.lattice_fn import Grid, SampledFunction


def piecewise_constant(rng, grid, lo, hi, pieces=None):
    pieces = pieces or int(rng.integers(1, 6))
    cuts = np.sort(rng.choice(np.arange(1, grid.n), size=pieces - 1, replace=False)) if pieces > 1 else []
    levels = rng.uniform(lo, hi, size=pieces)
    idx = np.searchsorted(cuts, np.arange(grid.n + 1), side="right")
    return SampledFunction(grid, levels[idx])


def piecewise_linear(rng, grid, lo, hi, pieces=None):
    pieces = pieces or int(rng.integers(2, 8))
    knots = np.sort(rng.uniform(0, grid.s_f, size=pieces))
    knots = np.concatenate(([0.0], knots, [grid.s_f]))
    vals = rng.uniform(lo, hi, size=knots.size)
    return SampledFunction(grid, np.interp(grid.points, knots, vals))


def random_instance(rng, n=None, s_f=None):
    """Random (grid, mu_plus, alpha_minus, alpha_plus) with piecewise-constant slope bounds."""
    n = n or int(rng.choice([100, 500, 2000]))
    grid = Grid(s_f or float(rng.uniform(10, 300)), n)
    a_plus = piecewise_constant(rng, grid, 0.5, 8.0)
    a_minus = piecewise_constant(rng, grid, -12.0, -0.5)
    mu = piecewise_linear(rng, grid, 0.0, 1500.0).values.copy()
    # occasionally pin the ends at (near) rest, like a real start/stop problem
    if rng.random() < 0.5:
        mu[0] = rng.uniform(0, 10)
        mu[-1] = rng.uniform(0, 10)
    # occasional narrow dips stand in for tight corners
    for _ in range(int(rng.integers(0, 4))):
        i = int(rng.integers(0, n + 1))
        mu[max(0, i - 2): i + 3] = rng.uniform(0, 200)
    return grid, SampledFunction(grid, mu), a_minus, a_plus


def random_below(rng, mu):
    """Random function with values in ``[0, mu]`` pointwise."""
    frac = piecewise_linear(rng, mu.grid, 0.0, 1.0).values
    frac = np.where(rng.random() < 0.5, frac, np.clip(frac * 1.5, 0, 1))
    return mu.with_values(mu.values * frac)


def discrete_feasible(w, mu_minus, mu_plus, a_minus, a_plus, eps):
    """Direct constraint check: envelope plus per-cell slope limits."""
    dw = np.diff(w.values)
    return bool(
        np.all(w.values >= mu_minus.values - eps)
        and np.all(w.values <= mu_plus.values + eps)
        and np.all(dw <= a_plus.step_integrals() + eps)
        and np.all(dw >= a_minus.step_integrals() - eps)
    )
