"""Fast O(n) minimum-time planner.

``forward`` propagates the acceleration limit from the start, ``backward``
propagates the braking limit from the end; both are clipped by the envelope
at every step.  Their pointwise minimum applied to the upper envelope is the
optimal squared-speed profile, and the problem is feasible exactly when that
profile stays above the lower envelope.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .lattice_fn import SampledFunction, derivative, leq, meet
from .problem import Envelope, ProblemSpec, build_envelope

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    index: int
    s: float
    bound: str
    magnitude: float


@dataclass(frozen=True)
class PlanResult:
    feasible: bool
    w_star: SampledFunction
    v_star: SampledFunction
    total_time: float
    cumulative_time: np.ndarray
    a_long: SampledFunction
    a_norm: SampledFunction
    envelope: Envelope
    forward: SampledFunction
    backward: SampledFunction
    curvature: SampledFunction
    eps_feas: float
    violations: list[Violation] = field(default_factory=list)


def forward(mu: SampledFunction, alpha_plus: SampledFunction) -> SampledFunction:
    """Accelerate from ``mu(0)`` at slope ``alpha_plus``, never exceeding ``mu``."""
    m = mu.values
    step = alpha_plus.step_integrals()
    phi = np.empty_like(m)
    phi[0] = m[0]
    for i in range(len(step)):
        phi[i + 1] = min(m[i + 1], phi[i] + step[i])
    return mu.with_values(phi)


def backward(mu: SampledFunction, alpha_minus: SampledFunction) -> SampledFunction:
    """Mirror of :func:`forward`: brake into ``mu(s_f)`` at slope ``alpha_minus``."""
    m = mu.values
    step = alpha_minus.step_integrals()
    phi = np.empty_like(m)
    phi[-1] = m[-1]
    for i in range(len(step) - 1, -1, -1):
        phi[i] = min(m[i], phi[i + 1] - step[i])
    return mu.with_values(phi)


def meet_operator(mu: SampledFunction, alpha_minus: SampledFunction,
                  alpha_plus: SampledFunction) -> SampledFunction:
    return meet(forward(mu, alpha_plus), backward(mu, alpha_minus))


def maneuver_time(w: SampledFunction, eps: float | None = None) -> tuple[float, np.ndarray]:
    """Travel time ``int w^{-1/2} ds`` for ``w`` linear on each cell.

    Returns ``(total, t)`` with ``t[i]`` the time to reach ``s_i``.  A cell whose
    both ends are at rest contributes ``inf``.
    """
    v = w.values
    if eps is None:
        eps = 1e-9 * max(1.0, w.sup_norm())
    if np.any(v < -eps):
        i = int(np.argmin(v))
        raise ValueError(f"negative squared speed {v[i]:g} at index {i}")
    v = np.maximum(v, 0.0)
    w_eps = 1e-12 * max(1.0, float(v.max()))
    a, b = v[:-1], v[1:]
    ra, rb = np.sqrt(a), np.sqrt(b)
    at_rest = (a < w_eps) & (b < w_eps)
    with np.errstate(divide="ignore"):
        # 2(sqrt(b)-sqrt(a))/slope rewritten without the cancellation
        dt = np.where(at_rest, np.inf, 2.0 * w.grid.h / (ra + rb))
    t = np.concatenate(([0.0], np.cumsum(dt)))
    return float(t[-1]), t


def feasibility_tolerance(mu_plus: SampledFunction) -> float:
    return 1e-6 * max(1.0, mu_plus.sup_norm())


def _violations(spec_bounds, env, w_star, k, eps, s):
    out = []
    w = w_star.values
    gap = env.mu_minus.values - w
    for i in np.flatnonzero(gap > eps):
        out.append(Violation(int(i), float(s[i]), "mu_minus", float(gap[i])))
    over = w - env.mu_plus.values
    for i in np.flatnonzero(over > eps):
        out.append(Violation(int(i), float(s[i]), "mu_plus", float(over[i])))

    slope = np.diff(w) / w_star.grid.h
    scale = max(1.0, np.abs(spec_bounds["alpha_plus"].values).max(),
                np.abs(spec_bounds["alpha_minus"].values).max())
    eps_d = 1e-7 * scale
    hi = spec_bounds["alpha_plus"].step_integrals() / w_star.grid.h
    lo = spec_bounds["alpha_minus"].step_integrals() / w_star.grid.h
    for i in np.flatnonzero(slope > hi + eps_d):
        out.append(Violation(int(i), float(s[i]), "alpha_plus", float(slope[i] - hi[i])))
    for i in np.flatnonzero(slope < lo - eps_d):
        out.append(Violation(int(i), float(s[i]), "alpha_minus", float(lo[i] - slope[i])))

    lateral = np.abs(k.values) * w - spec_bounds["beta"].values
    for i in np.flatnonzero(lateral > eps):
        out.append(Violation(int(i), float(s[i]), "beta", float(lateral[i])))
    return out


def plan(spec: ProblemSpec, eps_feas: float | None = None) -> PlanResult:
    """Solve the minimum-time problem on ``spec``'s grid.

    Infeasible problems still return the candidate profile together with the
    grid points where it falls below the lower envelope.
    """
    env = build_envelope(spec)
    bounds = spec.bounds.sampled(spec.grid)
    a_plus, a_minus = bounds["alpha_plus"], bounds["alpha_minus"]
    if eps_feas is None:
        eps_feas = feasibility_tolerance(env.mu_plus)

    fwd = forward(env.mu_plus, a_plus)
    bwd = backward(env.mu_plus, a_minus)
    w_star = meet(fwd, bwd)
    feasible = leq(env.mu_minus, w_star, eps_feas)

    w_clamped = np.where(w_star.values < 0, 0.0, w_star.values)
    v_star = w_star.with_values(np.sqrt(w_clamped))
    total, t = maneuver_time(w_star, eps=eps_feas)
    if not np.isfinite(total):
        log.warning("profile rests at an interior cell; maneuver time is infinite")
    a_long = derivative(w_star)
    a_norm = w_star.with_values(np.abs(spec.k.values) * w_clamped)

    violations = _violations(bounds, env, w_star, spec.k, eps_feas, spec.grid.points)
    if violations:
        log.info("%d constraint violations (feasible=%s)", len(violations), feasible)
    return PlanResult(
        feasible=feasible,
        w_star=w_star,
        v_star=v_star,
        total_time=total,
        cumulative_time=t,
        a_long=a_long,
        a_norm=a_norm,
        envelope=env,
        forward=fwd,
        backward=bwd,
        curvature=spec.k,
        eps_feas=eps_feas,
        violations=violations,
    )
