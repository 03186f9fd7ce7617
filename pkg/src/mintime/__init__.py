"""Exact minimum-time speed profiles along a fixed path."""

from .lattice_fn import Grid, SampledFunction, derivative, join, leq, meet
from .problem import (BoundSet, Envelope, PiecewiseHermite, ProblemSpec, SampledCurvature,
                      SplinePath, build_envelope, hermite_transition, spline_curvature)
from .solver import PlanResult, backward, forward, maneuver_time, meet_operator, plan

__all__ = [
    "Grid", "SampledFunction", "meet", "join", "leq", "derivative",
    "BoundSet", "Envelope", "PiecewiseHermite", "ProblemSpec", "SampledCurvature", "SplinePath",
    "build_envelope", "hermite_transition", "spline_curvature",
    "PlanResult", "forward", "backward", "meet_operator", "maneuver_time", "plan",
]
