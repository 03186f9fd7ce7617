"""Acceptance criteria; ``pytest tests/test_acceptance.py`` prints one line per criterion."""

import time

import numpy as np
import pytest

from mintime.lattice_fn import Grid, SampledFunction, leq, meet
from mintime.oracle import HemiMetricTable, brute_meet, check_hemimetric
from mintime.problem import build_envelope
from mintime.problem_file import preset
from mintime.solver import maneuver_time, meet_operator, plan

from .helpers import discrete_feasible, random_below, random_instance

# Example 2 terminal gap mu_minus(s_f) - w*(s_f) at n=4000, computed by the
# brute-force oracle (brute_meet) and frozen after the first verified run.
EX2_GAP_GOLDEN = 503.5619717371044
L3, L4 = 124.2478, 134.2478

pytestmark = pytest.mark.usefixtures("criterion")


def rng_for(tag):
    return np.random.default_rng(sum(map(ord, tag)))


@pytest.mark.criterion("AC1", "example1 feasible, w*(0)=0, w*(s_f)=484, < 1 s")
def test_ac1_example1_feasible():
    t0 = time.perf_counter()
    result = plan(preset("example1").to_spec())
    elapsed = time.perf_counter() - t0
    assert result.w_star.grid.n == 4000
    assert result.feasible
    assert result.w_star[0] == 0.0
    assert result.w_star[-1] == pytest.approx(484.0, rel=1e-6)
    assert elapsed < 1.0


@pytest.mark.criterion("AC2", "example2 infeasible at s_f, w*(s_f) < 1225, gap matches oracle golden")
def test_ac2_example2_infeasible():
    spec = preset("example2").to_spec()
    result = plan(spec)
    assert not result.feasible
    assert {v.s for v in result.violations if v.bound == "mu_minus"} == {200.0}
    assert result.w_star[-1] < 1225.0

    env = build_envelope(spec)
    b = spec.bounds.sampled(spec.grid)
    oracle = brute_meet(env.mu_plus, HemiMetricTable.build(b["alpha_minus"], b["alpha_plus"]))
    tol = 1e-9 * env.mu_plus.sup_norm()
    assert 1225.0 - oracle[-1] == pytest.approx(EX2_GAP_GOLDEN, abs=tol)
    assert result.violations[0].magnitude == pytest.approx(EX2_GAP_GOLDEN, abs=tol)
    # terminal limits bind: the end is reached accelerating, the braking sweep is inactive there
    assert result.w_star[-1] == result.forward[-1] < result.backward[-1]


@pytest.mark.criterion("AC3", "example1 profile: 420 plateau, slope 4 ramps, -10.5 braking")
def test_ac3_example1_shape():
    result = plan(preset("example1").to_spec())
    s, w, h = result.w_star.s, result.w_star.values, result.w_star.grid.h
    slope = np.diff(w) / h
    left = s[:-1]

    plateau = (s >= 105.0 - 1e-9) & (s <= L3)
    assert np.abs(w[plateau] - 420.0).max() <= 1e-6
    assert np.all(w[s < 105.0 - 1e-9] < 420.0)

    ramp_in = left < 105.0 - 1e-9
    np.testing.assert_allclose(slope[ramp_in], 4.0, rtol=1e-9)

    peak = s[np.argmax(w)]
    ramp_out = (left >= L4) & (left < peak - h / 2)
    braking = left > peak + h / 2
    assert ramp_out.sum() > 100 and braking.sum() > 100
    np.testing.assert_allclose(slope[ramp_out], 4.0, rtol=1e-9)
    np.testing.assert_allclose(slope[braking], -10.5, rtol=1e-9)


@pytest.mark.criterion("AC4", "fast solver equals brute-force oracle on 100 random instances, < 60 s")
def test_ac4_oracle_equivalence():
    rng = rng_for("AC4")
    t0 = time.perf_counter()
    worst = 0.0
    for trial in range(100):
        n = (100, 500, 2000)[trial % 3]
        _, mu, am, ap = random_instance(rng, n=n)
        fast = meet_operator(mu, am, ap)
        slow = brute_meet(mu, HemiMetricTable.build(am, ap))
        gap = np.abs(fast.values - slow.values).max() / mu.sup_norm()
        worst = max(worst, gap)
        assert gap <= 1e-9, f"trial {trial}: relative gap {gap:g}"
    assert time.perf_counter() - t0 < 60.0


@pytest.mark.criterion("AC5", "lattice properties and fixed-point feasibility on 100 random instances")
def test_ac5_proposition_suite():
    rng = rng_for("AC5")
    for trial in range(100):
        _, mu, am, ap = random_instance(rng, n=(100, 300)[trial % 2])
        eps = 1e-9 * mu.sup_norm()
        w = meet_operator(mu, am, ap)

        assert leq(w, mu, 0.0)  # dominance
        np.testing.assert_allclose(meet_operator(w, am, ap).values, w.values, rtol=0, atol=eps)

        lower = random_below(rng, mu)
        assert leq(meet_operator(lower, am, ap), w, 0.0)  # order preserving
        other = random_instance(rng, n=mu.grid.n, s_f=mu.grid.s_f)[1]
        np.testing.assert_allclose(
            meet_operator(meet(mu, other), am, ap).values,
            meet(w, meet_operator(other, am, ap)).values, rtol=0, atol=eps)

        report = check_hemimetric(HemiMetricTable.build(am, ap), rng=rng)
        assert report.ok, report.violations[:3]

        mu_minus = mu.with_values(np.minimum(mu.values, rng.uniform(0, 100)) * rng.random())
        for cand in (w, meet_operator(lower, am, ap), lower, mu):
            fixed = np.allclose(meet_operator(cand, am, ap).values, cand.values, rtol=0, atol=eps)
            inside = leq(mu_minus, cand, eps) and leq(cand, mu, eps)
            assert discrete_feasible(cand, mu_minus, mu, am, ap, eps) == (fixed and inside)


@pytest.mark.criterion("AC6", "w* dominates every alternative feasible profile and is fastest")
def test_ac6_supremal_optimality():
    rng = rng_for("AC6")
    instances = kept = 0
    while instances < 50:
        _, mu_plus, am, ap = random_instance(rng, n=300)
        w_star = meet_operator(mu_plus, am, ap)
        mu_minus = w_star.with_values(w_star.values * rng.uniform(0, 0.6) * rng.random(len(w_star)))
        if not leq(mu_minus, w_star, 0.0):
            continue
        instances += 1
        t_star = maneuver_time(w_star)[0]
        for _ in range(20):
            w = meet_operator(random_below(rng, mu_plus), am, ap)
            if not leq(mu_minus, w, 0.0):
                continue
            kept += 1
            assert leq(w, w_star, 0.0)
            assert maneuver_time(w)[0] >= t_star - 1e-9
    assert kept >= 200


@pytest.mark.criterion("AC7", "trapezoid instance matches closed form; maneuver time matches ramp integral")
def test_ac7_trapezoid():
    s_f, a, n = 120.0, 2.5, 4000
    g = Grid(s_f, n)
    s = g.points
    am, ap = SampledFunction.constant(g, -a), SampledFunction.constant(g, a)
    for C in (1e9, 100.0):
        mu = np.full(n + 1, C)
        mu[0] = mu[-1] = 0.0
        w = meet_operator(SampledFunction(g, mu), am, ap)
        expected = np.minimum.reduce([a * s, a * (s_f - s), np.full_like(s, C)])
        assert np.abs(w.values - expected).max() <= 1e-9
        total = maneuver_time(w)[0]
        if C == 1e9:
            closed = 2 * 2 * np.sqrt((s_f / 2) / a)
        else:
            ramp = C / a  # length of each ramp
            closed = 2 * 2 * np.sqrt(ramp / a) + (s_f - 2 * ramp) / np.sqrt(C)
        assert total == pytest.approx(closed, rel=1e-6)


@pytest.mark.criterion("AC8", "example1 grid refinement: first-order decay of w* differences")
def test_ac8_grid_convergence():
    base = preset("example1")
    w = {n: plan(base.with_overrides(n=n).to_spec()).w_star.values for n in (4000, 8000, 16000)}
    mu_norm = build_envelope(base.to_spec()).mu_plus.sup_norm()
    d1 = np.abs(w[4000] - w[8000][::2]).max()
    d2 = np.abs(w[8000] - w[16000][::2]).max()
    assert d1 <= 2 * d2 + 1e-9 * mu_norm


@pytest.mark.criterion("AC9", "example3 feasible, v* <= 1.3, rest at both ends, touches beta/|k|")
def test_ac9_example3():
    spec = preset("example3").to_spec()
    result = plan(spec)
    assert result.feasible
    v = result.v_star.values
    assert v.max() <= 1.3
    assert v[0] == 0.0 and v[-1] == 0.0

    absk = np.abs(spec.k.values)
    lateral = np.divide(0.05, absk, out=np.full_like(absk, np.inf), where=absk > 0)
    w = result.w_star.values
    eps = result.eps_feas
    touching = (np.abs(w - lateral) <= eps) & (lateral < 1.3**2)
    touching[[0, -1]] = False
    assert touching.sum() >= 2
