"""Smoke tests for the Python bindings.

The numerical depth lives in the C++ suites; these check that the main
operations are reachable from Python with numpy round-trips intact.
"""

import json
import math
import os

import numpy as np
import pytest

import tdmjls

SCENARIOS = os.environ.get(
    "TDMJLS_SCENARIO_DIR",
    os.path.join(os.path.dirname(__file__), "..", "..", "scenarios"),
)


@pytest.fixture(scope="module")
def e1():
    return tdmjls.load_scenario(os.path.join(SCENARIOS, "e1.json"))


def test_scenario_loads_and_validates(e1):
    report = tdmjls.validate(e1)
    assert report.all_passed()
    assert e1.mdp.num_states == 2
    assert e1.mdp.transition.shape == (2, 2)
    assert e1.alpha == pytest.approx(0.1)


def test_validation_failure_raises():
    bad = os.path.join(SCENARIOS, "e1.json")
    sc = tdmjls.parse_scenario(bad)
    net = tdmjls.CommNetwork(np.eye(2))
    report = tdmjls.validate_scenario(sc.mdp, net)
    assert not report.all_passed()
    names = [c.name for c in report.checks if not c.passed]
    assert any("connected" in n for n in names)


def test_trajectory_matches_enumeration(e1):
    theta0 = np.ones((1, 2))
    traj = tdmjls.error_trajectory(
        e1.mdp, e1.net, e1.initial_state_dist, e1.alpha, theta0, 6
    )
    oracle = tdmjls.enumerate_error(
        e1.mdp, e1.net, e1.initial_state_dist, e1.alpha, theta0, 6
    )
    np.testing.assert_allclose(traj.deltas, oracle, atol=1e-10)
    assert traj.deltas[0] == pytest.approx(1.0)


def test_spectrum_and_steady_state(e1):
    chain = tdmjls.build_jump_chain(e1.mdp, e1.initial_state_dist)
    dyn = tdmjls.mean_dynamics(e1.mdp, chain)
    modes = tdmjls.build_modes(e1.mdp, e1.net, chain, e1.alpha, dyn)
    lti = tdmjls.assemble_lti(modes, chain)
    assert lti.assembled_explicitly

    rep = tdmjls.spectrum_report(lti, chain, dyn, e1.alpha)
    assert rep.stable
    assert rep.sr_h22 == pytest.approx(0.8125, abs=1e-12)

    ss = tdmjls.steady_state(modes, chain, lti)
    assert ss.delta_inf > 0
    assert ss.method == tdmjls.SteadyState.Method.direct

    with pytest.raises(tdmjls.UnstableSystemError):
        modes0 = tdmjls.build_modes(e1.mdp, e1.net, chain, 0.0, dyn)
        tdmjls.steady_state(modes0, chain, tdmjls.assemble_lti(modes0, chain))


def test_monte_carlo_and_reproducibility(e1):
    theta0 = np.zeros((1, 2))
    mc1 = tdmjls.monte_carlo_error(
        e1.mdp, e1.net, e1.initial_state_dist, e1.alpha, theta0, 10, 500, 7
    )
    mc2 = tdmjls.monte_carlo_error(
        e1.mdp, e1.net, e1.initial_state_dist, e1.alpha, theta0, 10, 500, 7
    )
    assert mc1.deltas_hat == mc2.deltas_hat
    assert mc1.deltas_hat[0] == 0.0
    assert all(s >= 0 for s in mc1.stderrs)

    run = tdmjls.run_td0(e1.mdp, e1.net, e1.initial_state_dist, e1.alpha, theta0, 5, 3)
    assert len(run.weights) == 6
    assert len(run.state_path) == 7


def test_alpha_sweep(e1):
    sweep = tdmjls.alpha_sweep(
        e1.mdp, e1.net, e1.initial_state_dist, [0.02, 0.01, 0.005]
    )
    assert len(sweep.records) == 3
    assert all(r.stable for r in sweep.records)
    assert math.isfinite(sweep.loglog_slope_delta)
    assert sweep.h22_slope == pytest.approx(2.0 * sweep.max_re_a_bar, rel=0.05)


def test_mean_dynamics_values(e1):
    chain = tdmjls.build_jump_chain(e1.mdp, e1.initial_state_dist)
    dyn = tdmjls.mean_dynamics(e1.mdp, chain)
    assert dyn.a_bar[0, 0] == pytest.approx(-1.0, abs=1e-14)
    assert dyn.theta_star[0] == pytest.approx(0.0, abs=1e-14)
    assert chain.mixing_rate == pytest.approx(0.0, abs=1e-12)
