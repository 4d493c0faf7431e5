import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hilldro.elliptic import CONSTANTS
from hilldro.epicyclic import EpicyclicState, cartesian_to_epicyclic_array, from_epicyclic, \
    to_epicyclic
from hilldro.hill import CartesianState, HillContext, propagate
from hilldro.short_period import (DIRECT, INVERSE, correction_terms, mean_to_osculating,
                                  mean_to_osculating_array, osculating_cartesian,
                                  osculating_to_mean, osculating_to_mean_array)

CASE1 = CartesianState(0.0, 10.0, -0.5, -0.1)
CASE2 = CartesianState(0.1, 20.0, -10.5, -0.1)
k = CONSTANTS.k


def state(phi, xi, eta, Phi, flavor="osculating"):
    b = math.sqrt(2 * Phi)
    return EpicyclicState(phi, eta * b / k, Phi, xi * 2 * k * b, 0.0, flavor)


def round_trip_defect(s):
    r = mean_to_osculating(osculating_to_mean(s))
    b = math.sqrt(2 * s.Phi)
    return max(abs(r.phi - s.phi), abs(r.q - s.q) / b, abs(r.Phi - s.Phi) / s.Phi,
               abs(r.Q - s.Q) / b)


def test_identity_without_gravity():
    ctx = HillContext(mu=0.0)
    s = EpicyclicState(0.4, 1.0, 20.0, 0.3)
    m = osculating_to_mean(s, ctx)
    assert m.as_array() == pytest.approx(s.as_array(), abs=0) and m.flavor == "mean"
    assert mean_to_osculating(m, ctx).as_array() == pytest.approx(s.as_array(), abs=0)
    assert osculating_cartesian(m, ctx).as_array() == pytest.approx(from_epicyclic(s, ctx).as_array(), abs=0)


def test_flavor_checks():
    s = EpicyclicState(0.0, 0.0, 20.0, 0.0)
    with pytest.raises(ValueError):
        mean_to_osculating(s)
    with pytest.raises(ValueError):
        osculating_to_mean(s.with_flavor("mean"))
    with pytest.raises(ValueError):
        correction_terms(0.0, 0.0, 20.0, 0.0, direction="sideways")


def test_first_order_action_at_zero_phase():
    # the starred integrals vanish and Delta = 1 at phi = 0
    t = correction_terms(0.0, 0.0, 12.5, 0.0)
    assert t.dPhi[0] == pytest.approx(1 - 2 * CONSTANTS.Ktilde, abs=1e-15)
    assert t.dPhi[0] == pytest.approx(-0.3728805, abs=1e-7)


def test_case1_mean_action():
    m = osculating_to_mean(to_epicyclic(CASE1))
    assert m.Phi == pytest.approx(45.1237, abs=5e-4)


@settings(max_examples=40, deadline=None)
@given(st.floats(-6, 6), st.floats(-0.1, 0.1), st.floats(-0.3, 0.3), st.floats(15.0, 200.0))
def test_corrections_respect_point_reflection(phi, xi, eta, Phi):
    # (x, y, X, Y) -> -(x, y, X, Y) is phi -> phi + pi, xi -> -xi, eta -> -eta:
    # phase and action corrections are even, q and Q corrections odd. The
    # log 8 (Delta + k c)^2 terms of sixth order break this by constants only,
    # because (Delta + k c)(Delta - k c) = 1/4.
    st0 = state(phi, xi, eta, Phi)
    offsets = {"dphi": -xi * k * math.log(4), "dq": -0.25 * math.log(4)}
    for direction, flip in ((DIRECT, 1), (INVERSE, -1)):
        a = correction_terms(st0.phi, st0.q, Phi, st0.Q, direction=direction)
        b = correction_terms(st0.phi + math.pi, -st0.q, Phi, -st0.Q, direction=direction)
        for name, sign in (("dphi", 1), ("dq", -1), ("dPhi", 1), ("dQ", -1)):
            for order, (x, y) in enumerate(zip(getattr(a, name), getattr(b, name)), 1):
                expected = flip * offsets.get(name, 0.0) if order == 6 else 0.0
                assert abs(y - sign * x - expected) <= 1e-12 * max(1.0, abs(x)), (name, order)


@pytest.mark.parametrize("Phi", [15.0, 45.0, 200.0])
def test_corrections_are_pi_periodic_at_the_center(Phi):
    # terms free of xi and eta are pi-periodic on their own
    phi = np.linspace(-3 * np.pi, 3 * np.pi, 61)
    a = correction_terms(phi, 0.0, Phi, 0.0)
    b = correction_terms(phi + np.pi, 0.0, Phi, 0.0)
    for order in (0, 4):
        assert np.max(np.abs(a.dphi[order] - b.dphi[order])) < 1e-12
        assert np.max(np.abs(a.dPhi[order] - b.dPhi[order])) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.floats(-6, 6), st.floats(-0.1, 0.1), st.floats(-0.3, 0.3), st.floats(20.0, 120.0))
def test_round_trip_defect_is_second_order(phi, xi, eta, Phi):
    # halving gamma means raising Phi by 2^(2/3) at fixed scaled geometry
    d1 = round_trip_defect(state(phi, xi, eta, Phi))
    d2 = round_trip_defect(state(phi, xi, eta, Phi * 2 ** (2 / 3)))
    if d1 < 1e-12:  # nothing left to measure
        return
    assert 3.5 <= d1 / d2 <= 4.5


def test_round_trip_first_order_is_removed():
    s = to_epicyclic(CASE2)
    m = osculating_to_mean(s)
    first = abs(m.Phi - s.Phi) / s.Phi
    assert first > 1e-4
    assert round_trip_defect(s) < 1e-2 * first


@pytest.mark.xfail(strict=True, reason="defect is 1.1 gamma^2 = 1.55e-6 for this state")
def test_round_trip_case2_bound():
    s = to_epicyclic(CASE2)
    r = mean_to_osculating(osculating_to_mean(s))
    assert abs(r.Phi - s.Phi) / s.Phi < 1e-6


def test_array_forms_match_scalar_forms():
    traj = propagate(CASE2, t_final=10.0, sample_dt=1.0)
    el = cartesian_to_epicyclic_array(traj.states)
    mean = osculating_to_mean_array(el)
    for row, m in zip(el, mean):
        ref = osculating_to_mean(EpicyclicState.from_array(row))
        assert m == pytest.approx(ref.as_array(), abs=1e-13)
    back = mean_to_osculating_array(mean)
    assert back.shape == el.shape


def test_mean_action_is_smooth_along_a_true_orbit():
    # short-period ripple of q' after removing a slow cubic trend; a sign
    # error in the third-order q correction raises it by about 50x
    traj = propagate(CASE2, t_final=40.0, sample_dt=0.02)
    el = osculating_to_mean_array(cartesian_to_epicyclic_array(traj.states))
    q, t = el[:, 1], traj.t
    ripple = q - np.polyval(np.polyfit(t, q, 3), t)
    assert np.max(np.abs(ripple)) / math.sqrt(2 * el[0, 2]) < 2e-4
    Phi = el[:, 2]
    assert np.ptp(Phi) / Phi[0] < 2e-5


def test_initial_point_defect_is_reduced():
    m = osculating_to_mean(to_epicyclic(CASE2))
    a = 2 * math.sqrt(2 * m.Phi)
    u = CASE2.as_array()
    mean_only = np.hypot(*(from_epicyclic(m.with_flavor("osculating")).as_array() - u)[:2]) / a
    corrected = np.hypot(*(osculating_cartesian(m).as_array() - u)[:2]) / a
    assert 0 < corrected < mean_only
