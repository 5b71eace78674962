import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proxlab.amplify import (AmplifiedRoutine, ConfigurationError,
                             amplified_success, build_schedule,
                             exact_reject_probability, run_amplified,
                             stage_average_success, worst_case_invocations)
from proxlab.harness import rng_stream

from oracles import statevector_amplified_success


def test_identity_and_zero_cases():
    assert amplified_success(1.0, 0) == 1.0
    assert amplified_success(0.0, 7) == 0.0
    assert amplified_success(0.25, 1) == pytest.approx(1.0)  # sin^2(3*pi/6)


def test_no_iterations_is_the_base_probability():
    for p in np.linspace(0.0, 1.0, 33):
        assert amplified_success(p, 0) == pytest.approx(p, abs=1e-12)


def test_matches_statevector_on_dyadic_grid():
    # p = i/64 realised as i marked elements out of 64
    for i in range(65):
        p = i / 64
        for m in range(21):
            sv = statevector_amplified_success(64, i, m)
            assert amplified_success(p, m) == pytest.approx(sv, abs=1e-9)


def test_matches_statevector_p_one_tenth():
    # one marked element in a ten-element domain, two iterations
    sv = statevector_amplified_success(10, 1, 2)
    assert amplified_success(0.1, 2) == pytest.approx(sv, abs=1e-9)


def test_stage_average_matches_direct_mean():
    rng = np.random.default_rng(0)
    for _ in range(50):
        p = float(rng.random())
        cap = int(rng.integers(1, 40))
        direct = np.mean([amplified_success(p, m) for m in range(cap)])
        assert stage_average_success(p, cap) == pytest.approx(direct, abs=1e-12)


def test_schedule_respects_budget():
    for e in range(1, 22):
        gf = 2.0 ** -e
        caps = build_schedule(gf, 5.0)
        assert worst_case_invocations(caps) <= 5.0 / math.sqrt(gf) + 1e-9
        assert caps[0] == 1


def test_schedule_rejects_bad_floor():
    with pytest.raises(ConfigurationError):
        build_schedule(0.0, 5.0)
    with pytest.raises(ConfigurationError):
        build_schedule(-0.5, 5.0)


def test_exact_reject_probability_meets_two_thirds_on_grid():
    # the closed-form rejection rate of the fitted schedule, for both a
    # matched floor and a 4x overshoot
    for e in range(1, 11):
        g = 2.0 ** -e
        for gf in (g, g / 4):
            caps = build_schedule(gf, 5.0)
            assert exact_reject_probability(g, caps) >= 0.69, (g, gf)


def test_one_sided_composition():
    # base never rejects -> accept always; base always rejects -> reject always
    rng = rng_stream(3, 0)
    for p, expected in ((0.0, True), (1.0, False)):
        routine = AmplifiedRoutine(rejection_probability=p, gamma_floor=0.25)
        for _ in range(200):
            assert run_amplified(routine, rng).accept is expected


def test_monte_carlo_rejection_rate_small_base():
    # base rejects with probability 0.01 at a matched floor
    routine = AmplifiedRoutine(rejection_probability=0.01, gamma_floor=0.01)
    rejects = 0
    trials = 10 ** 4
    for t in range(trials):
        trace = run_amplified(routine, rng_stream(5, t))
        rejects += not trace.accept
        assert trace.modeled_quantum_queries <= 5.0 / math.sqrt(0.01) + 1e-9
    # Wilson 95% lower bound above 2/3
    phat = rejects / trials
    low = phat - 1.96 * math.sqrt(phat * (1 - phat) / trials)
    assert low >= 2 / 3


def test_same_seed_same_trace():
    routine = AmplifiedRoutine(rejection_probability=0.3, gamma_floor=0.1,
                               cost_multiplier=7)
    t1 = run_amplified(routine, rng_stream(42, 0))
    t2 = run_amplified(routine, rng_stream(42, 0))
    assert t1 == t2


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0),
       st.integers(min_value=0, max_value=50))
def test_amplified_success_is_a_probability(p, m):
    val = amplified_success(p, m)
    assert 0.0 <= val <= 1.0


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=1e-6, max_value=1.0))
def test_schedule_caps_are_nondecreasing(gf):
    caps = build_schedule(gf, 5.0)
    assert all(a <= b for a, b in zip(caps, caps[1:])) or caps[-1] == caps[-2]
    assert all(c >= 1 for c in caps)
