import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from trapcav import (
    NonFiniteSample,
    NotConverged,
    QuadratureResult,
    integrate_adaptive,
    integrate_fixed,
    pairwise_sum,
)


def sin5_primitive(u):
    c = math.cos(u)
    return -c + (2.0 / 3.0) * c**3 - 0.2 * c**5


SIN5_FULL = 16.0 / 15.0


def test_adaptive_sin5_over_half_turn():
    q = integrate_adaptive(lambda t: math.sin(t) ** 5, 0.0, math.pi, rel_tol=1e-12)
    assert q.converged
    assert math.isclose(q.value, SIN5_FULL, rel_tol=1e-12)
    assert q.error_estimate <= 1e-12 * q.value
    assert q.method == "gauss-kronrod-7-15"


def test_adaptive_linear_exact():
    q = integrate_adaptive(lambda x: x, 0.0, 1.0, rel_tol=1e-12)
    assert abs(q.value - 0.5) < 1e-12
    assert q.evaluations == 15  # one panel nails a polynomial


def test_adaptive_empty_interval():
    q = integrate_adaptive(math.sin, 2.0, 2.0)
    assert q == QuadratureResult(0.0, 0.0, 0, True)


@pytest.mark.parametrize(
    "kwargs",
    [dict(lo=1.0, hi=0.0), dict(rel_tol=0.0), dict(rel_tol=-1e-9), dict(abs_tol=-1.0)],
)
def test_adaptive_rejects_bad_arguments(kwargs):
    args = dict(lo=0.0, hi=1.0)
    args.update(kwargs)
    with pytest.raises(ValueError):
        integrate_adaptive(math.sin, **args)


def test_adaptive_reports_failure_with_best_value():
    # a step cannot be resolved to 1e-14 with only 5 halvings
    step = lambda x: 1.0 if x < 0.3 else 0.0
    with pytest.raises(NotConverged) as err:
        integrate_adaptive(step, 0.0, 1.0, rel_tol=1e-14, max_depth=5)
    assert 0.25 < err.value.value < 0.35
    assert err.value.error_estimate > 0.0
    assert err.value.evaluations > 15


def test_adaptive_panel_cap():
    step = lambda x: 1.0 if x < 0.3 else 0.0
    with pytest.raises(NotConverged) as err:
        integrate_adaptive(step, 0.0, 1.0, rel_tol=1e-14, max_panels=8)
    # 7 splits from one seed panel: 15 panels of 15 samples each
    assert 15 < err.value.evaluations <= 15 * 15


def test_adaptive_propagates_non_finite():
    with pytest.raises(NonFiniteSample) as err:
        integrate_adaptive(lambda x: math.inf, 0.0, 1.0)
    assert err.value.value == math.inf
    with pytest.raises(NonFiniteSample):
        integrate_adaptive(lambda x: math.nan, 2.0, 3.0)


def test_fixed_constant_and_single_panel():
    assert integrate_fixed(lambda x: 1.0, 0.0, 1.0, 7) == pytest.approx(1.0, rel=1e-15)
    # midpoint is exact for linear integrands even with one panel
    assert integrate_fixed(lambda x: x, 0.0, 2.0, 1) == 2.0


def test_fixed_sine_accuracy():
    err = abs(integrate_fixed(math.sin, 0.0, math.pi, 4096) - 2.0)
    assert err < 4e-7


def test_fixed_rejects_bad_arguments():
    with pytest.raises(ValueError):
        integrate_fixed(math.sin, 0.0, 1.0, 0)
    with pytest.raises(ValueError):
        integrate_fixed(math.sin, 1.0, 0.0, 4)
    with pytest.raises(NonFiniteSample):
        integrate_fixed(lambda x: math.nan, 0.0, 1.0, 3)


def test_fixed_second_order_convergence():
    # genuinely second order on an interval where the integrand's odd
    # derivatives do not vanish at the ends; [0, pi] would superconverge
    lo, hi = 0.3, 2.4
    f = lambda t: math.sin(t) ** 5
    exact = integrate_adaptive(f, lo, hi, rel_tol=1e-13).value
    assert math.isclose(exact, sin5_primitive(hi) - sin5_primitive(lo), rel_tol=1e-12)
    ns = [64, 256, 1024]
    errs = [abs(integrate_fixed(f, lo, hi, n) - exact) for n in ns]
    slope = np.polyfit(np.log(ns), np.log(errs), 1)[0]
    assert -2.1 < slope < -1.9


def test_error_estimate_is_usually_an_upper_bound():
    # 95 percent coverage over randomized subintervals of known integrals
    rng = random.Random(314159)
    ok = total = 0
    cases = [
        (lambda t: math.sin(t) ** 5, sin5_primitive, math.pi),
        (math.sin, lambda u: -math.cos(u), 4.0),
    ]
    for f, primitive, span in cases:
        for _ in range(150):
            u, v = rng.uniform(0.0, span), rng.uniform(0.0, span)
            lo, hi = min(u, v), max(u, v)
            if hi - lo < 1e-6:
                continue
            exact = primitive(hi) - primitive(lo)
            q = integrate_adaptive(f, lo, hi, rel_tol=1e-9)
            total += 1
            ok += abs(q.value - exact) <= q.error_estimate
    assert ok / total >= 0.95


def test_converged_means_tolerance_met():
    for lo, hi in [(0.0, 1.0), (0.2, 2.9), (1.0, 1.5)]:
        q = integrate_adaptive(lambda t: math.exp(-t) * math.sin(7 * t), lo, hi)
        assert q.converged
        assert q.error_estimate <= max(1e-9 * abs(q.value), 1e-300)


def test_pairwise_sum_basics():
    assert pairwise_sum([]) == 0.0
    assert pairwise_sum([3.5]) == 3.5
    assert pairwise_sum([1.0, 2.0, 3.0]) == 6.0
    rows = np.arange(12.0).reshape(3, 4)
    by_row = pairwise_sum(rows, axis=1)
    assert by_row.shape == (3,)
    assert list(by_row) == [6.0, 22.0, 38.0]


def test_pairwise_sum_deterministic_and_chunk_free():
    rng = np.random.default_rng(2718)
    x = rng.standard_normal(10_001) * 1e6
    s1 = pairwise_sum(x)
    s2 = pairwise_sum(list(x))
    assert s1 == s2
    assert s1 == pairwise_sum(x)


@given(
    st.lists(st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False), max_size=300)
)
@settings(max_examples=200)
def test_pairwise_sum_matches_fsum(xs):
    total = pairwise_sum(xs)
    expect = math.fsum(xs)
    assert math.isclose(total, expect, rel_tol=1e-12, abs_tol=1e-5)


@given(lo=st.floats(0.0, 3.0), width=st.floats(1e-3, 3.0))
@settings(max_examples=100, deadline=None)
def test_adaptive_matches_antiderivative(lo, width):
    # abs_tol keeps windows symmetric about the sine's zero convergent
    hi = lo + width
    q = integrate_adaptive(math.sin, lo, hi, rel_tol=1e-11, abs_tol=1e-12)
    exact = math.cos(lo) - math.cos(hi)
    assert math.isclose(q.value, exact, rel_tol=1e-10, abs_tol=1e-11)
