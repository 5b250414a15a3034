import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaoscover.dynamics import (ArnoldParams, AugmentedState, IntegratorConfig, adaptive_step,
                                 arnold_derivative, augmented_derivative, heading_rate,
                                 heading_side, logistic_heading, logistic_next, logistic_orbit,
                                 logistic_step, rk4_step)
from chaoscover.errors import NonFiniteState, ValidationError

S0 = AugmentedState(0.0, 1.0, 0.0, 0.5, 0.5)
ZERO = ArnoldParams(0.0, 0.0, 0.0)
angles = st.floats(-50, 50, allow_nan=False)


def fine_oracle(s, T, h=1e-5, idx=3):
    for _ in range(round(T / h)):
        s = rk4_step(s, h, idx=idx)
    return s


def test_arnold_derivative_examples():
    d = arnold_derivative(S0)
    assert d == pytest.approx((0.25 * math.cos(1.0), 0.5, 0.25 * math.sin(1.0) + 0.25), rel=1e-12)
    assert d == pytest.approx((0.135076, 0.5, 0.460368), abs=1e-6)
    assert arnold_derivative((1.2, -3.0, 7.0), ZERO) == (0.0, 0.0, 0.0)
    d = arnold_derivative((0.0, math.pi / 2, math.pi / 2))
    assert d == pytest.approx((0.5, 0.0, 0.5), abs=1e-15)


def test_augmented_derivative_heading():
    _, _, _, dX, dY = augmented_derivative((0.0, 0.0, 0.0, 0, 0), idx=1)
    assert (dX, dY) == pytest.approx((1.0, 0.0))
    _, _, _, dX, dY = augmented_derivative((math.pi / 2, 0.0, 0.0, 0, 0), idx=1)
    assert (dX, dY) == pytest.approx((0.0, 1.0), abs=1e-15)
    _, _, _, dX, dY = augmented_derivative((0.0, math.pi, 0.0, 0, 0), idx=2)
    assert (dX, dY) == pytest.approx((-1.0, 0.0), abs=1e-15)


def test_bad_index_rejected():
    with pytest.raises(ValidationError):
        augmented_derivative(S0, idx=4)


@given(angles, angles, angles)
def test_derivative_bounds_and_speed(x, y, z):
    p = ArnoldParams()
    dx, dy, dz = arnold_derivative((x, y, z), p)
    eps = 1e-12
    assert abs(dx) <= p.A + p.C + eps
    assert abs(dy) <= p.A + p.B + eps
    assert abs(dz) <= p.B + p.C + eps
    for idx in (1, 2, 3):
        *_, dX, dY = augmented_derivative((x, y, z, 0, 0), p, idx, 1.7)
        assert math.hypot(dX, dY) == pytest.approx(1.7, rel=1e-12)


def test_heading_rate_is_selected_coordinate_rate():
    d = arnold_derivative(S0)
    assert [heading_rate(S0, idx=i) for i in (1, 2, 3)] == list(d)


def test_rk4_constant_field_exact():
    s = rk4_step(AugmentedState(0, 0, 0, 1.0, 2.0), 0.1, ZERO, idx=1)
    assert s.X == pytest.approx(1.1, abs=1e-15)
    assert (s.x, s.y, s.z, s.Y) == (0, 0, 0, 2.0)
    s = rk4_step(AugmentedState(math.pi, 0, 0, 1.0, 2.0), 0.1, ZERO, idx=1)
    assert s.X == pytest.approx(0.9, abs=1e-15)


def test_rk4_matches_fine_step_oracle():
    a = rk4_step(S0, 0.1, idx=3)
    b = fine_oracle(S0, 0.1, h=1e-4)
    assert max(abs(u - v) for u, v in zip(a, b)) < 1e-6


def test_rk4_order():
    errs = []
    for dt in (0.2, 0.1):
        a = rk4_step(S0, dt, idx=3)
        b = fine_oracle(S0, dt)
        errs.append(max(abs(u - v) for u, v in zip(a, b)))
    assert 16 <= errs[0] / errs[1] <= 64


def test_adaptive_constant_field_keeps_dt():
    s, used, nxt = adaptive_step(AugmentedState(0, 0, 0, 1, 1), 0.1, p=ZERO)
    assert used == 0.1 and nxt == 0.1
    assert s == rk4_step(AugmentedState(0, 0, 0, 1, 1), 0.1, ZERO)


def test_adaptive_default_keeps_dt():
    for idx in (1, 2, 3):
        s, used, nxt = adaptive_step(S0, 0.1, idx=idx)
        assert nxt == 0.1
        assert s == rk4_step(S0, 0.1, idx=idx)


def test_adaptive_zero_tolerance_halves_while_estimates_differ():
    # at small dt the two estimates can agree to the last bit, which is not a discrepancy
    cfg = IntegratorConfig(e_p=0.0)
    s, dt = S0, 0.1
    for k in range(14):
        disc, _, _ = _discrepancy(s, dt, 1)
        s, _, nxt = adaptive_step(s, dt, cfg, idx=1)
        assert nxt == (max(dt / 2, cfg.dt_min) if disc > 0 else dt)
        if k < 5:
            assert nxt == dt / 2
        dt = nxt


def _discrepancy(s, dt, idx):
    full = rk4_step(s, dt, idx=idx)
    mid = rk4_step(s, dt / 2, idx=idx)
    half = rk4_step(mid, dt / 2, idx=idx)
    return max(abs(full.X - half.X), abs(full.Y - half.Y)), full, half


@pytest.mark.parametrize("dt", [0.1, 0.4, 1.0, 2.0])
@pytest.mark.parametrize("e_p", [1e-9, 1e-6, 1e-3])
def test_adaptive_halves_iff_discrepancy_exceeds(dt, e_p):
    cfg = IntegratorConfig(dt_adaptive_init=max(dt, 0.1), e_p=e_p)
    disc, full, half = _discrepancy(S0, dt, 1)
    s, _, nxt = adaptive_step(S0, dt, cfg, idx=1)
    if disc > e_p:
        assert nxt == dt / 2 and s == half
    else:
        assert nxt == dt and s == full


def test_adaptive_non_finite_raises():
    with pytest.raises(NonFiniteState):
        adaptive_step(AugmentedState(0, 1, 0, math.inf, 0), 0.1)


def test_integrator_config_validation():
    with pytest.raises(ValidationError):
        IntegratorConfig(dt_min=0.2, dt_adaptive_init=0.1)
    with pytest.raises(ValidationError):
        IntegratorConfig(e_p=-1)
    with pytest.raises(ValidationError):
        ArnoldParams(A=math.nan)


def test_constant_speed_sampling():
    s = S0
    for _ in range(500):
        nxt = rk4_step(s, 0.1, idx=3)
        step = math.hypot(nxt.X - s.X, nxt.Y - s.Y)
        assert 0.99 * 0.1 <= step <= 0.1 + 1e-12
        s = nxt


def test_ic_sensitivity():
    a, b = S0, AugmentedState(1e-9, 1.0, 0.0, 0.5, 0.5)
    t, sep = 0.0, 0.0
    while t < 2000 and sep <= 1.0:
        a, b = rk4_step(a, 0.1, idx=3), rk4_step(b, 0.1, idx=3)
        t += 0.1
        sep = abs(a.X - b.X)
    assert sep > 1.0


def test_logistic_examples():
    assert logistic_next(0.1) == pytest.approx(0.36, rel=1e-12)
    assert logistic_next(0.0) == 0.0
    assert logistic_next(0.75) == 0.75


def test_logistic_heading_examples():
    assert logistic_heading(0.5, -1) == 0.0
    assert logistic_heading(0.0, 1) == pytest.approx(math.pi / 2)
    assert logistic_heading(0.5, 1) == pytest.approx(math.pi)
    with pytest.raises(ValidationError):
        logistic_heading(0.5, 0)


def test_logistic_step_examples():
    assert logistic_step((0, 0), 0.0, 1, 0.1) == pytest.approx((0.1, 0.0))
    assert logistic_step((0, 0), math.pi / 2, 1, 0.1) == pytest.approx((0.0, 0.1), abs=1e-15)
    assert logistic_step((1, 1), math.pi, 1, 0.1) == pytest.approx((0.9, 1.0), abs=1e-15)


def test_heading_side_rule():
    assert heading_side(10, 50) == -1
    assert heading_side(30, 50) == 1


def test_logistic_boundedness():
    orbit = np.array(logistic_orbit(0.1, 10 ** 6))
    assert orbit.min() >= 0.0 and orbit.max() <= 1.0


@settings(max_examples=30)
@given(st.floats(1e-6, 1 - 1e-6))
def test_logistic_bounded_any_ic(x0):
    orbit = np.array(logistic_orbit(x0, 2000))
    assert np.all((orbit >= 0) & (orbit <= 1))
