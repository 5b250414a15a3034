"""Chaotic generators and their mapping onto robot kinematics.

The Arnold (ABC) flow drives the robot heading continuously: one of its
three coordinates is used as the heading angle and the robot moves at
constant speed ``v``. The Logistic map produces discrete headings for
short transit paths.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import _kernels as K
from .errors import NonFiniteState, ValidationError


@dataclass(frozen=True)
class ArnoldParams:
    A: float = 0.5
    B: float = 0.25
    C: float = 0.25

    def __post_init__(self):
        for name in ("A", "B", "C"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(name, "must be finite")


@dataclass(frozen=True)
class IntegratorConfig:
    dt_adaptive_init: float = 0.1
    dt_constant: float = 0.1
    e_p: float = 1e-3
    dt_min: float = 1e-4

    def __post_init__(self):
        if not 0 < self.dt_min <= self.dt_adaptive_init:
            raise ValidationError("dt_min", "need 0 < dt_min <= dt_adaptive_init")
        if self.dt_constant <= 0:
            raise ValidationError("dt_constant", "must be positive")
        if self.e_p < 0:
            raise ValidationError("e_p", "must be non-negative")


class AugmentedState(NamedTuple):
    """Arnold coordinates plus robot position, integrated as one system."""

    x: float
    y: float
    z: float
    X: float
    Y: float

    def is_finite(self):
        return all(math.isfinite(c) for c in self)


def _check_index(idx):
    if idx not in (1, 2, 3):
        raise ValidationError("ds_index", f"must be 1, 2 or 3, got {idx!r}")


def arnold_derivative(s, p=ArnoldParams()):
    """Right-hand side of the Arnold flow at ``(s.x, s.y, s.z)``."""
    return K.arnold(s[0], s[1], s[2], p.A, p.B, p.C)


def augmented_derivative(s, p=ArnoldParams(), idx=1, v=1.0):
    """Derivative of the 5-d augmented state; heading is the ``idx``-th Arnold coordinate."""
    _check_index(idx)
    return K.augmented(s[0], s[1], s[2], p.A, p.B, p.C, idx, v)


def heading_rate(s, p=ArnoldParams(), idx=1):
    """Angular velocity of the robot, i.e. the rate of the heading coordinate.

    Diagnostic only; the planner never integrates it.
    """
    return arnold_derivative(s, p)[idx - 1]


def rk4_step(s, dt, p=ArnoldParams(), idx=1, v=1.0):
    _check_index(idx)
    return AugmentedState(*K.rk4(*s, dt, p.A, p.B, p.C, idx, v))


def adaptive_step(s, dt, cfg=IntegratorConfig(), p=ArnoldParams(), idx=1, v=1.0):
    """Step-doubling RK4 with halving on position discrepancy.

    A full step of ``dt`` is compared with two steps of ``dt/2``. If either
    robot coordinate differs by more than ``cfg.e_p`` the half-step result
    is kept and the next step is halved (never below ``cfg.dt_min``).

    Returns
    -------
    next_state, dt_used, dt_next
    """
    _check_index(idx)
    st, dt_next, _ = K.adaptive(*s, dt, cfg.dt_min, cfg.e_p, p.A, p.B, p.C, idx, v)
    nxt = AugmentedState(*st)
    if not nxt.is_finite():
        raise NonFiniteState(f"non-finite state after step from {tuple(s)}")
    return nxt, dt, dt_next


def logistic_next(x_n, r=4.0):
    return r * x_n * (1.0 - x_n)


def logistic_heading(x_n, side):
    """Heading for a Logistic iterate; ``side=-1`` fans rightward, ``+1`` leftward."""
    if side not in (1, -1):
        raise ValidationError("side", "must be +1 or -1")
    return math.pi * x_n + side * math.pi / 2


def logistic_step(pose, theta, v=1.0, dt=0.1):
    X, Y = pose
    return X + dt * v * math.cos(theta), Y + dt * v * math.sin(theta)


def heading_side(X, width):
    """Sign for the +/- in the Logistic heading: rightward fan in the left half."""
    return -1 if X < 0.5 * width else 1


def logistic_orbit(x0, n, r=4.0):
    """``n`` successive iterates after ``x0`` (``x0`` itself excluded)."""
    out = []
    x = x0
    for _ in range(n):
        x = logistic_next(x, r)
        out.append(x)
    return out
