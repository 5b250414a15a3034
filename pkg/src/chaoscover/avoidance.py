"""Boundary mirroring, obstacle offsetting and attempt-bounded transit avoidance."""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels as K
from .errors import NonFinitePath, StillOutside, ValidationError


@dataclass(frozen=True)
class AvoidConfig:
    f_o: float = 0.5
    t_h: int = 10
    dn_h: int = 5

    def __post_init__(self):
        if not self.f_o > 0:
            raise ValidationError("avoid.f_o", "must be positive")
        if int(self.t_h) != self.t_h or self.t_h < 1:
            raise ValidationError("avoid.t_h", "must be an integer >= 1")
        if int(self.dn_h) != self.dn_h or self.dn_h < 1:
            raise ValidationError("avoid.dn_h", "must be an integer >= 1")


def default_t_h(width):
    """Initial attempt budget: 10 on a 50 m map, growing linearly with map size."""
    return max(1, round(10 * width / 50.0))


@dataclass
class LogisticPath:
    """A transit path in its three forms, all of length ``m``."""

    raw: np.ndarray
    rel: np.ndarray
    mapped: np.ndarray
    n_h: int = 0

    @property
    def m(self):
        return len(self.raw)


class AvoidOutcome(NamedTuple):
    points: np.ndarray  # traversed points after the start, (k, 2)
    t: float
    n_h: int
    reached: bool


def mirror_boundary(point, world, f_o):
    """Reflect offending coordinates back inside the map, ``f_o`` clear of the wall."""
    X, Y = point
    nx = K.mirror_axis(float(X), 0.0, float(world.width), f_o)
    ny = K.mirror_axis(float(Y), 0.0, float(world.height), f_o)
    if not world.in_bounds(nx, ny):
        raise StillOutside(f"({X}, {Y}) still outside after mirroring: ({nx}, {ny})")
    return nx, ny


def mirror_path(points, world, f_o):
    out = np.array(points, dtype=float, copy=True)
    for i in range(len(out)):
        out[i] = mirror_boundary(out[i], world, f_o)
    return out


def offset_obstacle(point, rect, f_o):
    """Snap the point to the nearest face of ``rect``, ``f_o`` outside it.

    Only the coordinate normal to that face changes. Equal displacements
    prefer X over Y and the lower face over the upper one.
    """
    obs = np.array([rect.as_row()], dtype=float)
    return K.offset_point(float(point[0]), float(point[1]), obs, 0, f_o)


def map_to_direct_path(raw, start, goal):
    """Bend a raw Logistic walk onto the chord from ``start`` to ``goal``.

    Relative offsets run linearly from ``start - raw[0]`` to
    ``goal - raw[-1]``; adding them to the raw points pins the ends.

    Returns ``(rel, mapped)``.
    """
    raw = np.asarray(raw, dtype=float)
    if raw.ndim != 2 or len(raw) < 2:
        raise ValueError("raw path needs at least two points")
    if not np.all(np.isfinite(raw)):
        raise NonFinitePath("raw Logistic path contains NaN or infinity")
    start = np.asarray(start, dtype=float)
    goal = np.asarray(goal, dtype=float)
    frac = np.linspace(0.0, 1.0, len(raw))[:, None]
    r0 = start - raw[0]
    r1 = goal - raw[-1]
    rel = r0 + frac * (r1 - r0)
    mapped = raw + rel
    mapped[0] = start
    mapped[-1] = goal
    return rel, mapped


def build_path(raw, start, goal, world, f_o):
    rel, mapped = map_to_direct_path(raw, start, goal)
    mapped = mirror_path(mapped, world, f_o)
    return LogisticPath(np.asarray(raw, dtype=float), rel, mapped)


def logistic_obstacle_avoid(path, goal, world, cfg, t, dt_constant):
    """Walk a mapped transit path, re-planning around obstacles.

    On the first point inside an obstacle the rest of the path is dropped,
    the point is pushed out to the nearest face and a new mapped path is
    built from there to ``goal`` over the remaining raw points. Each such
    event is one attempt; walking stops when the goal is reached or the
    attempt count hits ``cfg.t_h``. Running out of raw points before the
    goal also exhausts the budget.
    """
    obs = world.obstacle_array()
    W, H = float(world.width), float(world.height)
    raw = path.raw
    mapped = path.mapped.copy()
    m = len(mapped)
    out = []
    n_h = 0
    i = 1
    while i < m:
        X, Y = mapped[i]
        if K.inside_any(X, Y, obs, 0.0) >= 0:
            qx, qy, _ = K.relocate(X, Y, W, H, obs, cfg.f_o, 0.0)
            out.append((qx, qy))
            t += dt_constant
            n_h += 1
            if n_h >= cfg.t_h or m - i < 2:
                n_h = cfg.t_h
                path.n_h = n_h
                return AvoidOutcome(_as_points(out), t, n_h, False)
            _, rebuilt = map_to_direct_path(raw[i:], (qx, qy), goal)
            mapped[i:] = mirror_path(rebuilt, world, cfg.f_o)
            mapped[i] = (qx, qy)
        else:
            out.append((X, Y))
            t += dt_constant
        i += 1
    path.n_h = n_h
    return AvoidOutcome(_as_points(out), t, n_h, True)


def _as_points(pts):
    if not pts:
        return np.zeros((0, 2))
    return np.array(pts, dtype=float)


def is_safe(points, world):
    """True when every point is in bounds and outside every obstacle interior."""
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    ok = (P[:, 0] >= 0) & (P[:, 0] <= world.width) & (P[:, 1] >= 0) & (P[:, 1] <= world.height)
    for o in world.obstacles:
        ok &= ~((P[:, 0] > o.xmin) & (P[:, 0] < o.xmax) & (P[:, 1] > o.ymin) & (P[:, 1] < o.ymax))
    return bool(np.all(ok))


def straight_raw(start, goal, m):
    """Evenly spaced chord points; handy for tests and degenerate transits."""
    s = np.asarray(start, dtype=float)
    g = np.asarray(goal, dtype=float)
    return s + np.linspace(0.0, 1.0, m)[:, None] * (g - s)


def transit_length(m, dt_constant):
    return (m - 1) * dt_constant


def transit_points(d, v, dt_constant):
    """Number of samples on the time vector ``0 : dt : d/v`` (at least two)."""
    return max(2, int(math.floor(d / (v * dt_constant) + 1e-9)) + 1)
