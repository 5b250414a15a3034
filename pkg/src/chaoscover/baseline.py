"""Boustrophedon reference planner and the performance ratio.

Lanes run parallel to the Y axis, one per column of cells, joined by
right-angle connectors of one lane spacing. Coverage is accounted on the
same grid as the chaotic planner, so a cell counts the moment the path
enters it.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import HasObstacles, ZeroBaseline
from .world import CoverageGrid


@dataclass
class BaselineResult:
    lane_spacing: float
    path_length: float
    t_opt: float
    waypoints: np.ndarray  # (k, 2) polyline truncated where the target coverage is reached


def lane_waypoints(width, height, sr):
    """Serpentine polyline through lane centres ``sr/2, 3sr/2, ...``."""
    n_lanes = max(1, math.ceil(width / sr - 1e-9))
    lo = min(sr / 2, height / 2)
    hi = max(height - sr / 2, lo)
    pts = []
    for k in range(n_lanes):
        x = min(sr / 2 + k * sr, width - min(sr / 2, width / 2))
        a, b = (lo, hi) if k % 2 == 0 else (hi, lo)
        pts.append((x, a))
        pts.append((x, b))
    return np.array(pts, dtype=float)


def _cell_entries(p, q, sr):
    """Arc-length offsets along the axis-aligned segment p->q where a new cell is entered.

    Yields ``(s, X, Y)`` with the entry point nudged into the entered cell.
    """
    axis = 0 if p[1] == q[1] else 1
    a, b = p[axis], q[axis]
    if a == b:
        return
    step = 1 if b > a else -1
    if step > 0:
        k = math.floor(a / sr) + 1
        lines = []
        while k * sr <= b:
            lines.append(k * sr)
            k += 1
    else:
        k = math.ceil(a / sr) - 1
        lines = []
        while k * sr >= b:
            lines.append(k * sr)
            k -= 1
    for L in lines:
        s = abs(L - a)
        probe = L + step * 1e-9 * sr
        pt = [p[0], p[1]]
        pt[axis] = probe
        yield s, pt[0], pt[1]


def boustrophedon(world, dc=0.9, v=1.0):
    if world.obstacles:
        raise HasObstacles("the boustrophedon baseline is defined for obstacle-free rooms")
    grid = CoverageGrid(world)
    target = grid.target_count(dc)
    sr = world.sensing_range
    wps = lane_waypoints(world.width, world.height, sr)
    if target <= 0:
        return BaselineResult(sr, 0.0, 0.0, wps[:1])
    grid.mark_points([wps[0, 0]], [wps[0, 1]])
    length = 0.0
    out = [wps[0]]
    if grid.visited_free >= target:
        return BaselineResult(sr, 0.0, 0.0, np.array(out))
    for p, q in zip(wps[:-1], wps[1:]):
        for s, X, Y in _cell_entries(p, q, sr):
            if not world.in_bounds(X, Y):
                continue
            grid.mark_points([X], [Y])
            if grid.visited_free >= target:
                d = float(length + s)
                out.append(np.array([X, Y]))
                return BaselineResult(sr, d, d / v, np.array(out))
        length += float(np.abs(q - p).sum())
        out.append(q)
    # whole serpentine walked without reaching the target (only possible for dc > reachable)
    return BaselineResult(sr, float(length), float(length / v), np.array(out))


def performance_ratio(ct, t_opt):
    if not t_opt > 0:
        raise ZeroBaseline("T_opt must be positive")
    return float(ct / t_opt)
