"""Scalar numba kernels behind the public dynamics/avoidance/planner API.

Everything here works on plain floats and float64 arrays so the same code
runs from Python (the public wrappers and tests) and inside the compiled
Arnold batch loop. Obstacles are an ``(k, 4)`` array of
``xmin, ymin, xmax, ymax`` rows.
"""

from math import cos, isfinite, sin

import numpy as np
from numba import njit

# batch status codes
OK = 0
NON_FINITE = 1
STILL_OUTSIDE = 2
SCALED_OUT = 3

# correction flags
FLAG_BOUNDARY = 1
FLAG_OBSTACLE = 2
FLAG_HALVED = 4


@njit(cache=True)
def arnold(x, y, z, a, b, c):
    return (a * sin(z) + c * cos(y),
            b * sin(x) + a * cos(z),
            c * sin(y) + b * cos(x))


@njit(cache=True)
def augmented(x, y, z, a, b, c, idx, v):
    dx, dy, dz = arnold(x, y, z, a, b, c)
    if idx == 1:
        th = x
    elif idx == 2:
        th = y
    else:
        th = z
    return dx, dy, dz, v * cos(th), v * sin(th)


@njit(cache=True)
def rk4(x, y, z, X, Y, dt, a, b, c, idx, v):
    h = 0.5 * dt
    k1 = augmented(x, y, z, a, b, c, idx, v)
    k2 = augmented(x + h * k1[0], y + h * k1[1], z + h * k1[2], a, b, c, idx, v)
    k3 = augmented(x + h * k2[0], y + h * k2[1], z + h * k2[2], a, b, c, idx, v)
    k4 = augmented(x + dt * k3[0], y + dt * k3[1], z + dt * k3[2], a, b, c, idx, v)
    w = dt / 6.0
    return (x + w * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y + w * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            z + w * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
            X + w * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]),
            Y + w * (k1[4] + 2.0 * k2[4] + 2.0 * k3[4] + k4[4]))


@njit(cache=True)
def adaptive(x, y, z, X, Y, dt, dt_min, e_p, a, b, c, idx, v):
    """One full step against two half steps.

    Returns ``(state, dt_next, halved)``; the state always spans ``dt``.
    """
    full = rk4(x, y, z, X, Y, dt, a, b, c, idx, v)
    h = 0.5 * dt
    mid = rk4(x, y, z, X, Y, h, a, b, c, idx, v)
    half = rk4(mid[0], mid[1], mid[2], mid[3], mid[4], h, a, b, c, idx, v)
    if abs(full[3] - half[3]) > e_p or abs(full[4] - half[4]) > e_p:
        return half, max(h, dt_min), True
    return full, dt, False


@njit(cache=True)
def mirror_axis(p, lo, hi, f_o):
    if p < lo + f_o:
        return -p + 2.0 * (lo + f_o)
    if p > hi - f_o:
        return -p + 2.0 * (hi - f_o)
    return p


@njit(cache=True)
def inside(X, Y, obs, k, margin):
    """Strictly inside obstacle ``k`` grown by ``margin``."""
    return (obs[k, 0] - margin < X < obs[k, 2] + margin
            and obs[k, 1] - margin < Y < obs[k, 3] + margin)


@njit(cache=True)
def inside_any(X, Y, obs, margin):
    for k in range(obs.shape[0]):
        if inside(X, Y, obs, k, margin):
            return k
    return -1


@njit(cache=True)
def face_candidates(X, Y, obs, k, f_o):
    """Outward snaps for obstacle ``k`` in order of displacement.

    Returns an ``(4, 2)`` array of candidate points; ties keep the order
    left, right, lower, upper.
    """
    xmin, ymin, xmax, ymax = obs[k, 0], obs[k, 1], obs[k, 2], obs[k, 3]
    disp = np.array([X - (xmin - f_o), (xmax + f_o) - X,
                     Y - (ymin - f_o), (ymax + f_o) - Y])
    pts = np.empty((4, 2))
    pts[0, 0], pts[0, 1] = xmin - f_o, Y
    pts[1, 0], pts[1, 1] = xmax + f_o, Y
    pts[2, 0], pts[2, 1] = X, ymin - f_o
    pts[3, 0], pts[3, 1] = X, ymax + f_o
    order = np.argsort(disp, kind="mergesort")
    return pts[order]


@njit(cache=True)
def offset_point(X, Y, obs, k, f_o):
    c = face_candidates(X, Y, obs, k, f_o)
    return c[0, 0], c[0, 1]


@njit(cache=True)
def relocate(X, Y, W, H, obs, f_o, margin):
    """Push a point out of every obstacle it violates.

    ``margin`` is the detection distance (``f_o`` for the Arnold flow, 0 for
    transit points, which react only to points inside an obstacle). Faces
    whose snap would leave the map or land inside another obstacle are
    skipped when an alternative exists.
    """
    moved = False
    for _ in range(obs.shape[0] + 1):
        k = inside_any(X, Y, obs, margin)
        if k < 0:
            break
        cand = face_candidates(X, Y, obs, k, f_o)
        chosen = 0
        for j in range(4):
            cx, cy = cand[j, 0], cand[j, 1]
            if 0.0 <= cx <= W and 0.0 <= cy <= H and inside_any(cx, cy, obs, 0.0) < 0:
                chosen = j
                break
        X, Y = cand[chosen, 0], cand[chosen, 1]
        moved = True
    return X, Y, moved


@njit(cache=True)
def correct_point(X, Y, W, H, obs, f_o):
    """Boundary mirror then obstacle offset, as applied to Arnold samples.

    Returns ``(X, Y, flags, status)``.
    """
    flags = 0
    nx = mirror_axis(X, 0.0, W, f_o)
    ny = mirror_axis(Y, 0.0, H, f_o)
    if nx != X or ny != Y:
        flags |= FLAG_BOUNDARY
    if nx < 0.0 or nx > W or ny < 0.0 or ny > H:
        return nx, ny, flags, STILL_OUTSIDE
    nx, ny, moved = relocate(nx, ny, W, H, obs, f_o, f_o)
    if moved:
        flags |= FLAG_OBSTACLE
    return nx, ny, flags, OK


@njit(cache=True)
def arnold_batch(seed, n_iter, dt0, dt_min, e_p, a, b, c, idx, v, f, W, H, obs, f_o):
    """Generate ``n_iter`` corrected Arnold rows after ``seed``.

    Correction happens in the unscaled frame: ``W``, ``H``, ``obs`` and
    ``f_o`` must already be divided by ``f``. Returns
    ``(rows, scaled, dt_used, flags, dt_next, status, n_rows)``; on a
    non-zero status only the first ``n_rows`` rows are valid.
    """
    rows = np.empty((n_iter + 1, 5))
    scaled = np.empty((n_iter + 1, 2))
    dts = np.zeros(n_iter + 1)
    flags = np.zeros(n_iter + 1, dtype=np.int8)
    for j in range(5):
        rows[0, j] = seed[j]
    scaled[0, 0] = f * seed[3]
    scaled[0, 1] = f * seed[4]
    Ws, Hs = f * W, f * H
    x, y, z, X, Y = seed[0], seed[1], seed[2], seed[3], seed[4]
    dt = dt0
    for i in range(1, n_iter + 1):
        used = dt
        st, dt, halved = adaptive(x, y, z, X, Y, dt, dt_min, e_p, a, b, c, idx, v)
        x, y, z, X, Y = st
        if not (isfinite(x) and isfinite(y) and isfinite(z) and isfinite(X) and isfinite(Y)):
            return rows, scaled, dts, flags, dt, NON_FINITE, i
        X, Y, fl, status = correct_point(X, Y, W, H, obs, f_o)
        if status != OK:
            return rows, scaled, dts, flags, dt, status, i
        if halved:
            fl |= FLAG_HALVED
        rows[i, 0], rows[i, 1], rows[i, 2], rows[i, 3], rows[i, 4] = x, y, z, X, Y
        sx, sy = f * X, f * Y
        scaled[i, 0], scaled[i, 1] = sx, sy
        dts[i] = used
        flags[i] = fl
        if sx < 0.0 or sx > Ws or sy < 0.0 or sy > Hs:
            return rows, scaled, dts, flags, dt, SCALED_OUT, i + 1
    return rows, scaled, dts, flags, dt, OK, n_iter + 1
