"""Chaotic coverage planner: Arnold batches, orientation control, map zoning, system scaling.

The run is a feedback loop. Each iteration integrates a batch of Arnold
samples, marks them on the coverage grid and then decides from the batch's
success at finding new cells whether to keep scanning in place (switching
the heading coordinate when nothing new was found) or to leave for another
zone along a Logistic transit path.
"""

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from . import _kernels as K
from .avoidance import AvoidConfig, build_path, logistic_obstacle_avoid, transit_points
from .dynamics import (ArnoldParams, AugmentedState, IntegratorConfig, heading_side,
                       logistic_heading, logistic_next)
from .errors import (DegeneratePath, NoProgress, NonFinitePath, NonFiniteState,
                     ScaledOutOfBounds, StillOutside, ValidationError)
from .world import (DENSITY_FIRST, DISTANCE_FIRST, CoverageGrid, build_zone_list,
                    select_zone, zone_of_point)

ARNOLD = 0
LOGISTIC = 1
SOURCE_NAMES = {ARNOLD: "arnold", LOGISTIC: "logistic"}

GENERATORS = ("arnold", "logistic")
ZONING_MODES = ("auto", DISTANCE_FIRST, DENSITY_FIRST)


@dataclass(frozen=True)
class PlannerConfig:
    generator: str = "arnold"
    v: float = 1.0
    dc: float = 0.9
    c: float = 0.5
    f: float = 1.0
    ds_index_init: int = 3
    n_iter: int = 1000
    orientation: bool = False
    zoning: bool = False
    scaling: bool = False
    zoning_mode: str = "auto"
    logistic_r: float = 4.0
    logistic_x0: float = 0.1
    arnold_ic: tuple = (0.0, 1.0, 0.0)
    interp_stride: int = 1
    max_time: float = 1e8
    avoid: AvoidConfig = field(default_factory=AvoidConfig)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    arnold: ArnoldParams = field(default_factory=ArnoldParams)

    def __post_init__(self):
        object.__setattr__(self, "arnold_ic", tuple(float(v) for v in self.arnold_ic))
        if self.generator not in GENERATORS:
            raise ValidationError("planner.generator", f"must be one of {GENERATORS}")
        if not self.v > 0:
            raise ValidationError("planner.v", "must be positive")
        if not 0 <= self.dc <= 1:
            raise ValidationError("planner.dc", "must lie in [0, 1]")
        if not 0 < self.c <= 1:
            raise ValidationError("planner.c", "must lie in (0, 1]")
        if not self.f > 0:
            raise ValidationError("planner.f", "must be positive")
        if self.ds_index_init not in (1, 2, 3):
            raise ValidationError("planner.ds_index_init", "must be 1, 2 or 3")
        if int(self.n_iter) != self.n_iter or self.n_iter < 1:
            raise ValidationError("planner.n_iter", "must be an integer >= 1")
        if self.zoning_mode not in ZONING_MODES:
            raise ValidationError("planner.zoning_mode", f"must be one of {ZONING_MODES}")
        if len(self.arnold_ic) != 3:
            raise ValidationError("planner.arnold_ic", "needs three values")
        if int(self.interp_stride) != self.interp_stride or self.interp_stride < 1:
            raise ValidationError("planner.interp_stride", "must be an integer >= 1")
        if not self.max_time > 0:
            raise ValidationError("planner.max_time", "must be positive")

    @property
    def effective_f(self):
        return self.f if self.scaling else 1.0


class IntervalStats(NamedTuple):
    new: int
    visited: int  # new + repeat samples in the interval
    unvisited: int  # unvisited free cells at interval start
    total: int


def coverage_criterion(s, c):
    """True while the last interval still finds new cells fast enough to stay put."""
    ratio = s.new / s.visited if s.visited > 0 else 0.0
    if s.total == 0:
        return True
    return ratio >= c * (s.unvisited / s.total)


def orientation_switch(idx):
    return idx % 3 + 1


@dataclass
class ArnoldBatch:
    unscaled: np.ndarray  # (n+1, 5) rows x, y, z, X, Y; row 0 is the seed
    scaled: np.ndarray  # (n+1, 2)
    dt_used: np.ndarray  # (n+1,), 0 for the seed
    flags: np.ndarray  # (n+1,) correction flags
    times: np.ndarray  # (n+1,)

    @property
    def relocated(self):
        return (self.flags & (K.FLAG_BOUNDARY | K.FLAG_OBSTACLE)) != 0


def system_scaler(seed, cfg, world, t, idx=None):
    """Integrate one batch of ``cfg.n_iter`` Arnold rows from ``seed``.

    Samples are corrected against boundaries and obstacles in the unscaled
    frame (the world shrunk by ``f``) and then scaled by ``f`` into world
    coordinates; time advances by ``dt * f`` per row so the robot keeps
    speed ``v`` in the world.

    Returns ``(batch, t_end, dt_next)``.
    """
    f = cfg.effective_f
    idx = cfg.ds_index_init if idx is None else idx
    ic = cfg.integrator
    p = cfg.arnold
    obs = world.obstacle_array(f)
    rows, scaled, dts, flags, dt_next, status, n = K.arnold_batch(
        np.asarray(seed, dtype=float), int(cfg.n_iter), ic.dt_adaptive_init, ic.dt_min,
        ic.e_p, p.A, p.B, p.C, int(idx), cfg.v, f, world.width / f, world.height / f,
        obs, cfg.avoid.f_o / f)
    if status == K.NON_FINITE:
        raise NonFiniteState(f"non-finite Arnold state at row {n} (t={t})")
    if status == K.STILL_OUTSIDE:
        raise StillOutside(f"Arnold row {n} still outside after mirroring (t={t})")
    if status == K.SCALED_OUT:
        raise ScaledOutOfBounds(f"scaled row {n - 1} outside the map: {tuple(scaled[n - 1])}")
    times = t + np.cumsum(dts * f)
    return ArnoldBatch(rows, scaled, dts, flags, times), float(times[-1]), dt_next


@dataclass
class RunResult:
    t: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    source: np.ndarray
    coverage_t: list
    coverage_tc: list
    ct: float = None
    final_tc: float = 0.0
    status: str = "ok"
    error: str = None
    counters: dict = field(default_factory=dict)
    targets: list = field(default_factory=list)

    @property
    def reached(self):
        return self.ct is not None

    def points(self):
        return np.column_stack([self.X, self.Y])


class CoveragePlanner:
    """Single-run state machine; use :func:`run_coverage` unless you need the internals.

    ``observer`` is called with the planner after every batch and transit.
    """

    def __init__(self, cfg, world, observer=None):
        self.cfg = cfg
        self.world = world
        self.observer = observer
        self.grid = CoverageGrid(world)
        self.target = self.grid.target_count(cfg.dc)
        self.f = cfg.effective_f
        self.t = 0.0
        self.pos = tuple(world.start)
        self.state = AugmentedState(*cfg.arnold_ic, self.pos[0] / self.f, self.pos[1] / self.f)
        self.idx = cfg.ds_index_init
        self.x_log = cfg.logistic_x0
        self.t_h = cfg.avoid.t_h
        self.obstacle_seen = False
        self.ct = None
        self._chunks = []
        self.coverage_t = []
        self.coverage_tc = []
        self.targets = []
        self.counters = {
            "batches": 0,
            "ds_index_switches": 0,
            "zoning_calls": 0,
            "transits": 0,
            "t_h_growth": 0,
            "halvings": 0,
            "boundary_corrections": 0,
            "obstacle_corrections": 0,
            "n_h_hist": Counter(),
        }
        self.last_interval = None

    @property
    def done(self):
        return self.grid.visited_free >= self.target

    def _record(self, times, pts, source, prev=None, stop=True):
        """Mark and store samples; stops at the sample reaching the target coverage."""
        stop_at = self.target if stop else None
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        times = np.asarray(times, dtype=float)
        s = self.cfg.interp_stride
        if s > 1 and len(pts):
            prev = np.asarray(self.pos if prev is None else prev, dtype=float)
            start = np.vstack([prev, pts[:-1]])
            frac = (np.arange(1, s + 1) / s)[None, :, None]
            fine = (start[:, None, :] + frac * (pts - start)[:, None, :]).reshape(-1, 2)
            marks = self.grid.mark_points(fine[:, 0], fine[:, 1], stop_at=stop_at)
            n = -(-marks.n_marked // s)
        else:
            marks = self.grid.mark_points(pts[:, 0], pts[:, 1], stop_at=stop_at)
            n = marks.n_marked
        if n:
            self._chunks.append((times[:n], pts[:n], np.full(n, source, dtype=np.uint8)))
            self.pos = (float(pts[n - 1, 0]), float(pts[n - 1, 1]))
            self.t = float(times[n - 1])
        if self.done and self.ct is None:
            self.ct = self.t
        self.coverage_t.append(self.t)
        self.coverage_tc.append(self.grid.coverage_rate())
        return marks

    def _check_time(self):
        if self.t > self.cfg.max_time:
            raise NoProgress(f"coverage {self.grid.coverage_rate():.4f} after {self.t:.0f} s")

    def run(self):
        self._record([0.0], [self.pos], ARNOLD if self.cfg.generator == "arnold" else LOGISTIC,
                     stop=False)
        try:
            if self.cfg.generator == "logistic":
                self._run_logistic()
            else:
                self._run_arnold()
        except Exception as exc:
            return self.result(status=type(exc).__name__, error=str(exc))
        return self.result()

    def _run_arnold(self):
        cfg = self.cfg
        total = self.grid.total_free
        while not self.done:
            self._check_time()
            before = self.grid.visited_free
            unvisited = self.grid.unvisited
            batch, _, _ = system_scaler(self.state, cfg, self.world, self.t, self.idx)
            self.counters["batches"] += 1
            fl = batch.flags[1:]
            self.counters["halvings"] += int(np.count_nonzero(fl & K.FLAG_HALVED))
            self.counters["boundary_corrections"] += int(np.count_nonzero(fl & K.FLAG_BOUNDARY))
            n_obs = int(np.count_nonzero(fl & K.FLAG_OBSTACLE))
            self.counters["obstacle_corrections"] += n_obs
            if n_obs:
                self.obstacle_seen = True
            marks = self._record(batch.times[1:], batch.scaled[1:], ARNOLD)
            self.last_interval = IntervalStats(marks.new, marks.n_marked, unvisited, total)
            if self.done:
                self._notify()
                break
            self.state = AugmentedState(*batch.unscaled[-1])
            stay = not cfg.zoning or coverage_criterion(self.last_interval, cfg.c)
            if stay:
                if cfg.orientation and self.grid.visited_free == before:
                    self.idx = orientation_switch(self.idx)
                    self.counters["ds_index_switches"] += 1
                self._notify()
            else:
                self._notify()
                self.map_zoning()

    def _notify(self):
        if self.observer is not None:
            self.observer(self)

    def zoning_mode(self):
        mode = self.cfg.zoning_mode
        if mode != "auto":
            return mode
        return DISTANCE_FIRST if self.obstacle_seen else DENSITY_FIRST

    def _logistic_raw(self, start, m):
        cfg = self.cfg
        side = heading_side(start[0], self.world.width)
        dt = cfg.integrator.dt_constant
        raw = np.empty((m, 2))
        raw[0] = start
        x = self.x_log
        for j in range(1, m):
            nx = logistic_next(x, cfg.logistic_r)
            if not math.isfinite(nx):
                raise NonFinitePath(f"Logistic iterate diverged (x={x})")
            if nx == x:
                raise DegeneratePath(f"Logistic orbit stuck at fixed point {x}")
            x = nx
            th = logistic_heading(x, side)
            raw[j, 0] = raw[j - 1, 0] + dt * cfg.v * math.cos(th)
            raw[j, 1] = raw[j - 1, 1] + dt * cfg.v * math.sin(th)
        self.x_log = x
        if not np.all(np.isfinite(raw)):
            raise NonFinitePath("raw Logistic path contains NaN or infinity")
        return raw

    def map_zoning(self):
        """Move the robot along Logistic transits to the next zone worth scanning."""
        cfg = self.cfg
        dt = cfg.integrator.dt_constant
        self.counters["zoning_calls"] += 1
        reached = False
        while not self.done:
            self._check_time()
            current = zone_of_point(self.world, self.pos)
            l_zone = [e for e in build_zone_list(self.grid, self.pos) if e.id != current]
            # zones already at the desired coverage are not worth travelling to
            l_zone = [e for e in l_zone if e.rho < cfg.dc] or l_zone
            while l_zone and not self.done:
                self._check_time()
                zone = select_zone(l_zone, self.zoning_mode())
                goal = zone.midpoint
                d = math.hypot(goal[0] - self.pos[0], goal[1] - self.pos[1])
                m = transit_points(d, cfg.v, dt)
                raw = self._logistic_raw(self.pos, m)
                path = build_path(raw, self.pos, goal, self.world, cfg.avoid.f_o)
                acfg = replace(cfg.avoid, t_h=self.t_h)
                out = logistic_obstacle_avoid(path, goal, self.world, acfg, self.t, dt)
                self.counters["transits"] += 1
                self.counters["n_h_hist"][out.n_h] += 1
                if out.n_h:
                    self.obstacle_seen = True
                k = len(out.points)
                self._record(self.t + dt * np.arange(1, k + 1), out.points, LOGISTIC)
                self._notify()
                if out.reached:
                    reached = True
                    self.targets.append(goal)
                    break
                l_zone = [e for e in l_zone if e.id != zone.id]
                if not l_zone:
                    self.t_h += cfg.avoid.dn_h
                    self.counters["t_h_growth"] += 1
            if reached:
                break
        x, y, z = self.state[:3]
        self.state = AugmentedState(x, y, z, self.pos[0] / self.f, self.pos[1] / self.f)

    def _run_logistic(self):
        """Logistic map as the only generator; the heading fan flips on wall contact."""
        cfg = self.cfg
        W, H = float(self.world.width), float(self.world.height)
        obs = self.world.obstacle_array()
        f_o = cfg.avoid.f_o
        dt = cfg.integrator.dt_constant
        side = heading_side(self.pos[0], W)
        x = self.x_log
        X, Y = self.pos
        while not self.done:
            self._check_time()
            n = cfg.n_iter
            pts = np.empty((n, 2))
            for j in range(n):
                nx = logistic_next(x, cfg.logistic_r)
                if not math.isfinite(nx):
                    raise NonFinitePath(f"Logistic iterate diverged (x={x})")
                if nx == x:
                    raise DegeneratePath(f"Logistic orbit stuck at fixed point {x}")
                x = nx
                th = logistic_heading(x, side)
                X += dt * cfg.v * math.cos(th)
                Y += dt * cfg.v * math.sin(th)
                if X < f_o:
                    side = -1
                elif X > W - f_o:
                    side = 1
                X, Y, flags, status = K.correct_point(X, Y, W, H, obs, f_o)
                if status != K.OK:
                    raise StillOutside(f"Logistic sample ({X}, {Y}) outside after mirroring")
                if flags & K.FLAG_OBSTACLE:
                    self.obstacle_seen = True
                pts[j] = X, Y
            self.counters["batches"] += 1
            self._record(self.t + dt * np.arange(1, n + 1), pts, LOGISTIC)
            self._notify()
        self.x_log = x

    def result(self, status="ok", error=None):
        if self._chunks:
            t = np.concatenate([c[0] for c in self._chunks])
            P = np.concatenate([c[1] for c in self._chunks])
            src = np.concatenate([c[2] for c in self._chunks])
        else:
            t, P, src = np.zeros(0), np.zeros((0, 2)), np.zeros(0, dtype=np.uint8)
        counters = dict(self.counters)
        counters["n_h_hist"] = {str(k): v for k, v in sorted(self.counters["n_h_hist"].items())}
        counters["final_t_h"] = self.t_h
        counters["final_ds_index"] = self.idx
        return RunResult(t=t, X=P[:, 0].copy(), Y=P[:, 1].copy(), source=src,
                         coverage_t=list(self.coverage_t), coverage_tc=list(self.coverage_tc),
                         ct=self.ct, final_tc=self.grid.coverage_rate(), status=status,
                         error=error, counters=counters, targets=list(self.targets))


def run_coverage(cfg, world, observer=None):
    """Run the planner until the desired coverage is reached.

    Errors from the dynamics or avoidance layers end the run; they are
    reported through ``RunResult.status`` (the exception class name) and
    ``RunResult.error`` together with everything traversed so far.
    """
    return CoveragePlanner(cfg, world, observer).run()
