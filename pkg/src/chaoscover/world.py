"""Environment geometry, cell coverage ledger and the 4x4 zone list."""

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import EmptyList, OutOfBounds, ValidationError

N_ZONES_PER_AXIS = 4


@dataclass(frozen=True)
class Rect:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValidationError("obstacles", f"degenerate rectangle {self}")

    def contains(self, X, Y):
        """Strict interior test."""
        return self.xmin < X < self.xmax and self.ymin < Y < self.ymax

    def near(self, X, Y, margin):
        return (self.xmin - margin < X < self.xmax + margin
                and self.ymin - margin < Y < self.ymax + margin)

    def as_row(self):
        return (self.xmin, self.ymin, self.xmax, self.ymax)


@dataclass(frozen=True)
class WorldSpec:
    width: float
    height: float
    sensing_range: float
    start: tuple = (0.5, 0.5)
    obstacles: tuple = ()

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValidationError("world.width", "width and height must be positive")
        if not self.sensing_range > 0:
            raise ValidationError("world.sensing_range", "must be positive")
        obs = tuple(o if isinstance(o, Rect) else Rect(*o) for o in self.obstacles)
        object.__setattr__(self, "obstacles", obs)
        object.__setattr__(self, "start", tuple(float(c) for c in self.start))
        for i, o in enumerate(obs):
            if o.xmin < 0 or o.ymin < 0 or o.xmax > self.width or o.ymax > self.height:
                raise ValidationError(f"world.obstacles[{i}]", "extends past the map edge")
        X, Y = self.start
        if not self.in_bounds(X, Y):
            raise ValidationError("world.start", "outside the map")
        if any(o.contains(X, Y) for o in obs):
            raise ValidationError("world.start", "inside an obstacle")

    def in_bounds(self, X, Y):
        return 0.0 <= X <= self.width and 0.0 <= Y <= self.height

    def obstacle_array(self, scale=1.0):
        if not self.obstacles:
            return np.zeros((0, 4))
        return np.array([o.as_row() for o in self.obstacles], dtype=float) / scale


class VisitOutcome(enum.Enum):
    NEW = "new"
    REPEAT = "repeat"
    OUTSIDE_FREE = "out-of-free-space"


class PointClass(enum.Enum):
    FREE = "free"
    OUTSIDE_BOUNDARY = "outside-boundary"
    NEAR_BOUNDARY = "near-boundary"
    INSIDE_OBSTACLE = "inside-obstacle"
    NEAR_OBSTACLE = "near-obstacle"


def point_classify(world, point, f_o):
    X, Y = point
    if not world.in_bounds(X, Y):
        return PointClass.OUTSIDE_BOUNDARY
    if any(o.contains(X, Y) for o in world.obstacles):
        return PointClass.INSIDE_OBSTACLE
    if X < f_o or X > world.width - f_o or Y < f_o or Y > world.height - f_o:
        return PointClass.NEAR_BOUNDARY
    if any(o.near(X, Y, f_o) for o in world.obstacles):
        return PointClass.NEAR_OBSTACLE
    return PointClass.FREE


class Marks(NamedTuple):
    """Outcome of marking a run of samples.

    ``new_idx`` holds the (sorted) sample positions that entered a
    never-visited free cell; ``n_marked`` may be less than the number of
    samples offered when marking stopped at a target count.
    """

    new: int
    repeat: int
    outside: int
    n_marked: int
    new_idx: np.ndarray


class CoverageGrid:
    """Visit counts over an M x N grid of cells whose side is the sensing range.

    A cell is an obstacle cell when some obstacle covers its centre; those
    cells never count as visited and are excluded from the coverage rate.
    """

    def __init__(self, world):
        self.world = world
        self.cell_size = sr = world.sensing_range
        self.M = math.ceil(world.width / sr - 1e-9)
        self.N = math.ceil(world.height / sr - 1e-9)
        cx = (np.arange(self.M) + 0.5) * sr
        cy = (np.arange(self.N) + 0.5) * sr
        CX, CY = np.meshgrid(cx, cy)  # (N, M): row = Y index
        obst = np.zeros((self.N, self.M), dtype=bool)
        for o in world.obstacles:
            obst |= (CX >= o.xmin) & (CX <= o.xmax) & (CY >= o.ymin) & (CY <= o.ymax)
        self.obstacle = obst
        self.counts = np.zeros((self.N, self.M), dtype=np.int64)
        self.total_free = int((~obst).sum())
        self.visited_free = 0
        zw = world.width / N_ZONES_PER_AXIS
        zh = world.height / N_ZONES_PER_AXIS
        zc = np.minimum((CX / zw).astype(int), N_ZONES_PER_AXIS - 1)
        zr = np.minimum((CY / zh).astype(int), N_ZONES_PER_AXIS - 1)
        self.zone_of_cell = zr * N_ZONES_PER_AXIS + zc
        self.zone_free = np.bincount(self.zone_of_cell[~obst],
                                     minlength=N_ZONES_PER_AXIS ** 2)

    def cell_index(self, X, Y):
        """Flat cell index (row-major) for arrays of coordinates."""
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        w, h = self.world.width, self.world.height
        bad = ~((X >= 0) & (X <= w) & (Y >= 0) & (Y <= h))
        if np.any(bad):
            i = int(np.argmax(bad))
            raise OutOfBounds(f"point ({X.flat[i]}, {Y.flat[i]}) outside the map")
        col = np.minimum((X / self.cell_size).astype(np.int64), self.M - 1)
        row = np.minimum((Y / self.cell_size).astype(np.int64), self.N - 1)
        return row * self.M + col

    def mark_points(self, X, Y, stop_at=None):
        """Mark samples in order, optionally stopping once ``stop_at`` free cells are visited."""
        flat = np.atleast_1d(self.cell_index(X, Y))
        counts = self.counts.reshape(-1)
        free = ~self.obstacle.reshape(-1)[flat]
        uniq, first = np.unique(flat, return_index=True)
        is_new = (counts[uniq] == 0) & ~self.obstacle.reshape(-1)[uniq]
        new_idx = np.sort(first[is_new])
        n = len(flat)
        if stop_at is not None:
            need = stop_at - self.visited_free
            if need <= 0:
                n = 0
                new_idx = new_idx[:0]
            elif len(new_idx) >= need:
                n = int(new_idx[need - 1]) + 1
                new_idx = new_idx[:need]
        flat = flat[:n]
        free = free[:n]
        np.add.at(counts, flat, 1)
        n_new = len(new_idx)
        self.visited_free += n_new
        n_out = int((~free).sum())
        return Marks(n_new, n - n_new - n_out, n_out, n, new_idx)

    def mark_visit(self, point):
        m = self.mark_points([point[0]], [point[1]])
        if m.new:
            return VisitOutcome.NEW
        if m.outside:
            return VisitOutcome.OUTSIDE_FREE
        return VisitOutcome.REPEAT

    def coverage_rate(self):
        if self.total_free == 0:
            return 1.0
        return self.visited_free / self.total_free

    def target_count(self, dc):
        """Smallest visited-cell count whose coverage rate reaches ``dc``."""
        k = max(0, math.ceil(dc * self.total_free) - 1)
        while k < self.total_free and k / self.total_free < dc:
            k += 1
        return k

    @property
    def unvisited(self):
        return self.total_free - self.visited_free

    def visited_mask(self):
        return (self.counts > 0) & ~self.obstacle

    def zone_visited(self):
        return np.bincount(self.zone_of_cell[self.visited_mask()],
                           minlength=N_ZONES_PER_AXIS ** 2)

    def zone_densities(self):
        """Visited fraction of free cells per zone; zones without free cells read 1."""
        vis = self.zone_visited()
        with np.errstate(invalid="ignore", divide="ignore"):
            rho = np.where(self.zone_free > 0, vis / np.maximum(self.zone_free, 1), 1.0)
        return rho


@dataclass(frozen=True)
class ZoneEntry:
    id: int
    bounds: Rect
    midpoint: tuple
    d: float
    rho: float


def zone_bounds(world, zid):
    zw = world.width / N_ZONES_PER_AXIS
    zh = world.height / N_ZONES_PER_AXIS
    r, c = divmod(zid, N_ZONES_PER_AXIS)
    return Rect(c * zw, r * zh, (c + 1) * zw, (r + 1) * zh)


def zone_midpoints(world):
    out = []
    for zid in range(N_ZONES_PER_AXIS ** 2):
        b = zone_bounds(world, zid)
        out.append((0.5 * (b.xmin + b.xmax), 0.5 * (b.ymin + b.ymax)))
    return out


def zone_of_point(world, point):
    X, Y = point
    c = min(int(X / (world.width / N_ZONES_PER_AXIS)), N_ZONES_PER_AXIS - 1)
    r = min(int(Y / (world.height / N_ZONES_PER_AXIS)), N_ZONES_PER_AXIS - 1)
    return r * N_ZONES_PER_AXIS + c


def build_zone_list(grid, robot):
    world = grid.world
    if not world.in_bounds(*robot):
        raise OutOfBounds(f"robot {robot} outside the map")
    rho = grid.zone_densities()
    entries = []
    for zid, (mx, my) in enumerate(zone_midpoints(world)):
        d = math.hypot(mx - robot[0], my - robot[1])
        entries.append(ZoneEntry(zid, zone_bounds(world, zid), (mx, my), d, float(rho[zid])))
    return entries


DISTANCE_FIRST = "distance-first"
DENSITY_FIRST = "density-first"


def select_zone(l_zone, mode=DISTANCE_FIRST, current=None):
    """Pick the next target zone, never the robot's ``current`` zone id."""
    cands = [e for e in l_zone if e.id != current]
    if not cands:
        raise EmptyList("no candidate zones")
    if mode == DISTANCE_FIRST:
        key = lambda e: (e.d, e.rho, e.id)
    elif mode == DENSITY_FIRST:
        key = lambda e: (e.rho, e.d, e.id)
    else:
        raise ValueError(f"unknown zoning mode {mode!r}")
    return min(cands, key=key)
