"""The 35 benchmark configurations: room size, sensing range, clutter and technique mix.

Obstacle coordinates are not published with the benchmark, so the layouts
here are fixed square blocks placed in proportion to the room size: one
central block, four blocks around the centre, or those four plus a
smaller central block.
"""

from importlib import resources

from .avoidance import AvoidConfig, default_t_h
from .planner import PlannerConfig
from .scenario import Scenario, load_scenario
from .world import Rect, WorldSpec

# (case, size, SR, f, N_obs, c, initial DS index, reported CT in s, reported PR)
ROWS = [
    (1, 50, 1, None, 0, None, 3, 6.95e3, 2.6),
    (2, 50, 1, None, 1, None, 3, 6.60e3, None),
    (3, 50, 1, None, 4, None, 3, 6.05e3, None),
    (4, 50, 1, None, 5, None, 2, 1.04e4, None),
    (5, 100, 1, None, 0, None, 3, 3.24e4, 3.0),
    (6, 100, 1, None, 5, None, 3, 2.77e4, None),
    (7, 200, 1, None, 0, None, 3, 1.72e5, 3.9),
    (8, 200, 1, None, 5, None, 3, 9.92e4, None),
    (9, 200, 4, None, 0, None, 3, 5.36e4, 5.7),
    (10, 200, 4, None, 5, None, 3, 3.51e4, None),
    (11, 50, 1, None, 0, None, None, 2.34e4, 8.7),
    (12, 50, 1, None, 0, None, 3, 6.40e3, 2.4),
    (13, 50, 1, None, 1, None, 3, 5.45e3, None),
    (14, 50, 1, None, 4, None, 2, 6.50e3, None),
    (15, 50, 1, None, 5, None, 3, 7.40e3, None),
    (16, 100, 1, None, 0, None, 3, 3.89e4, 3.6),
    (17, 100, 1, None, 5, None, 3, 2.13e4, None),
    (18, 200, 1, None, 0, None, 3, 1.48e5, 3.4),
    (19, 200, 1, None, 5, None, 3, 8.35e4, None),
    (20, 200, 1, 1.90, 0, None, 3, 1.13e5, 2.6),
    (21, 200, 1, 1.30, 5, None, 3, 8.33e4, None),
    (22, 200, 4, 3.35, 0, None, 3, 2.59e4, 2.7),
    (23, 200, 4, 1.76, 5, None, 3, 1.79e4, None),
    (24, 50, 1, None, 0, 1.0, 1, 4.70e3, 1.7),
    (25, 50, 1, None, 1, 0.85, 3, 5.20e3, None),
    (26, 50, 1, None, 4, 0.15, 3, 6.03e3, None),
    (27, 50, 1, None, 5, 0.80, 1, 4.35e3, None),
    (28, 200, 1, None, 0, 0.10, 3, 8.93e4, 2.1),
    (29, 200, 1, None, 5, 0.10, 3, 9.58e4, None),
    (30, 200, 4, None, 0, 0.10, 3, 2.28e4, 2.4),
    (31, 200, 4, None, 5, 0.10, 3, 1.96e4, None),
    (32, 200, 1, 1.64, 0, 0.10, 3, 9.07e4, 2.1),
    (33, 200, 1, 1.50, 5, 0.10, 3, 6.45e4, None),
    (34, 200, 4, 1.25, 0, 0.10, 3, 2.08e4, 2.2),
    (35, 200, 4, 1.80, 5, 0.10, 3, 1.63e4, None),
]

# blocks on a 50 m room, scaled linearly with room size
_LAYOUTS = {
    0: [],
    1: [(20, 20, 30, 30)],
    4: [(10, 12, 18, 20), (32, 12, 40, 20), (10, 32, 18, 40), (32, 32, 40, 40)],
    5: [(10, 12, 18, 20), (32, 12, 40, 20), (10, 32, 18, 40), (32, 32, 40, 40),
        (22, 22, 28, 28)],
}


def technique(case):
    """Technique set of a case: which of orientation / zoning / scaling are on."""
    if case <= 10:
        return "original"
    if case == 11:
        return "logistic"
    if case <= 19:
        return "orientation"
    if case <= 23:
        return "scaling"
    if case <= 31:
        return "orientation+zoning"
    return "all"


def start_for(size, n_obs):
    if n_obs in (0, 1):
        return (0.5, 0.5)
    k = size / 50.0
    return (15.0 * k, 5.0 * k)


def make_world(size, sr, n_obs):
    k = size / 50.0
    obs = tuple(Rect(a * k, b * k, c * k, d * k) for a, b, c, d in _LAYOUTS[n_obs])
    return WorldSpec(width=float(size), height=float(size), sensing_range=float(sr),
                     start=start_for(size, n_obs), obstacles=obs)


def make_scenario(case):
    _, size, sr, f, n_obs, c, idx, _, pr = ROWS[case - 1]
    tech = technique(case)
    kw = dict(avoid=AvoidConfig(f_o=0.5, t_h=default_t_h(size), dn_h=5))
    if tech == "logistic":
        kw["generator"] = "logistic"
    else:
        kw["ds_index_init"] = idx
    if tech in ("orientation", "orientation+zoning", "all"):
        kw["orientation"] = True
    if tech in ("orientation+zoning", "all"):
        kw["zoning"] = True
        kw["c"] = c
    if tech in ("scaling", "all"):
        kw["scaling"] = True
        kw["f"] = f
    return Scenario(name=f"table1_case{case}", world=make_world(size, sr, n_obs),
                    planner=PlannerConfig(**kw), baseline=n_obs == 0)


def reported(case):
    """Reported (CT, PR) for a case; PR is None where not given."""
    row = ROWS[case - 1]
    return row[7], row[8]


def bundled_path(case):
    return resources.files("chaoscover") / "scenarios" / f"table1_case{case}.json"


def load_bundled(case):
    return load_scenario(bundled_path(case))
