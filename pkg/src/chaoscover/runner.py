"""Scenario execution: artifacts on disk and ranked parameter sweeps."""

import csv
import dataclasses
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .baseline import boustrophedon, performance_ratio
from .errors import ValidationError
from .plotting import plot_run
from .planner import SOURCE_NAMES, run_coverage
from .scenario import FORMAT_VERSION, Scenario, scenario_to_dict

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def write_trajectory(result, path):
    names = [SOURCE_NAMES[int(s)] for s in result.source.tolist()]
    with open(path, "w", newline="") as fh:
        fh.write("t,X,Y,source\n")
        for t, X, Y, s in zip(result.t.tolist(), result.X.tolist(), result.Y.tolist(), names):
            fh.write(f"{t!r},{X!r},{Y!r},{s}\n")


def write_coverage(result, path):
    with open(path, "w", newline="") as fh:
        fh.write("t,tc\n")
        for t, tc in zip(result.coverage_t, result.coverage_tc):
            fh.write(f"{float(t)!r},{float(tc)!r}\n")


def summarize(scenario, result, baseline=None):
    t_opt = pr = None
    if baseline is not None:
        t_opt = baseline.t_opt
        if result.ct is not None and t_opt > 0:
            pr = performance_ratio(result.ct, t_opt)
    return {
        "format_version": FORMAT_VERSION,
        "name": scenario.name,
        "status": "ok" if result.status == "ok" else result.status,
        "error": result.error,
        "ct": result.ct,
        "final_tc": result.final_tc,
        "t_opt": t_opt,
        "pr": pr,
        "n_samples": int(len(result.t)),
        "counters": result.counters,
        "zone_targets": [list(p) for p in result.targets],
        "scenario": scenario_to_dict(scenario),
    }


def run_scenario(scenario, out_dir=None, plot=False):
    """Run one scenario and write its artifacts.

    Returns ``(exit_code, summary)``; planner failures are recorded in the
    summary with a status other than ``"ok"`` and exit code 2.
    """
    out = Path(out_dir or scenario.output_dir or scenario.name)
    out.mkdir(parents=True, exist_ok=True)
    log.info("running %s -> %s", scenario.name, out)
    result = run_coverage(scenario.planner, scenario.world)
    base = None
    if scenario.baseline and not scenario.world.obstacles:
        base = boustrophedon(scenario.world, scenario.planner.dc, scenario.planner.v)
    summary = summarize(scenario, result, base)
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    write_trajectory(result, out / "trajectory.csv")
    write_coverage(result, out / "coverage.csv")
    if plot:
        plot_run(result.X, result.Y, scenario.world, out / "plot.svg", title=scenario.name)
    code = EXIT_OK if result.status == "ok" else EXIT_RUNTIME
    return code, summary


def _variant(base, combo):
    if not combo:
        return base
    planner = dataclasses.replace(base.planner, **combo)
    tag = "_".join(f"{k}={v}" for k, v in combo.items())
    return Scenario(name=f"{base.name}__{tag}", world=base.world, planner=planner,
                    baseline=base.baseline)


def _run_one(args):
    scenario, out_dir = args
    _, summary = run_scenario(scenario, out_dir)
    return summary


SWEEP_COLUMNS = ["rank", "name", "c", "f", "ds_index_init", "orientation", "zoning",
                 "scaling", "status", "ct", "final_tc"]


def run_sweep(spec, out_dir, jobs=1):
    """Run every axis combination and write ``sweep.csv`` ranked by coverage time.

    Failed runs sort after all successful ones; ties keep enumeration order.
    """
    n = spec.size()
    if n > spec.cap:
        raise ValidationError("sweep.cap", f"{n} combinations exceed the cap of {spec.cap}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    scenarios = [_variant(spec.base, combo) for combo in spec.combinations()]
    if len({s.name for s in scenarios}) != len(scenarios):
        raise ValidationError("sweep.axes", "duplicate combinations")
    work = [(s, out / s.name) for s in scenarios]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            summaries = list(ex.map(_run_one, work))
    else:
        summaries = [_run_one(w) for w in work]
    order = sorted(range(len(summaries)), key=lambda i: (
        summaries[i]["status"] != "ok" or summaries[i]["ct"] is None,
        summaries[i]["ct"] if summaries[i]["ct"] is not None else math.inf, i))
    rows = []
    for rank, i in enumerate(order, 1):
        s, summ = scenarios[i], summaries[i]
        p = s.planner
        rows.append({
            "rank": rank, "name": s.name, "c": p.c, "f": p.f,
            "ds_index_init": p.ds_index_init, "orientation": p.orientation,
            "zoning": p.zoning, "scaling": p.scaling, "status": summ["status"],
            "ct": "" if summ["ct"] is None else repr(summ["ct"]),
            "final_tc": repr(summ["final_tc"]),
        })
    with open(out / "sweep.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS)
        w.writeheader()
        w.writerows(rows)
    return rows
