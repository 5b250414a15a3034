"""Command-line entry point.

Exit codes: 0 ok, 1 invalid input, 2 runtime failure.
"""

import argparse
import logging
import sys

from .baseline import boustrophedon, performance_ratio
from .errors import ChaosCoverError, HasObstacles, ParseError, ValidationError
from .planner import run_coverage
from .plotting import render_plot
from .runner import EXIT_OK, EXIT_RUNTIME, EXIT_VALIDATION, run_scenario, run_sweep
from .scenario import load_scenario, load_sweep


def _cmd_run(args):
    s = load_scenario(args.scenario)
    code, summary = run_scenario(s, args.out, plot=args.plot)
    ct = summary["ct"]
    line = f"{s.name}: status={summary['status']} tc={summary['final_tc']:.4f}"
    if ct is not None:
        line += f" CT={ct:.1f} s"
    if summary["pr"] is not None:
        line += f" PR={summary['pr']:.2f}"
    print(line)
    if summary["error"]:
        print(summary["error"], file=sys.stderr)
    return code


def _cmd_sweep(args):
    spec = load_sweep(args.sweep)
    rows = run_sweep(spec, args.out, jobs=args.jobs)
    for r in rows:
        print(f"{r['rank']:>3} {r['name']} {r['status']} {r['ct'] or '-'}")
    return EXIT_OK if all(r["status"] == "ok" for r in rows) else EXIT_RUNTIME


def _cmd_baseline(args):
    s = load_scenario(args.scenario)
    try:
        b = boustrophedon(s.world, s.planner.dc, s.planner.v)
    except HasObstacles as exc:
        raise ValidationError("world.obstacles", str(exc)) from None
    print(f"T_opt={b.t_opt!r}")
    ct = args.ct
    if ct is None:
        r = run_coverage(s.planner, s.world)
        if r.status != "ok":
            print(f"planner failed: {r.status}: {r.error}", file=sys.stderr)
            return EXIT_RUNTIME
        ct = r.ct
    print(f"CT={ct!r}")
    print(f"PR={performance_ratio(ct, b.t_opt)!r}")
    return EXIT_OK


def _cmd_plot(args):
    s = load_scenario(args.scenario)
    render_plot(args.trajectory, s.world, args.output)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="chaoscover", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one scenario")
    r.add_argument("scenario")
    r.add_argument("--out", default=None, help="output directory (default: scenario name)")
    r.add_argument("--plot", action="store_true", help="also write plot.svg")
    r.set_defaults(func=_cmd_run)

    s = sub.add_parser("sweep", help="run a parameter sweep")
    s.add_argument("sweep")
    s.add_argument("--out", default="sweep")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=_cmd_sweep)

    b = sub.add_parser("baseline", help="boustrophedon T_opt and the performance ratio")
    b.add_argument("scenario")
    b.add_argument("--ct", type=float, default=None,
                   help="coverage time to compare; runs the planner when omitted")
    b.set_defaults(func=_cmd_baseline)

    pl = sub.add_parser("plot", help="render a trajectory CSV")
    pl.add_argument("trajectory")
    pl.add_argument("scenario")
    pl.add_argument("-o", "--output", default="plot.svg")
    pl.set_defaults(func=_cmd_plot)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValidationError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ChaosCoverError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
