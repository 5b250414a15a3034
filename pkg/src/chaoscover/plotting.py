"""Trajectory figures: obstacles, room boundary, path, zone midpoints."""

import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

from .errors import ParseError  # noqa: E402
from .world import zone_midpoints  # noqa: E402

# fixed ids and no timestamp, so the same run always gives the same file
matplotlib.rcParams["svg.hashsalt"] = "chaoscover"
_META = {"Date": None}


def read_trajectory(path):
    """Load ``t, X, Y, source`` columns from a trajectory CSV."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    if not rows or rows[0] != ["t", "X", "Y", "source"]:
        raise ParseError(f"{path}: expected header t,X,Y,source")
    try:
        data = np.array([[float(r[0]), float(r[1]), float(r[2])] for r in rows[1:]],
                        dtype=float).reshape(-1, 3)
    except (ValueError, IndexError) as exc:
        raise ParseError(f"{path}: {exc}") from None
    source = [r[3] for r in rows[1:]]
    return data[:, 0], data[:, 1], data[:, 2], source


def draw_world(ax, world, trajectory=None, midpoints=True):
    """Layer obstacles, boundary, trajectory and zone midpoints onto ``ax``."""
    # gids name the layers in the SVG
    for i, o in enumerate(world.obstacles):
        ax.add_patch(Rectangle((o.xmin, o.ymin), o.xmax - o.xmin, o.ymax - o.ymin,
                               facecolor="black", edgecolor="black", zorder=1,
                               gid=f"obstacle{i}"))
    ax.add_patch(Rectangle((0, 0), world.width, world.height, fill=False,
                           edgecolor="black", linewidth=1.5, zorder=2, gid="boundary"))
    if trajectory is not None and len(trajectory[0]):
        X, Y = trajectory
        ax.plot(X, Y, color="tab:blue", linewidth=0.3, zorder=3, gid="trajectory")
    if midpoints:
        mp = np.array(zone_midpoints(world))
        ax.plot(mp[:, 0], mp[:, 1], "o", color="tab:red", markersize=3, zorder=4,
                gid="midpoints")
    pad = 0.02 * max(world.width, world.height)
    ax.set_xlim(-pad, world.width + pad)
    ax.set_ylim(-pad, world.height + pad)
    ax.set_aspect("equal")
    ax.set_xlabel("X (m)")
    ax.set_ylabel("Y (m)")
    return ax


def plot_run(X, Y, world, out_path, title=None):
    fig, ax = plt.subplots(figsize=(6, 6))
    draw_world(ax, world, (X, Y))
    if title:
        ax.set_title(title)
    fig.savefig(out_path, format="svg", metadata=_META)
    plt.close(fig)
    return out_path


def render_plot(trajectory_csv, world, out_path):
    _, X, Y, _ = read_trajectory(trajectory_csv)
    return plot_run(X, Y, world, out_path)
