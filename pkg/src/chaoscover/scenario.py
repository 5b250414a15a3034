"""Scenario and sweep files: JSON schema, validation and round-tripping.

A scenario file looks like::

    {
      "format_version": 1,
      "name": "table1_case1",
      "world": {"width": 50, "height": 50, "sensing_range": 1,
                "start": [0.5, 0.5],
                "obstacles": [[[10, 12], [18, 20]]]},
      "planner": {"dc": 0.9, "ds_index_init": 3, "orientation": false, ...},
      "baseline": true
    }

Obstacles are ``[[xmin, ymin], [xmax, ymax]]`` pairs in metres. Unknown
keys anywhere are rejected.
"""

import dataclasses
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

from .avoidance import AvoidConfig
from .dynamics import ArnoldParams, IntegratorConfig
from .errors import ParseError, ValidationError
from .planner import PlannerConfig
from .world import Rect, WorldSpec

FORMAT_VERSION = 1

_NESTED = {"avoid": AvoidConfig, "integrator": IntegratorConfig, "arnold": ArnoldParams}


@dataclass(frozen=True)
class Scenario:
    name: str
    world: WorldSpec
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    baseline: bool = False
    output_dir: str = None


def _check_keys(data, allowed, where):
    if not isinstance(data, dict):
        raise ValidationError(where, "expected an object")
    extra = sorted(set(data) - set(allowed))
    if extra:
        raise ValidationError(f"{where}.{extra[0]}", "unknown key")


def _build(cls, data, where):
    names = [f.name for f in dataclasses.fields(cls)]
    _check_keys(data, names, where)
    kwargs = {}
    for k, v in data.items():
        if k in _NESTED and cls is PlannerConfig:
            v = _build(_NESTED[k], v, f"{where}.{k}")
        kwargs[k] = v
    try:
        return cls(**kwargs)
    except ValidationError as exc:
        if exc.field.startswith(where):
            raise
        raise ValidationError(f"{where}.{exc.field.split('.')[-1]}", str(exc).split(": ", 1)[-1]) from None
    except TypeError as exc:
        raise ValidationError(where, str(exc)) from None


def world_from_dict(data):
    _check_keys(data, ["width", "height", "sensing_range", "start", "obstacles"], "world")
    obstacles = []
    for i, o in enumerate(data.get("obstacles", [])):
        try:
            (x0, y0), (x1, y1) = o
            obstacles.append(Rect(float(x0), float(y0), float(x1), float(y1)))
        except (TypeError, ValueError):
            raise ValidationError(f"world.obstacles[{i}]", "expected [[xmin, ymin], [xmax, ymax]]") from None
    kw = {k: v for k, v in data.items() if k != "obstacles"}
    try:
        return WorldSpec(obstacles=tuple(obstacles), **kw)
    except TypeError as exc:
        raise ValidationError("world", str(exc)) from None


def world_to_dict(w):
    return {
        "width": w.width,
        "height": w.height,
        "sensing_range": w.sensing_range,
        "start": list(w.start),
        "obstacles": [[[o.xmin, o.ymin], [o.xmax, o.ymax]] for o in w.obstacles],
    }


def planner_from_dict(data):
    return _build(PlannerConfig, data, "planner")


def planner_to_dict(cfg):
    out = {}
    for f in dataclasses.fields(cfg):
        v = getattr(cfg, f.name)
        if dataclasses.is_dataclass(v):
            v = dataclasses.asdict(v)
        elif isinstance(v, tuple):
            v = list(v)
        out[f.name] = v
    return out


def scenario_from_dict(data):
    _check_keys(data, ["format_version", "name", "world", "planner", "baseline", "output_dir"],
                "scenario")
    version = data.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ValidationError("format_version", f"unsupported version {version!r}")
    if "name" not in data or not isinstance(data["name"], str):
        raise ValidationError("name", "required string")
    if "world" not in data:
        raise ValidationError("world", "required")
    return Scenario(
        name=data["name"],
        world=world_from_dict(data["world"]),
        planner=planner_from_dict(data.get("planner", {})),
        baseline=bool(data.get("baseline", False)),
        output_dir=data.get("output_dir"),
    )


def scenario_to_dict(s):
    out = {
        "format_version": FORMAT_VERSION,
        "name": s.name,
        "world": world_to_dict(s.world),
        "planner": planner_to_dict(s.planner),
        "baseline": s.baseline,
    }
    if s.output_dir is not None:
        out["output_dir"] = s.output_dir
    return out


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None


def load_scenario(path):
    return scenario_from_dict(_read_json(path))


def save_scenario(s, path):
    Path(path).write_text(json.dumps(scenario_to_dict(s), indent=2) + "\n")


SWEEP_AXES = ("c", "f", "ds_index_init", "orientation", "zoning", "scaling")


@dataclass(frozen=True)
class SweepSpec:
    base: Scenario
    axes: dict = field(default_factory=dict)
    cap: int = 256

    def size(self):
        n = 1
        for vals in self.axes.values():
            n *= len(vals)
        return n

    def combinations(self):
        keys = [k for k in SWEEP_AXES if k in self.axes]
        for combo in itertools.product(*(self.axes[k] for k in keys)):
            yield dict(zip(keys, combo))


def load_sweep(path):
    """Sweep file: ``{"format_version": 1, "base": <scenario or path>, "axes": {...}, "cap": N}``."""
    data = _read_json(path)
    _check_keys(data, ["format_version", "base", "axes", "cap"], "sweep")
    base = data.get("base")
    if isinstance(base, str):
        base_path = Path(base)
        if not base_path.is_absolute():
            base_path = Path(path).parent / base_path
        base = load_scenario(base_path)
    elif isinstance(base, dict):
        base = scenario_from_dict(base)
    else:
        raise ValidationError("sweep.base", "scenario object or path required")
    axes = data.get("axes", {})
    _check_keys(axes, SWEEP_AXES, "sweep.axes")
    for k, vals in axes.items():
        if not isinstance(vals, list) or not vals:
            raise ValidationError(f"sweep.axes.{k}", "need a non-empty list")
    cap = data.get("cap", 256)
    if not isinstance(cap, int) or cap < 1:
        raise ValidationError("sweep.cap", "must be a positive integer")
    return SweepSpec(base=base, axes=axes, cap=cap)
