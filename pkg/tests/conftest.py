import functools

import numpy as np
import pytest

from chaoscover import table1
from chaoscover.planner import run_coverage

# (criterion number, description, passed, detail) rows collected by test_acceptance
ACCEPTANCE = []


def record(num, name, ok, detail=""):
    ACCEPTANCE.append((num, name, bool(ok), detail))
    return ok


@functools.lru_cache(maxsize=None)
def case_result(case):
    s = table1.make_scenario(case)
    return s, run_coverage(s.planner, s.world)


def inside_any_obstacle(world, X, Y):
    hit = np.zeros(len(X), dtype=bool)
    for o in world.obstacles:
        hit |= (X > o.xmin) & (X < o.xmax) & (Y > o.ymin) & (Y < o.ymax)
    return hit


@pytest.fixture
def run_case():
    return case_result


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num, name, ok, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        tag = "PASS" if ok else "FAIL"
        tr.write_line(f"[{tag}] {num:>2}. {name}" + (f" ({detail})" if detail else ""))
