import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helix_steiner import HelixParams, kernels  # noqa: E402

OMEGA_R = math.pi - math.acos(2.0 / 3.0)
A_R = math.sqrt(30.0) / (9.0 * OMEGA_R)
RHO_R = (3.0 * math.sqrt(3.0) + math.sqrt(7.0)) / 10.0


@pytest.fixture
def crit():
    return HelixParams(OMEGA_R, A_R)


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request, monkeypatch):
    """Route the tree code through each available kernel backend."""
    mod = kernels.available_backends()[request.param]
    for name in ("fermat3", "sweep", "mst_length"):
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    return request.param


ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the verdict follows the test outcome."""
    key = request.node.name
    ACCEPTANCE[key] = (False, "did not finish")

    def note(detail):
        ACCEPTANCE[key] = (False, detail)

    yield note
    passed = not getattr(request.node, "_ac_failed", True)
    ACCEPTANCE[key] = (passed, ACCEPTANCE[key][1])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item._ac_failed = rep.failed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")
