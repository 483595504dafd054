import functools

import pytest

from asmcurve import curve_from_dict
from asmcurve import autgroup as ag

CONFIGS = {
    "asm_p3": dict(p=3, e=1, L1=[2, 1], L2=[2, 1], c=1),
    "mixed_p3": dict(p=3, e=1, L1=[2, 1], L2=[1, 1], c=1),
    "asm_p2e2": dict(p=2, e=2, L1=[1, 0, 1], L2=[1, 0, 1], c=1),
    "lin_p2_x4x2x": dict(p=2, e=2, L1=[1, 1, 1], L2=[1, 1, 1], c=1),
    "mixed_p2e2": dict(p=2, e=2, L1=[1, 1, 1], L2=[1, 0, 1], c=1),
    "asm_p5": dict(p=5, e=1, L1=[4, 1], L2=[4, 1], c=1),
    "asm_p3e2": dict(p=3, e=2, L1=[2, 0, 1], L2=[2, 0, 1], c=1),
}


@functools.lru_cache(maxsize=None)
def curve(name):
    return curve_from_dict(CONFIGS[name])


@functools.lru_cache(maxsize=None)
def group(name):
    return ag.closure(ag.build_generators(curve(name)))


@pytest.fixture(params=["asm_p3", "asm_p2e2", "asm_p5"])
def small_curve(request):
    return curve(request.param)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, label = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {label}")
