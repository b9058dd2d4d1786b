import pytest
from hypothesis import settings

from lindg.field import CyclotomicField
from lindg.spherical import SphericalAlgebra, build_perf_gen, build_root_action

settings.register_profile("lindg", max_examples=40, deadline=None)
settings.load_profile("lindg")


@pytest.fixture
def QQ():
    return CyclotomicField(1)


@pytest.fixture(params=[1, 2, 3], ids=lambda d: f"d{d}")
def graded(request):
    """(d, Perf-gen(B), Z/2 action) for graded d."""
    d = request.param
    cat = build_perf_gen(SphericalAlgebra(CyclotomicField(1), d))
    return d, cat, build_root_action(cat, 2)


@pytest.fixture
def ungraded():
    cat = build_perf_gen(SphericalAlgebra(CyclotomicField(1), 0))
    return cat, build_root_action(cat, 2)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
