import random
from pathlib import Path

import pytest

from oscbasis import build_basis, build_track, example_path, load_triangulation, random_triangulation

DATA = Path(__file__).parent / "data"
FIXTURES = ("figure8", "one_tet_two_edges", "one_tet_three_edges")

# seeded random gluings for the structural checks: (n, seed)
RANDOM_CASES = ((2, 11), (3, 12), (3, 13), (4, 14), (3, 90), (4, 22))


def random_case(n: int, seed: int):
    return random_triangulation(n, random.Random(seed))


def all_triangulations():
    out = [(name, load_triangulation(example_path(name))) for name in FIXTURES]
    out += [(f"random-n{n}-s{seed}", random_case(n, seed)) for n, seed in RANDOM_CASES]
    return out


_CACHE: dict = {}


def cached_basis(name: str, T):
    if name not in _CACHE:
        _CACHE[name] = build_basis(build_track(T))
    return _CACHE[name]


@pytest.fixture(scope="session")
def fig8():
    return load_triangulation(example_path("figure8"))


@pytest.fixture(scope="session")
def fig8_track(fig8):
    return build_track(fig8)


@pytest.fixture(scope="session")
def fig8_basis(fig8):
    return cached_basis("figure8", fig8)


@pytest.fixture(scope="session")
def one_tet():
    return load_triangulation(example_path("one_tet_two_edges"))


@pytest.fixture(scope="session")
def one_tet_track(one_tet):
    return build_track(one_tet)


@pytest.fixture(params=[name for name, _ in all_triangulations()])
def any_case(request):
    T = dict(all_triangulations())[request.param]
    return request.param, T, cached_basis(request.param, T)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} [{num}] {mod.TITLES[num]} -- {detail}")
