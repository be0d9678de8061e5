import random
from fractions import Fraction

import pytest

from parhiggs.parabolic import ParabolicBundleData, PointWeights

_RESULTS = []


def random_point(rng: random.Random, rank: int, max_den: int = 12) -> PointWeights:
    ws = []
    for _ in range(rank):
        q = rng.randint(1, max_den)
        ws.append(Fraction(rng.randrange(q), q))
    return PointWeights.from_multiset(ws)


def random_bundle(rng: random.Random, s: int, rank: int | None = None) -> ParabolicBundleData:
    rank = rank if rank is not None else rng.randint(1, 4)
    points = tuple(random_point(rng, rank) for _ in range(s))
    return ParabolicBundleData(rank, rng.randint(-20, 20), points)


@pytest.fixture
def rng():
    return random.Random(20261014)


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            item.user_properties.append(("criterion", marker.args))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        number, title = marker.args
        _RESULTS.append((number, title, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed in sorted(_RESULTS):
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {title}")
