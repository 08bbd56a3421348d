import time
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from doublegame import DoubleGame, NormalFormGame, SocialParams, build_dg, example_grid

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def tournament_params():
    return SocialParams.tournament()


@pytest.fixture
def social_dg(tournament_params):
    return build_dg(tournament_params)


@pytest.fixture
def grid_one(tournament_params):
    return example_grid(tournament_params, "I")


@pytest.fixture
def grid_two(tournament_params):
    return example_grid(tournament_params, "II")


@pytest.fixture
def b_lt_a_params():
    return SocialParams.symmetric(5, 4, 2, 0, Fraction(7, 2))


def coherent_mixed_game():
    """Row player indifferent against C at lam = 1/2; column strictly prefers C when p = 1/2."""
    g1 = NormalFormGame.bimatrix([[(2, 3), (0, 1)], [(0, 2), (1, 0)]])
    g2 = NormalFormGame.bimatrix([[(0, 1), (0, 0)], [(2, 5), (1, 1)]])
    return DoubleGame(g1, g2)


@pytest.fixture
def mixed_dg():
    return coherent_mixed_game()


# -- acceptance reporting ----------------------------------------------------

_ACCEPTANCE = {}
_SESSION = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")


def pytest_sessionstart(session):
    _SESSION["start"] = time.perf_counter()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[number] = (title, report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok = _ACCEPTANCE[number]
        tr.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}")
    tr.write_line(f"session wall time: {time.perf_counter() - _SESSION['start']:.2f} s")
