import numpy as np
import pytest
from hypothesis import settings

from ridgeorient import synth
from ridgeorient.geometry import build_direction_set, generate_offset_rom

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture(scope="session")
def dirs16():
    return build_direction_set(16)


@pytest.fixture(scope="session")
def rom16(dirs16):
    return generate_offset_rom(dirs16, 8)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def stripe256():
    return synth.stripes(256, 256, 2, 0.0)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion of the build")
    config._acceptance = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        item.config._acceptance.append((number, title, status, item.name))


def pytest_terminal_summary(terminalreporter, config):
    rows = sorted(config._acceptance)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, name in rows:
        terminalreporter.write_line(f"[{status}] criterion {number}: {title} ({name})")
