import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "exact",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
    derandomize=True,
)
settings.load_profile("exact")


@pytest.fixture
def rng():
    return random.Random(20240611)


# ---------------------------------------------------------------- acceptance summary
_ACCEPTANCE: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and rep.passed:
        return
    number, title = mark.args
    entry = _ACCEPTANCE.setdefault(number, {"title": title, "passed": True, "details": []})
    entry["passed"] &= rep.passed
    entry["details"] += [str(v) for k, v in item.user_properties if k == "detail"]


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        entry = _ACCEPTANCE[number]
        verdict = "PASS" if entry["passed"] else "FAIL"
        line = f"[{verdict}] {number:2d}. {entry['title']}"
        if entry["details"]:
            line += "  (" + "; ".join(entry["details"]) + ")"
        terminalreporter.write_line(line)
