import os
import warnings

import pytest
from hypothesis import HealthCheck, settings

from turbocycles.pictures import NonIntegralCountWarning

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

FULL_SCALE = os.environ.get("TURBOCYCLES_FULL_SCALE") == "1"


def pytest_collection_modifyitems(config, items):
    if FULL_SCALE:
        return
    skip = pytest.mark.skip(reason="set TURBOCYCLES_FULL_SCALE=1 to run the 200 x 100 protocol at n=64000 (about 25 min on one core)")
    for item in items:
        if "full_scale" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(autouse=True)
def _quiet_fractional_counts():
    # (3*5)**m / 2 is fractional by construction; the warning is tested explicitly elsewhere
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonIntegralCountWarning)
        yield


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "skipped"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when not in ("call", "setup") or outcome == "passed" and rep.when != "call":
                continue
            recorded = [v for name, v in getattr(rep, "user_properties", []) if name == "criterion"]
            for value in recorded:
                lines.append((value, "PASS" if outcome == "passed" else "FAIL"))
            if outcome == "failed" and not recorded and "test_acceptance" in rep.nodeid:
                number = rep.nodeid.rsplit("test_", 1)[1][:2]
                lines.append((f"{int(number):>2}. {rep.nodeid.rsplit('::', 1)[1]}: errored before a verdict", "FAIL"))
            if outcome == "skipped" and "test_acceptance" in rep.nodeid:
                lines.append((f" 8. full-scale reproduction: skipped ({rep.longrepr[2]})", "SKIP"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for text, mark in sorted(lines):
            terminalreporter.write_line(f"{mark} {text}")
