import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# (number, title, verdict, detail) for each acceptance criterion that ran.
ACCEPTANCE: list[tuple[int, str, str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        verdict = "PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL"
        detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
        number, title = marker.args
        ACCEPTANCE.append((number, title, verdict, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number, title, verdict, detail in sorted(ACCEPTANCE):
        line = f"{verdict} {number:>2}. {title}"
        terminalreporter.write_line(line + (f" -- {detail}" if detail else ""))
