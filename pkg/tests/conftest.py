import pytest

from fastb64.vector_engine import REFERENCE, get_engine, hardware_available

_acceptance_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    key = (number, title)
    if report.when == "call" or (report.when == "setup" and not report.passed):
        status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        # a criterion spread over several tests reports its worst part
        previous = _acceptance_results.get(key, "PASS")
        _acceptance_results[key] = max(previous, status, key=("PASS", "SKIP", "FAIL").index)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), status in sorted(_acceptance_results.items()):
        terminalreporter.write_line(f"criterion {number}: {status} - {title}")


def _engines():
    engines = [pytest.param(REFERENCE, id="emulated")]
    if hardware_available():
        engines.append(pytest.param(get_engine("simd"), id="simd"))
    return engines


@pytest.fixture(params=_engines())
def engine(request):
    return request.param
