import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # expose the call-phase outcome so the acceptance suite can print its
    # PASS/FAIL line per criterion
    outcome = yield
    report = outcome.get_result()
    if report.when == "call":
        item.rep_call = report
