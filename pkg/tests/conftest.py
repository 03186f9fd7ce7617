import pytest

ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record an acceptance criterion outcome for the end-of-run summary."""
    marker = request.node.get_closest_marker("criterion")
    key, title = marker.args
    ACCEPTANCE[key] = (title, None)
    yield
    outcome = getattr(request.node, "_outcome_call", None)
    ACCEPTANCE[key] = (title, outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    rep = (yield).get_result()
    if rep.when == "call":
        item._outcome_call = rep.passed


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(key, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.lstrip("AC"))):
        title, passed = ACCEPTANCE[key]
        status = {True: "PASS", False: "FAIL", None: "ERROR"}[passed]
        terminalreporter.write_line(f"{status}  {key}  {title}")
