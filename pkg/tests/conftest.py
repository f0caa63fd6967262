import pytest
from hypothesis import settings

from weil.verify import family

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def fam():
    return family()


@pytest.fixture(scope="session")
def D(fam):
    return fam["W_D"]


@pytest.fixture(scope="session")
def D2(fam):
    return fam["W_D2"]


@pytest.fixture(scope="session")
def Dv2(fam):
    return fam["W_D(2)"]


@pytest.fixture(scope="session")
def DxD(fam):
    return fam["W_DxD"]


@pytest.fixture(scope="session")
def R(fam):
    return fam["R"]


@pytest.fixture(scope="session")
def all_reports():
    from weil.verify import run_all
    return run_all()


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's verdict; printed in the terminal summary."""
    label = request.node.get_closest_marker("criterion").args[0]
    notes = {}
    yield notes
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    detail = ", ".join(f"{k}={v}" for k, v in notes.items())
    line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): an acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
