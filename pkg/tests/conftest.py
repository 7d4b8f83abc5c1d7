import mpmath
import pytest

# criterion name -> (passed, detail), filled by test_acceptance
ACCEPTANCE = {}


@pytest.fixture
def mp50():
    with mpmath.workdps(50):
        yield mpmath.mp


@pytest.fixture
def record_criterion():
    def record(name, passed, detail):
        ACCEPTANCE[name] = (bool(passed), detail)
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in ACCEPTANCE.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
