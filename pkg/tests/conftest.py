import pytest

_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion.

    Call it with the criterion label and a dict of measured/limit pairs; the
    line is written whether or not the assertions that follow succeed.
    """

    def record(label, measurements):
        ok = all(passed for _, _, passed in measurements.values())
        parts = ", ".join(f"{k}={m:.3e} (limit {lim})" for k, (m, lim, _) in measurements.items())
        _ACCEPTANCE.append(f"{'PASS' if ok else 'FAIL'}  {label}: {parts}")
        print(_ACCEPTANCE[-1])
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
