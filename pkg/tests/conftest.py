import pytest

# One visible pass/fail line per acceptance criterion in the terminal summary.
_ACCEPTANCE_RESULTS: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance.py" not in str(report.nodeid):
        return
    name = report.nodeid.split("::")[-1]
    _ACCEPTANCE_RESULTS[name] = report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, outcome in sorted(_ACCEPTANCE_RESULTS.items()):
        terminalreporter.write_line(f"[ACCEPTANCE] {name}: {outcome}")


@pytest.fixture
def hashed_provider():
    from newsadapt.bank.embedding import HashedNgramProvider

    return HashedNgramProvider(dim=128, n=3)
