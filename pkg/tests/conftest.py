import pytest

_ACCEPTANCE: list[tuple[str, str, str]] = []


class AcceptanceLog:
    def record(self, criterion: str, passed: bool | None, detail: str) -> None:
        status = "N/A" if passed is None else ("PASS" if passed else "FAIL")
        _ACCEPTANCE.append((criterion, status, detail))


@pytest.fixture(scope="session")
def acceptance() -> AcceptanceLog:
    return AcceptanceLog()


@pytest.fixture
def reference_spec():
    from qmc_american import OptionSpec

    return OptionSpec(100.0, 100.0, 0.05, 0.2, 1.0)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, status, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"[{status}] {criterion}: {detail}")
