import pytest

_criteria: list[tuple[str, str, float]] = []


@pytest.fixture
def criterion(request):
    """Tag an acceptance test so the summary can report it by name."""

    def tag(label: str):
        request.node.user_properties.append(("criterion", label))

    return tag


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    labels = [v for k, v in report.user_properties if k == "criterion"]
    if labels:
        _criteria.append((labels[0], "PASS" if report.passed else "FAIL", report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome, secs in _criteria:
        terminalreporter.write_line(f"{outcome}  {label}  ({secs:.1f} s)")
