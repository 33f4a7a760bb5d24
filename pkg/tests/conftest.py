import pytest


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion, then enforce it."""

    def record(number, label, ok, detail=""):
        status = "PASS" if ok else "FAIL"
        line = f"criterion {number:02d} {label}: {status}"
        if detail:
            line += f"  [{detail}]"
        request.config.acceptance_lines.append(line)
        assert ok, line

    return record
