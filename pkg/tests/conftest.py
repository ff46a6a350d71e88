import pytest

ACCEPTANCE_LINES: dict = {}


@pytest.fixture
def acceptance(request):
    """Record and print the pass/fail line for one acceptance criterion."""
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def report(n, ok, detail):
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[n] = line
        with capman.global_and_fixture_disabled():
            print("\n" + line)
        return ok
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
