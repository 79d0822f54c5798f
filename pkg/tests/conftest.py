import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # verdict lines from the acceptance suite, one per criterion, shown
    # regardless of capture settings
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "VERDICTS", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
