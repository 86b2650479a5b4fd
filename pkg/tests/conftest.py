import os
import sys

from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))
sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")

# acceptance criteria record a PASS/FAIL line here; shown after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
