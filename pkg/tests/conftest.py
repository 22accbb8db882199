import os

# Must happen before numba is first imported anywhere: the worker pool size
# is fixed at import time, and the multi-thread tests need a real pool even
# on a single-core machine.
os.environ.setdefault("NUMBA_NUM_THREADS", "8")

# One line per acceptance criterion, re-emitted after capture ends so the
# verdicts always appear in the terminal output.
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
