import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

CRITERIA = {}


def record(number: int, name: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {number:2d} [{name}]: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    CRITERIA[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[n])
