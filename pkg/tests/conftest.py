import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            if getattr(report, "when", "call") not in ("call", None) and outcome != "error":
                continue
            label = "PASS" if outcome == "passed" else "FAIL"
            lines.append((nodeid, label))
    if lines:
        terminalreporter.section("acceptance criteria")
        for nodeid, label in sorted(set(lines)):
            terminalreporter.write_line(f"{label}  {nodeid}")
