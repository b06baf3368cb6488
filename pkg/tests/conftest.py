import re

ACCEPTANCE = "test_acceptance.py"
_results = {}


def pytest_runtest_logreport(report):
    """Collect one verdict per acceptance criterion (all its tests must pass)."""
    if ACCEPTANCE not in report.nodeid:
        return
    match = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if not match or (report.when != "call" and report.outcome == "passed"):
        return
    entry = _results.setdefault(int(match.group(1)), {})
    name = match.group(2).replace("_", " ")
    entry[name] = entry.get(name, True) and report.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num, parts in sorted(_results.items()):
        ok = all(parts.values())
        detail = "; ".join(f"{name}: {'pass' if p else 'FAIL'}" for name, p in parts.items())
        terminalreporter.write_line(f"criterion {num:2d}  {'PASS' if ok else 'FAIL'}  ({detail})")
