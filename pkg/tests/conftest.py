import sys


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("tests.test_acceptance")
    if not module or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n, (ok, detail) in sorted(module.RESULTS.items()):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
