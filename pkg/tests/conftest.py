import sys


def pytest_terminal_summary(terminalreporter):
    results = {}
    for name, module in list(sys.modules.items()):
        if name.endswith("test_acceptance"):
            results.update(getattr(module, "RESULTS", {}))
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k, (ok, detail) in sorted(results.items()):
        terminalreporter.write_line(f"CRITERION {k}: {'PASS' if ok else 'FAIL'} {detail}")
