import re

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: full-size end-to-end criteria (slow)")


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = int(m.group(1))
    failed = report.failed
    if report.when == "call" or failed:
        prev = _RESULTS.get(key)
        _RESULTS[key] = (m.group(2), "FAIL" if failed or (prev and prev[1] == "FAIL") else "PASS",
                         dict(report.user_properties))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_RESULTS):
        name, verdict, props = _RESULTS[key]
        extra = "; ".join(f"{k}={v}" for k, v in props.items())
        terminalreporter.write_line(f"criterion {key} {name.replace('_', ' ')}: {verdict}  ({extra})")
