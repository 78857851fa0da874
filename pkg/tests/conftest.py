"""Collects acceptance outcomes and prints one verdict line per criterion."""

_labels = {}
_outcomes = {}


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("acceptance")
        if marker is not None and marker.args:
            _labels[item.nodeid] = marker.args[0]


def pytest_runtest_logreport(report):
    if report.nodeid not in _labels:
        return
    if report.when == "call" or report.failed:
        _outcomes.setdefault(report.nodeid, "PASS" if report.passed else "FAIL")
        if report.failed:
            _outcomes[report.nodeid] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, label in _labels.items():
        if nodeid in _outcomes:
            terminalreporter.write_line(f"{_outcomes[nodeid]:4}  {label}")
