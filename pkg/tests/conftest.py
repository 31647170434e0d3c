import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from boostlab import Dataset  # noqa: E402

_acceptance_results = {}


def make_dataset(X, y, n_classes=None):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(y, dtype=int)
    K = n_classes or max(2, int(y.max()) + 1)
    return Dataset(X, y, [f"f{j}" for j in range(X.shape[1])], [f"c{k}" for k in range(K)])


@pytest.fixture
def separable_1d():
    return make_dataset([0.0, 1.0, 2.0, 3.0], [0, 0, 1, 1])


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("acceptance")
    if marker:
        number, title = marker
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _acceptance_results[number] = (title, status)


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            item.user_properties.append(("acceptance", tuple(m.args)))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance_results):
        title, status = _acceptance_results[number]
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}")
