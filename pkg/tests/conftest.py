import os
from pathlib import Path

import numpy as np
import pytest

from tsgraphssl.dataset import Dataset, TimeSeries

DATA_ROOTS = [
    os.environ.get("TSGRAPHSSL_DATA", ""),
    str(Path(__file__).resolve().parent / "data"),
    str(Path(__file__).resolve().parents[1] / "data"),
]


def find_ucr(name):
    """Directory holding NAME_TRAIN/NAME_TEST files, or None."""
    for root in DATA_ROOTS:
        if not root:
            continue
        d = Path(root) / name
        for ext in (".tsv", ".txt"):
            if (d / f"{name}_TRAIN{ext}").exists() and (d / f"{name}_TEST{ext}").exists():
                return d
    return None


def make_dataset(rng, n=24, m=30, shift=1.5, name="synthetic"):
    """Two noisy sine classes with a phase shift; labels alternate -1/+1."""
    t = np.linspace(0, 2 * np.pi, m)
    series = []
    for i in range(n):
        label = -1 if i % 2 == 0 else 1
        phase = 0.0 if label < 0 else shift
        values = np.sin(t + phase) + 0.3 * rng.standard_normal(m)
        series.append(TimeSeries(values, label))
    return Dataset(tuple(series), name=name, class_values=("a", "b"))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def toy_dataset(rng):
    return make_dataset(rng)


# --- one PASS/FAIL line per acceptance criterion -------------------------------

_CRITERIA = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        detail = ""
        if rep.failed:
            msg = getattr(rep.longrepr, "reprcrash", None)
            detail = msg.message.splitlines()[0] if msg is not None else str(rep.longrepr)[:200]
        _CRITERIA.append((mark.args[0], mark.args[1], rep.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid, title, outcome, detail in _CRITERIA:
        status = "PASS" if outcome == "passed" else "FAIL"
        line = f"criterion {cid:<4} {status}  {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
