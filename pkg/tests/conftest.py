import math

import numpy as np
import pytest

from periodkit.cli import default_fixture_path, ingest_curves
from periodkit.lattice import PolarizedTorus, SiegelTau

ACCEPTANCE_FILE = "test_acceptance.py"
_acceptance_docs: dict = {}
_acceptance_outcomes: dict = {}


def pytest_collection_modifyitems(items):
    for item in items:
        if ACCEPTANCE_FILE in item.nodeid and item.obj.__doc__:
            _acceptance_docs[item.nodeid] = item.obj.__doc__.strip().splitlines()[0]


def pytest_runtest_logreport(report):
    if ACCEPTANCE_FILE not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance_outcomes[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_acceptance_outcomes):
        verdict = "PASS" if _acceptance_outcomes[nodeid] == "passed" else "FAIL"
        doc = _acceptance_docs.get(nodeid, nodeid.rsplit("::", 1)[-1])
        terminalreporter.write_line(f"{verdict}  {doc}")


@pytest.fixture(scope="session")
def bundled_records():
    return ingest_curves(default_fixture_path())


@pytest.fixture(scope="session")
def record_by_label(bundled_records):
    return {r.label: r for r in bundled_records}


def product_torus(tau: complex) -> PolarizedTorus:
    """E_tau x E_tau with the product principal polarization."""
    y = tau.imag
    periods = [[1.0, tau, 0.0, 0.0], [0.0, 0.0, 1.0, tau]]
    return PolarizedTorus(2, periods, np.diag([1.0 / y, 1.0 / y]))


def random_reduced_tau(rng, im_max: float = 2.5) -> SiegelTau:
    while True:
        re = rng.uniform(-0.5, 0.5)
        im = rng.uniform(math.sqrt(3.0) / 2.0, im_max)
        if re * re + im * im >= 1.0 + 1e-6:
            return SiegelTau(re, im)
