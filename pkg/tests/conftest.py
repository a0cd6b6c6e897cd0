import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from germbench.corpus import named_semigroup, sample_corpus  # noqa: E402

SMALL_SEMIGROUPS = ("I1", "I2", "I3", "B2", "chain3", "Z2-zero", "Z3-zero",
                    "double-zero-Z2", "double-zero-Z3", "double-zero-Z5")

_acceptance: dict[str, str] = {}


@pytest.fixture(scope="session")
def corpus():
    return list(sample_corpus(seed=0))


@pytest.fixture(scope="session", params=SMALL_SEMIGROUPS)
def small_semigroup(request):
    return request.param, named_semigroup(request.param)


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if name.startswith("test_criterion_"):
        _acceptance[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        num, _, rest = name[len("test_criterion_"):].partition("_")
        terminalreporter.write_line(f"[{_acceptance[name]}] criterion {int(num)}: {rest.replace('_', ' ')}")
