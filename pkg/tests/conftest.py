import itertools
import re
from pathlib import Path

import pytest

from ffclass import Design, DesignClass, parse_design

FIXTURES = Path(__file__).parent / "fixtures"

# (s, r) -> (max |det M'M|, class, relations as (word, sign)) of the
# reference D-optimal design stored in fixtures/.
REFERENCE_CELLS = {
    (4, 5): (2**8 * 3**2, DesignClass.AFD, []),
    (4, 6): (2**10 * 5, DesignClass.AFD, []),
    (4, 7): (2**12 * 3, DesignClass.SUBSET, [((1, 2, 3), 1)]),
    (4, 8): (2**15, DesignClass.REGULAR, [((1, 2, 3), 1)]),
    (4, 9): (2**12 * 13, DesignClass.AFD, []),
    (4, 10): (2**12 * 3 * 7, DesignClass.AFD, []),
    (5, 6): (2**10 * 5**2, DesignClass.AFD, []),
    (5, 7): (2**16, DesignClass.SUBSET, [((2, 3, 4, 5), 1)]),
    (5, 8): (2**18, DesignClass.REGULAR, [((1, 2, 3), 1), ((1, 4, 5), 1)]),
    (5, 9): (2**16 * 7, DesignClass.SUBSET, [((1, 2, 3), 1)]),
    (5, 10): (2**14 * 7**2, DesignClass.AFD, []),
}


def load_reference_design(s: int, r: int) -> Design:
    return parse_design((FIXTURES / f"s{s}_r{r}.txt").read_text())


@pytest.fixture
def reference_design():
    return load_reference_design


def all_subsets(s: int):
    """Every nonempty subset of the 2^s full factorial as a Design."""
    pts = list(itertools.product([1, -1], repeat=s))
    for r in range(1, len(pts) + 1):
        for sub in itertools.combinations(pts, r):
            yield Design(s, sub)


# -- acceptance summary ----------------------------------------------------------

_ACCEPTANCE: dict[str, str] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = f"criterion {m.group(1)} ({m.group(2).replace('_', ' ')})"
    if report.when == "call" or report.outcome != "passed":
        if report.outcome == "failed" or key not in _ACCEPTANCE:
            _ACCEPTANCE[key] = "FAIL" if report.outcome == "failed" else report.outcome.upper()
        if report.outcome == "passed" and _ACCEPTANCE.get(key) != "FAIL":
            _ACCEPTANCE[key] = "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k.split()[1])):
        terminalreporter.write_line(f"{_ACCEPTANCE[key]:<7} {key}")
