"""The nine acceptance criteria at their stated tolerances, full grid.

Each criterion prints one PASS/FAIL line; the lines are also repeated in
the pytest terminal summary so they show without ``-s``.
"""

import pytest

from conftest import ACCEPTANCE_LINES
from nwe_disc import acceptance

GRID = acceptance.FULL_GRID

CRITERIA = {
    1: lambda: acceptance.spectrum(GRID),
    2: lambda: acceptance.gram_sqrt(GRID),
    3: lambda: acceptance.ud_optimum(GRID),
    4: lambda: acceptance.locc_attainment(GRID),
    5: lambda: acceptance.distilled_basis(GRID),
    6: lambda: acceptance.chen(GRID),
    7: lambda: acceptance.srm_optimality(GRID),
    8: lambda: acceptance.oblique_round_trips(),
    9: lambda: acceptance.trine(),
}


@pytest.mark.parametrize("cid", sorted(CRITERIA))
def test_criterion(cid):
    result = CRITERIA[cid]()
    line = result.line()
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert result.id == cid
    assert result.passed, line


def test_fault_injection_is_caught():
    result = acceptance.spectrum(acceptance.FAST_GRID, fault=True)
    assert not result.passed
