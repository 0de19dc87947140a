import pytest

from conftest import ACCEPTANCE_LINES
from dworkzeta.acceptance import CHECKS, run_checks


@pytest.mark.parametrize("number", [c[0] for c in CHECKS], ids=[f"{c[0]}-{c[1]}" for c in CHECKS])
def test_acceptance_criterion(number):
    (res,) = run_checks([number])
    line = res.line()
    print(line)
    ACCEPTANCE_LINES.append((number, line))
    assert res.passed, res.detail
    assert res.within_budget, f"{res.seconds:.1f}s exceeds the {res.budget}s budget"
