"""The ten acceptance criteria at full scale, one pass/fail line each."""
import pytest

from rigid_deform.acceptance import CRITERIA, run_criterion

from conftest import ACCEPTANCE_LINES


@pytest.mark.slow
@pytest.mark.parametrize("number", [c[0] for c in CRITERIA])
def test_criterion(number, acceptance_runs):
    cfg, runs = acceptance_runs
    res = run_criterion(number, cfg, runs)
    ACCEPTANCE_LINES.append(res.line())
    print(res.line())
    assert res.passed, res.evidence
