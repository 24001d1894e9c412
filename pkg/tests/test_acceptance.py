"""The eleven acceptance criteria, each at zero tolerance.

Every test prints one PASS/FAIL line; run ``pytest -s tests/test_acceptance.py``
to see them, or ``loopslice verify-all --seed 0``.
"""

import pytest

from loopslice.acceptance import CRITERIA, run_criterion

SEED = 0


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda k: f"criterion_{k:02d}")
def test_criterion(number):
    result = run_criterion(number, seed=SEED)
    print(f"\n{result.line()}  ({result.seconds:.2f}s)")
    for line in result.details:
        print(f"      {line}")
    assert result.passed, "\n".join(result.details)


def test_worked_fiber_point_in_report():
    result = run_criterion(4, seed=SEED)
    assert any("(1, 2, 1, 1)" in line for line in result.details)


def test_criteria_are_seed_stable():
    for number in (4, 5):
        assert run_criterion(number, seed=7).passed
