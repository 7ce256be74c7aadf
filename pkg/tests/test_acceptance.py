"""The twelve acceptance criteria, run in order at their stated limits.

Criterion 11 reads the verdicts recorded by the earlier criteria, so the
parametrization order matters.
"""

import pytest

from rrealize.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [n for n, *_ in CRITERIA], ids=lambda n: f"criterion{n:02d}")
def test_criterion(number, capsys):
    outcome = run_criterion(number)
    with capsys.disabled():
        print("\n" + outcome.line())
    assert outcome.passed, outcome.detail
