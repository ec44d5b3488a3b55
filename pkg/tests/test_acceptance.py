"""The twelve acceptance criteria at their stated scope; one PASS/FAIL line each.

The lines are collected and printed in an "acceptance criteria" section of
the terminal summary.
"""

import pytest

from wheelworks.acceptance import CRITERIA


@pytest.mark.slow
@pytest.mark.parametrize("check", CRITERIA, ids=[c.__name__ for c in CRITERIA])
def test_criterion(check, acceptance_log):
    result = check("full")
    acceptance_log(result.line())
    assert result.passed, result.detail
