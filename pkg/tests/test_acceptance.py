"""The ten acceptance criteria, one test each.

Each test prints its pass/fail line; ``conftest.py`` repeats all of them in
the terminal summary so they appear together at the end of a run.
"""

import pytest

from arithhom.acceptance import CRITERIA, run_criterion

RESULTS: dict[int, str] = {}


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA],
                         ids=[f"{n:02d}-{name.replace(' ', '-')}" for n, name, _ in CRITERIA])
def test_criterion(number):
    result = run_criterion(number)
    RESULTS[number] = result.line()
    print(result.line())
    assert result.passed, result.to_json()
