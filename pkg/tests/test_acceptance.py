"""Acceptance criteria A1-A12; one PASS/FAIL line per criterion."""
import pytest

from fhlab.acceptance import CRITERIA, format_result, run_criterion

RESULTS: dict = {}


@pytest.mark.slow
@pytest.mark.parametrize("name", list(CRITERIA))
def test_criterion(name):
    r = run_criterion(name)
    RESULTS[name] = r
    print(format_result(r))
    assert r.passed, format_result(r)
