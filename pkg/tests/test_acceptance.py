"""Acceptance criteria at their stated tolerances; one pass/fail line each."""

import pytest

from risscatter.acceptance import ALL


@pytest.mark.parametrize("check", ALL, ids=[f"criterion_{fn.number}" for fn in ALL])
def test_criterion(check):
    result = check()
    print(result.line())
    assert result.passed, result.detail
