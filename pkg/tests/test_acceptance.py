"""One test per acceptance criterion, at full size and stated tolerance.

Each test prints a single PASS/FAIL line and also feeds the summary block
at the end of the pytest run.
"""
import pytest

from osx.acceptance import CHECKS

pytestmark = pytest.mark.acceptance


@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number, acceptance_lines):
    result = CHECKS[number](seed=0)
    line = result.line()
    acceptance_lines.append(line)
    print(line)
    for d in result.details:
        print("   ", d)
    assert result.passed, line
