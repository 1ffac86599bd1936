"""One test per acceptance criterion; each prints a [PASS]/[FAIL] line."""

import pytest

from lorentz_covol.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [num for num, _, _ in CRITERIA], ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, acceptance_lines, capsys):
    res = run_criterion(number)
    line = f"[{'PASS' if res.passed else 'FAIL'}] criterion {res.number}: {res.name}: {res.detail}"
    acceptance_lines.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert res.passed, res.detail
