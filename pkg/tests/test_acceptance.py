"""The twelve acceptance criteria at full size, each against its time budget."""

import json

import pytest

from anticyc.suite import CRITERIA, run_criterion

PROFILE = "full"
pytestmark = pytest.mark.slow


def _note(result) -> str:
    budget = f"/{result.budget:.0f}s" if result.budget is not None else ""
    return f"{result.seconds:.2f}s{budget}"


def test_every_criterion_is_present():
    assert sorted({c.number for c in CRITERIA}) == list(range(1, 13))


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"{c.number:02d}-{c.name}" for c in CRITERIA])
def test_criterion(criterion, acceptance_log, capsys):
    result = run_criterion(criterion, PROFILE)
    acceptance_log.setdefault(criterion.number, []).append(
        (criterion.name, result.status == "pass", _note(result), result.seconds))
    with capsys.disabled():
        print(f"\ncriterion {criterion.number:2d} {criterion.name}: {result.status.upper()} [{_note(result)}]")
    witness = json.dumps(result.to_json()["witness"], sort_keys=True)
    assert result.passed, f"criterion {criterion.number} failed: {witness[:2000]}"
    assert result.within_budget, f"criterion {criterion.number} took {result.seconds:.1f}s, budget {result.budget}s"


def test_full_profile_fits_in_ten_minutes(acceptance_log):
    timed = [row for rows in acceptance_log.values() for row in rows]
    if len(timed) < len(CRITERIA):
        pytest.skip("needs every criterion to have run in this session")
    total = sum(seconds for *_, seconds in timed)
    print(f"\nfull profile total: {total:.1f}s of 600s")
    assert total < 600
