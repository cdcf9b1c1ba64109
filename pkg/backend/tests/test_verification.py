import pytest

from app.core.exceptions import InvalidModule
from app.services.verification import (
    CheckStatus,
    RegisteredCheck,
    SuiteBounds,
    SuiteName,
    _execute,
    registered_checks,
    run_suite,
    run_suite_sync,
)

FLAGGED = {"relations.nu-commutation-printed", "modules.x2-table-printed"}


def test_registry_covers_every_suite():
    ids = [c.check_id for c in registered_checks()]
    assert len(ids) == len(set(ids))
    for suite in SuiteName:
        if suite != SuiteName.ALL:
            assert registered_checks(suite), suite
    assert FLAGGED <= set(ids)


def test_bounds_come_from_settings():
    bounds = SuiteBounds.from_settings(max_word_len=3)
    assert bounds.max_word_len == 3
    assert bounds.random_samples == 300
    assert bounds.q is None
    with pytest.raises(ValueError):
        SuiteBounds(max_word_len=-1, max_d=0)


def test_seeded_generators_repeat():
    bounds = SuiteBounds(max_word_len=1, max_d=1, seed=3)
    assert bounds.rng("a").random() == bounds.rng("a").random()
    assert bounds.rng("a").random() != bounds.rng("b").random()


async def test_rules_suite(small_bounds):
    report = await run_suite("rules", small_bounds)
    assert [r.check_id for r in report.results] == [f"rules.R{i:02d}" for i in range(1, 22)]
    assert report.counts == {"pass": 21, "fail": 0, "flagged": 0}


async def test_full_suite_has_exactly_two_flags(small_bounds):
    report = await run_suite(SuiteName.ALL, small_bounds)
    assert report.ok, [(r.check_id, r.witness, r.detail) for r in report.failed]
    assert {r.check_id for r in report.flagged} == FLAGGED
    for outcome in report.flagged:
        assert outcome.literal and outcome.corrected and outcome.witness
    ids = [r.check_id for r in report.results]
    assert ids == sorted(ids)


async def test_degenerate_bounds():
    report = await run_suite("all", SuiteBounds(max_word_len=0, max_d=0, random_samples=20,
                                                 oracle_samples=20))
    assert report.ok, [(r.check_id, r.detail) for r in report.failed]
    assert report.counts["flagged"] == 2


async def test_numeric_modules_suite(small_bounds, q2):
    bounds = SuiteBounds(max_word_len=small_bounds.max_word_len, max_d=3, q=q2)
    report = await run_suite(SuiteName.MODULES, bounds)
    assert report.ok, [(r.check_id, r.witness) for r in report.failed]
    assert all(r.check_id.startswith("modules.") for r in report.results)


def test_raising_check_becomes_a_failure(small_bounds):
    def boom(bounds):
        raise InvalidModule("no module")

    outcomes = _execute(RegisteredCheck("modules.boom", SuiteName.MODULES, "test check", boom), small_bounds)
    assert len(outcomes) == 1
    assert outcomes[0].status == CheckStatus.FAIL
    assert "InvalidModule" in outcomes[0].detail


def test_sync_runner(small_bounds):
    report = run_suite_sync(SuiteName.CLASSIFICATION, small_bounds)
    assert report.ok
    assert report.suite == "classification"
