from unittest.mock import patch

import pytest

from arrfree.errors import ArrangementError
from arrfree.verification import (
    SUITE_NAMES,
    SUITES,
    CheckResult,
    CorpusMember,
    load_corpus,
    run_suites,
    suite_charpoly,
    suite_euler,
    suite_freeness,
    suite_hilbert,
    suite_json,
    suite_saito,
    suite_terao,
    suite_yoshinaga,
    suite_ziegler,
)


def members(*names: str) -> tuple[CorpusMember, ...]:
    by_name = {member.name: member for member in load_corpus()}
    return tuple(by_name[name] for name in names)


def assert_all_passed(results):
    assert results
    failed = [result for result in results if not result.passed]
    assert failed == []


def test_corpus_is_loaded_from_package_data():
    corpus = load_corpus()
    names = [member.name for member in corpus]
    assert len(names) == len(set(names)) == 17
    assert "braid4" in names
    (multi,) = members("boolean3-multi")
    assert not multi.is_simple
    assert multi.multiarrangement().multiplicity == (2, 1, 1)


def test_every_suite_is_registered():
    assert tuple(SUITES) == SUITE_NAMES


def test_unknown_suite_is_rejected():
    with pytest.raises(ArrangementError, match="Unknown suite"):
        run_suites(["linalg", "nope"])


def test_linalg_suite():
    assert_all_passed(run_suites(["linalg"]))


def test_charpoly_suite_covers_every_simple_member():
    results = run_suites(["charpoly"])
    assert len(results) == 16
    assert_all_passed(results)


def test_freeness_and_json_suites():
    subset = members("boolean3", "boolean3-multi", "braid3", "generic3-4")
    assert_all_passed(suite_freeness(subset))
    assert_all_passed(suite_json(subset))
    assert_all_passed(suite_hilbert(subset))
    assert_all_passed(suite_terao(subset))


def test_saito_suite():
    assert_all_passed(suite_saito(members("boolean3", "braid3", "generic3-4")))


def test_restriction_suites():
    subset = members("boolean3", "braid3")
    results = suite_ziegler(subset)
    assert len(results) == 6
    assert_all_passed(results)
    assert_all_passed(suite_euler(subset))


def test_hyperplane_section_suite():
    assert_all_passed(suite_yoshinaga(members("boolean4", "generic4-5")))


def test_wrong_expectations_are_reported():
    (braid3,) = members("braid3")
    wrong = braid3.model_copy(update={"charpoly": "t^3 - 3t^2 + 3t - 1"})
    (result,) = suite_charpoly((wrong,))
    assert not result.passed
    assert "expected t^3 - 3t^2 + 3t - 1" in result.detail

    wrong = braid3.model_copy(update={"exponents": [1, 1, 1]})
    (result,) = suite_freeness((wrong,))
    assert not result.passed


def test_rejected_members_become_failed_rows():
    broken = CorpusMember(name="broken", family="simplicial", params=[3])
    (result,) = suite_charpoly((broken,))
    assert not result.passed
    assert result.detail.startswith("ArrangementError")


def test_euler_suite_covers_every_simple_member():
    def passing(member: CorpusMember) -> CheckResult:
        return CheckResult("euler", member.name, True, "")

    with patch("arrfree.verification._check_euler", side_effect=passing):
        results = suite_euler(load_corpus())
    assert len(results) == 16
    assert {"boolean5", "braid5"} <= {result.check for result in results}


def test_euler_suite_on_a_larger_member():
    assert_all_passed(suite_euler(members("boolean5")))
