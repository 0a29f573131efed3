# tests/test_selftest.py
from io import StringIO

import pytest
from rich.console import Console

from src.cli.selftest import (
    SelftestSettings,
    commutator_suite,
    crosscheck_suite,
    decomposition_suite,
    default_configurations,
    heisenberg_suite,
    levels_suite,
    membership_suite,
    merge_suite,
    render_table,
    run_selftest,
    valid_indices,
)
from src.utils.errors import InvalidIndexError

SMALL = SelftestSettings(trials=2, seed=3, word_length=6, samples=4)


def entry(passed: bool, checked: int = 1, witness=None) -> dict:
    return {"passed": passed, "checked": checked, "counterexample": witness}


def good_suite(group, settings):
    return {"always": entry(True, 3)}


def bad_suite(group, settings):
    return {"always": entry(True, 2), "never": entry(False, 1, "(1, 2)")}


def raising_suite(group, settings):
    raise InvalidIndexError("index 0 is not hyperbolic")


@pytest.mark.unit
class TestRunner:
    def test_merge(self):
        """Counts add up and only failing checks are listed."""
        merged = merge_suite("bad", bad_suite(None, SMALL))
        assert merged == {"passed": False, "checked": 3, "failures": {"never": "(1, 2)"}}

    def test_failures_and_raised_suites(self, ortho5):
        """A failing suite and a raising one both fail the run."""
        suites = {"good": good_suite, "bad": bad_suite, "boom": raising_suite}
        report = run_selftest([ortho5], SMALL, suites)
        assert not report.passed
        assert report.failures() == ["ortho/zmod:5/bad", "ortho/zmod:5/boom"]
        assert report.results["ortho/zmod:5/good"]["passed"]
        assert report.results["ortho/zmod:5/boom"]["failures"] == {"raised": "index 0 is not hyperbolic"}
        assert list(report.to_json()["suites"]) == sorted(report.results)

    def test_render_table(self, ortho5):
        """The table names every suite and marks the failure."""
        report = run_selftest([ortho5], SMALL, {"good": good_suite, "bad": bad_suite})
        buf = StringIO()
        render_table(report, Console(file=buf, width=120))
        text = buf.getvalue()
        assert "ortho/zmod:5/good" in text
        assert "FAIL" in text
        assert "pass" in text

    def test_valid_indices(self, ortho5):
        """k = +-l and i = +-j never appear."""
        for kind in ("i", "ii", "v"):
            for idx in valid_indices(ortho5, kind):
                assert idx["k"] not in (idx["l"], -idx["l"])
                if kind in ("i", "v"):
                    assert idx["i"] not in (idx["j"], -idx["j"])
        assert len(valid_indices(ortho5, "i")) == 24 * 24
        assert len(valid_indices(ortho5, "vii")) == 36

    def test_default_configurations(self):
        """Two orthogonal and two unitary contexts."""
        tags = [g.tag for g in default_configurations()]
        assert tags == ["ortho", "ortho", "unitary", "unitary"]


@pytest.mark.unit
class TestSuites:
    def test_membership(self, ortho8, unitary_gauss):
        """Random products stay in both groups."""
        for group in (ortho8, unitary_gauss):
            results = membership_suite(group, SMALL)
            assert all(r["passed"] for r in results.values()), results
            assert results["member"]["checked"] == SMALL.samples

    def test_heisenberg(self, unitary3, ortho5):
        """Heisenberg laws hold and the orthogonal group has nothing to check."""
        results = heisenberg_suite(unitary3, SMALL)
        assert all(r["passed"] for r in results.values()), results
        assert results["delta_bounds"]["checked"] == 2
        assert all(r["checked"] == 0 for r in heisenberg_suite(ortho5, SMALL).values())

    def test_commutators(self, ortho5, unitary3):
        """Commutator certificates have the right count and value."""
        for group in (ortho5, unitary3):
            results = commutator_suite(group, SMALL)
            assert all(r["passed"] for r in results.values()), results
            assert results["conjugated_commutator"]["checked"] == SMALL.samples

    def test_crosscheck(self, ortho5):
        """O_7(Z/5) agrees with the unitary context at lambda=1, mu=2."""
        results = crosscheck_suite(ortho5, SMALL)
        assert all(r["passed"] for r in results.values()), results
        assert results["short"]["checked"] == 24
        assert results["extra"]["checked"] == 6 * 5

    def test_levels(self, ortho8, unitary3):
        """Level generators are principal members of their own level."""
        for group in (ortho8, unitary3):
            results = levels_suite(group, SMALL)
            assert all(r["passed"] for r in results.values()), results

    def test_decompositions_switched_off(self, ortho5):
        """decompose=False records nothing."""
        settings = SelftestSettings(decompose=False)
        assert all(r["checked"] == 0 for r in decomposition_suite(ortho5, settings).values())


@pytest.mark.slow
class TestDefaultBattery:
    def test_passes(self):
        """The whole default battery passes with small samples."""
        report = run_selftest(default_configurations(), SelftestSettings(trials=1, seed=0, word_length=6, samples=3))
        assert report.passed, report.failures()
