"""Test the deterministic selftest."""

import pytest

from equichain.config import EquichainConfig
from equichain.errors import EquichainError
from equichain.homology import AbelianGroupDescriptor
from equichain.ids import validate_digest
from equichain.selftest import CHECKS, expected_group_homology, report_payload, run_selftest


@pytest.fixture
def config():
    """Configuration with small sample counts."""
    return EquichainConfig(samples_per_degree=10, max_check_degree=2)


def test_expected_group_homology():
    """Test the reference values for cyclic groups."""
    assert expected_group_homology(3, 0) == AbelianGroupDescriptor(1)
    assert expected_group_homology(3, 1) == AbelianGroupDescriptor(0, (3,))
    assert expected_group_homology(3, 2) == AbelianGroupDescriptor(0)
    assert expected_group_homology(2, 5) == AbelianGroupDescriptor(0, (2,))


def test_only_runs_the_named_checks(config):
    """Test selecting a subset keeps the fixed order."""
    report = run_selftest(1, 3, config, only=["rank_formula", "group_axioms"])
    assert [c.name for c in report.checks] == ["group_axioms", "rank_formula"]
    assert report.ok


def test_unknown_check_names_are_rejected(config):
    """Test a misspelled check name raises instead of running nothing."""
    with pytest.raises(EquichainError, match="unknown selftest checks: rank_formla"):
        run_selftest(1, 2, config, only=["group_axioms", "rank_formla"])


def test_report_is_deterministic(config):
    """Test two runs with the same seed give the same digest."""
    only = ["bar_square_zero", "filtration_reductions"]
    first = report_payload(run_selftest(5, 2, config, only=only))
    second = report_payload(run_selftest(5, 2, config, only=only))
    assert first == second
    assert validate_digest(first["digest"])
    assert first["seed"] == 5


def test_full_run(config):
    """Test every check passes at a small degree."""
    report = run_selftest(0, 2, config)
    assert [c.name for c in report.checks] == [name for name, _ in CHECKS]
    failed = [(c.name, c.detail) for c in report.checks if not c.ok]
    assert not failed
