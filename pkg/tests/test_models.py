"""Test report data models."""

import pytest

from equichain.models import CheckResult, SelftestReport, ValidationReport, Violation


def test_violation_requires_identity():
    """Test a violation names its identity."""
    v = Violation("homotopy", 2, "[(1, ())]")
    assert v.to_dict() == {
        "identity": "homotopy",
        "degree": 2,
        "witness": "[(1, ())]",
        "detail": "",
    }
    with pytest.raises(ValueError, match="identity is required"):
        Violation("", 0, "")


def test_validation_report_merge():
    """Test merged reports prefix identities and add counts."""
    leg = ValidationReport(name="leg", checked=3)
    leg.add(Violation("eta_eta", 1, "x"))
    leg.add(Violation("eta_eta", 2, "y"))
    leg.add(Violation("alpha_beta", 0, "z"))
    assert leg.violated() == ["eta_eta", "alpha_beta"]

    total = ValidationReport(name="pipeline", checked=2)
    total.merge(leg, prefix="right.")
    assert total.checked == 5
    assert not total.ok
    assert total.violated() == ["right.eta_eta", "right.alpha_beta"]
    assert total.to_dict()["violations"][0]["identity"] == "right.eta_eta"


def test_validation_report_rejects_negative_counts():
    """Test checked must be non-negative."""
    with pytest.raises(ValueError, match="non-negative"):
        ValidationReport(name="x", checked=-1)


def test_selftest_report():
    """Test report status and serialization."""
    report = SelftestReport(seed=1, max_degree=3)
    assert report.ok
    report.checks.append(CheckResult("rank_formula", True, 12))
    report.checks.append(CheckResult("group_homology", False, 2, "H_1 = 0"))
    assert not report.ok
    data = report.to_dict()
    assert data["ok"] is False
    assert [c["name"] for c in data["checks"]] == ["rank_formula", "group_homology"]
    with pytest.raises(ValueError, match="non-negative"):
        SelftestReport(seed=0, max_degree=-1)
