import pytest

from majorana.utilities.settings import Settings
from majorana.utilities.verification import (
    FAIL,
    GATE,
    PASS,
    TREND,
    CheckResult,
    VerificationReport,
    run_verification,
)


def test_report_passes_only_when_gates_pass():
    report = VerificationReport()
    report.add_gate("exact", 0.0, 0.0)
    report.checks.append(CheckResult("drift", TREND, float("nan"), 5.0, TREND))
    assert report.passed
    report.add_gate("loose", 1.0e-3, 1.0e-2)
    assert report.checks[-1].status == FAIL
    assert not report.passed


def test_fast_verification_passes(settings):
    report = run_verification(settings, fast=True)
    names = [check.name for check in report.checks]
    assert report.passed, [c for c in report.checks if c.status != PASS]
    assert "coefficient_table" in names
    assert "gauge_potential_fd" in names
    assert "golden_rule" in names
    assert not any(name.startswith("closure") for name in names)
    assert all(check.kind == GATE for check in report.checks)


@pytest.mark.slow
def test_full_verification_passes():
    report = run_verification(Settings(), fast=False)
    assert report.passed, [c for c in report.checks if c.status == FAIL]
    trend = [check for check in report.checks if check.kind == TREND]
    assert [check.name for check in trend] == ["closure_surface_widths"]


@pytest.mark.slow
def test_matched_width_closure_sums_one_term():
    report = run_verification(Settings(), fast=False)
    (matched,) = [check for check in report.checks if check.name == "closure_matched_widths"]
    assert matched.detail.startswith("single intermediate state")
