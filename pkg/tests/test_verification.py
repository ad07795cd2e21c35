"""Plumbing of the cross-check harness (the checks themselves run in
test_acceptance.py, once, since several build large truncated spaces)."""

import math

from dephcap.verification import _ALL_CHECKS, CheckResult, _skipped


class TestCheckResult:
    def test_within_tolerance_passes(self):
        res = CheckResult("demo", value=1.0 + 1e-12, reference=1.0,
                          tolerance=1e-9)
        assert res.status == "pass"
        assert res.delta <= 1e-9

    def test_outside_tolerance_fails(self):
        res = CheckResult("demo", value=1.1, reference=1.0, tolerance=1e-9)
        assert res.status == "fail"

    def test_nan_fails(self):
        res = CheckResult("demo", value=math.nan, reference=1.0, tolerance=1e-9)
        assert res.status == "fail"

    def test_line_format(self):
        res = CheckResult("demo check", value=2.0, reference=2.0, tolerance=1e-6)
        line = res.line()
        assert "PASS" in line
        assert "demo check" in line
        assert "tol=" in line

    def test_skipped_marker(self):
        res = _skipped("demo", "resource limit")
        assert res.status.startswith("skipped")
        assert "SKIP" in res.line().upper()


def test_registry_is_nonempty_and_named():
    assert len(_ALL_CHECKS) >= 10
    names = [fn.__name__ for fn in _ALL_CHECKS]
    assert len(set(names)) == len(names)
