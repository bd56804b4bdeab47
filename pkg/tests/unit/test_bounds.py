"""Tests for the lower-bound inequality and the remark checks."""

import math

import pytest

from src.lowerbound.bounds import (
    BoundMode,
    block_count,
    fifth_root_remark,
    lower_bound_inequality,
    remark_conditions,
    remark_consistency,
    smallest_power_of_two_ruled_out,
)
from src.utils.errors import InvalidParameterError, InvalidSizeError


class TestInequality:
    """Direct evaluation of the inequality."""

    def test_forward_ruled_out(self):
        report = lower_bound_inequality(1024, 1, 0, BoundMode.FORWARD, log2_m=200)
        assert (report.k, report.v) == (2, 2)
        assert report.lhs == pytest.approx(8 * math.log2(1025) + 804, rel=1e-9)
        assert report.lhs == pytest.approx(884.01, abs=0.01)
        assert report.ruled_out
        assert report.margin == pytest.approx(139.99, abs=0.01)
        assert report.v1 is None

    def test_forward_not_ruled_out(self):
        report = lower_bound_inequality(1024, 1, 0, BoundMode.FORWARD, log2_m=300)
        assert report.lhs == pytest.approx(8 * math.log2(1025) + 1204, rel=1e-9)
        assert not report.ruled_out
        assert report.margin < 0

    def test_general(self):
        report = lower_bound_inequality(4096, 1, 1, BoundMode.GENERAL, m=2 ** 10)
        assert (report.k, report.v, report.v1, report.v2) == (4, 9, 3, 3)
        expected = 144 * math.log2(4097) + 360 + 9 * (1 + math.log2(9))
        assert report.lhs == pytest.approx(expected, rel=1e-9)
        assert report.lhs == pytest.approx(2125.6, abs=0.05)
        assert report.ruled_out

    def test_m_and_log2_m_agree(self):
        a = lower_bound_inequality(4096, 2, 0, m=2 ** 40)
        b = lower_bound_inequality(4096, 2, 0, log2_m=40.0)
        assert a.lhs == pytest.approx(b.lhs)

    def test_zero_heads(self):
        report = lower_bound_inequality(16, 0, 0, log2_m=1)
        # v = 1, k = 0: lhs = 1·(1 + lg 1)
        assert report.lhs == pytest.approx(1.0)

    def test_summary_and_aliases(self):
        report = lower_bound_inequality(1024, 1, 0, log2_m=200)
        assert report.summary() == "ruledOut=true margin=139.99"
        dumped = report.model_dump(mode="json", by_alias=True)
        assert dumped["ruledOut"] is True
        assert dumped["m_log2"] == 200
        assert dumped["rhs"] == 1024

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"m": None, "log2_m": None},
            {"m": 4, "log2_m": 2.0},
            {"m": 0},
            {"log2_m": -1.0},
        ],
    )
    def test_bad_state_budget(self, kwargs):
        with pytest.raises(InvalidParameterError):
            lower_bound_inequality(1024, 1, 0, **kwargs)

    def test_forward_mode_rejects_backward_heads(self):
        with pytest.raises(InvalidParameterError):
            lower_bound_inequality(1024, 1, 1, BoundMode.FORWARD, log2_m=1)

    def test_bad_n(self):
        with pytest.raises(InvalidSizeError):
            lower_bound_inequality(0, 1, 0, log2_m=1)

    def test_block_count(self):
        assert block_count(2, 0, BoundMode.FORWARD) == (5, 5, 1)
        assert block_count(2, 1, BoundMode.GENERAL) == (6 * 5, 6, 5)


class TestRemarks:
    """Consistency of the parameter remarks."""

    @pytest.mark.parametrize("kf,divisor", [(1, 8), (2, 40)])
    def test_large_n_is_ruled_out(self, kf, divisor):
        n = 2 ** 20
        holds, log2_m = remark_conditions(n, kf)
        assert holds
        assert log2_m == pytest.approx(n / divisor)
        assert lower_bound_inequality(n, kf, 0, log2_m=log2_m).ruled_out

    def test_conditions_fail_for_small_n(self):
        holds, _ = remark_conditions(16, 1)
        assert not holds

    def test_consistency_report(self):
        report = remark_consistency([(2 ** e, kf) for e in (4, 12, 20) for kf in (1, 2)])
        assert len(report.samples) == 6
        assert report.violations == []
        n1 = report.smallest_n["1"]
        assert n1 is not None and n1 <= 2 ** 20
        assert smallest_power_of_two_ruled_out(1) == n1
        assert "smallestN" in report.model_dump(by_alias=True)

    def test_root_heads_remark(self):
        report = fifth_root_remark([10, 50, 100, 200])
        assert not report.samples[0].ruled_out
        assert report.samples[-1].ruled_out
        assert report.ruled_out_from is not None and report.ruled_out_from > 10
        assert report.samples[0].kf == 4
