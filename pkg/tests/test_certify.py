import json
from fractions import Fraction as F

import pytest

from tsirelson_lab.seqvec import FinVec
from tsirelson_lab.blockseq import BlockSequence
from tsirelson_lab.certify import (
    QUICK_SUITE,
    Certificate,
    check_block_domination,
    check_cor10,
    check_partition_bound,
    check_q_decay,
    check_shrinking_series,
    check_window_bound,
    q_estimate_scan,
    replay_certificate,
    run_suite,
)

e = FinVec.basis


def w(n):
    return FinVec.from_pairs((i, 1) for i in range(1, n + 1))


class TestWindowBound:
    def test_indicator_and_spike(self):
        cert = check_window_bound(3, samples=0, seed=0)
        assert cert.passed
        assert cert.lhs <= 2  # worst ratio over the structural patterns

    def test_sampled(self):
        cert = check_window_bound(4, samples=30, seed=1)
        assert cert.passed
        assert cert.params == {"n": 4, "window": [5, 8], "samples": 30, "seed": 1}

    def test_out_of_range_n(self):
        with pytest.raises(ValueError):
            check_window_bound(1)

    def test_corrupted_constant_fails_with_witness(self):
        cert = check_window_bound(3, samples=0, seed=0, constant=F(19, 10))
        assert not cert.passed
        assert cert.witness["vector"]["entries"]  # the violating vector

    def test_replay(self):
        cert = check_window_bound(3, samples=10, seed=2)
        assert replay_certificate(cert) == cert.lhs


class TestPartitionBound:
    def test_single_block_from_one(self):
        y = e(1) + 2 * e(2)
        cert = check_partition_bound(y, [0, 2])
        assert cert.passed
        assert cert.lhs == cert.rhs  # one block starting at index 1

    def test_singleton_blocks(self):
        cert = check_partition_bound(e(2) + e(3), [0, 2, 3])
        assert cert.passed

    def test_bad_boundaries(self):
        with pytest.raises(ValueError):
            check_partition_bound(e(3), [0, 2])
        with pytest.raises(ValueError):
            check_partition_bound(e(1), [1, 2])

    def test_replay(self):
        cert = check_partition_bound(e(2) + e(3), [0, 2, 3])
        assert replay_certificate(cert) == cert.lhs


class TestBlockDomination:
    def test_basis_boundary_convention(self):
        u = BlockSequence.canonical_basis(1)
        cert = check_block_domination(u, e(1))
        assert cert.lhs == 1 and cert.rhs == 1 and cert.passed

    def test_w_pattern(self):
        u = BlockSequence.canonical_basis(3)
        cert = check_block_domination(u, w(3))
        assert cert.passed

    def test_unnormalized_rejected(self):
        u = BlockSequence((2 * e(1),), (0, 1))
        with pytest.raises(ValueError, match="not normalized"):
            check_block_domination(u, e(1))

    def test_replay(self):
        u = BlockSequence.canonical_basis(3)
        cert = check_block_domination(u, e(1) - e(2) + e(3))
        assert replay_certificate(cert) == cert.lhs


class TestCor10:
    def test_indicator(self):
        u = BlockSequence.canonical_basis(4)
        a = FinVec.from_pairs((j, 1) for j in range(2, 5))
        cert = check_cor10(u, 2, a)
        assert cert.passed
        assert cert.lhs <= 2  # plateau value is exactly 2

    def test_spike(self):
        u = BlockSequence.canonical_basis(4)
        cert = check_cor10(u, 2, e(3))
        assert cert.passed and cert.lhs == 1

    def test_support_outside_window_rejected(self):
        u = BlockSequence.canonical_basis(4)
        with pytest.raises(ValueError):
            check_cor10(u, 2, e(1))

    def test_constant_is_range_limited(self):
        # document the exact regime of the constant 4 for compacted
        # difference slots: alternating coefficients attain it at n=3 and
        # exceed it on wider windows, while n=2 windows max out at 3
        alt = lambda lo, hi: FinVec.from_pairs(
            (i, (-1) ** k) for k, i in enumerate(range(lo, hi + 1))
        )
        u6 = BlockSequence.canonical_basis(6)
        assert check_cor10(u6, 3, alt(3, 6), skip_normalization_check=True).lhs == 4
        u10 = BlockSequence.canonical_basis(10)
        cert = check_cor10(u10, 5, alt(5, 10), skip_normalization_check=True)
        assert cert.lhs == 6 and not cert.passed


class TestQEstimateScan:
    def test_unit_range_q1(self):
        u = BlockSequence.canonical_basis(2)
        report = q_estimate_scan(
            u, F(1), [(1, 1)], skip_normalization_check=True, samples=0
        )
        assert report.per_range[0].lower == 1  # unit vector ratio

    def test_plateau_bound_q2(self):
        u = BlockSequence.canonical_basis(32)
        report = q_estimate_scan(
            u, F(2), [(15, 30)], skip_normalization_check=True, samples=0
        )
        bounds = report.per_range[0]
        assert bounds.upper <= 1  # 4 / (16)^(1/2)
        assert bounds.upper * 4 >= 2 - F(1, 10**6)  # close to 2/4

    def test_q_below_one_rejected(self):
        u = BlockSequence.canonical_basis(2)
        with pytest.raises(ValueError):
            q_estimate_scan(u, F(1, 2), [(1, 2)], skip_normalization_check=True)

    def test_decay_certificate(self):
        cert = check_q_decay(levels=3, seed=0, samples=2)
        assert cert.passed
        report = cert.witness["report"]
        uppers = [F(b["upper"]) for b in report["per_range"]]
        lowers = [F(b["lower"]) for b in report["per_range"]]
        assert all(uppers[j + 1] < lowers[j] for j in range(len(uppers) - 1))


class TestShrinkingSeries:
    def test_levels(self):
        u = BlockSequence.canonical_basis(16)
        cert = check_shrinking_series(u, 3, skip_normalization_check=True)
        assert cert.passed
        for level in cert.witness["levels"]:
            assert F(level["norm"]) <= F(level["bound"])

    def test_zero_levels_vacuous(self):
        u = BlockSequence.canonical_basis(1)
        cert = check_shrinking_series(u, 0, skip_normalization_check=True)
        assert cert.passed and cert.witness == {}

    def test_not_enough_blocks(self):
        u = BlockSequence.canonical_basis(4)
        with pytest.raises(ValueError):
            check_shrinking_series(u, 3, skip_normalization_check=True)

    def test_replay(self):
        u = BlockSequence.canonical_basis(8)
        cert = check_shrinking_series(u, 2, skip_normalization_check=True)
        assert replay_certificate(cert) == cert.lhs


class TestRunSuite:
    def test_quick_suite_passes(self):
        report = run_suite({"seed": 7, "checks": QUICK_SUITE})
        assert report.passed
        assert report.failures == 0
        assert len(report.certificates) > 0

    def test_empty_config(self):
        report = run_suite({"seed": 0, "checks": []})
        assert report.passed and report.certificates == ()

    def test_unknown_check_rejected(self):
        with pytest.raises(ValueError, match="unknown check"):
            run_suite({"seed": 0, "checks": [{"name": "nope"}]})

    def test_corrupted_constant_fails(self):
        config = {
            "seed": 7,
            "checks": [
                {"name": "window_bound", "samples": 5, "ns": [3], "constant": "19/10"}
            ],
        }
        report = run_suite(config)
        assert not report.passed
        failing = [c for c in report.certificates if not c.passed]
        assert failing and failing[0].witness["vector"]["entries"]

    def test_reports_byte_identical(self):
        config = {"seed": 3, "checks": [{"name": "window_bound", "samples": 5, "ns": [2, 3]}]}
        assert run_suite(config).dumps() == run_suite(config).dumps()

    def test_parallel_matches_sequential(self):
        config = {
            "seed": 3,
            "checks": [
                {"name": "window_bound", "samples": 5, "ns": [2]},
                {"name": "shrinking_series", "levels": 2},
            ],
        }
        assert run_suite(config, workers=2).dumps() == run_suite(config).dumps()

    def test_json_schema(self):
        report = run_suite(
            {"seed": 1, "checks": [{"name": "window_bound", "samples": 2, "ns": [2]}]}
        )
        obj = json.loads(report.dumps())
        cert = obj["certificates"][0]
        assert set(cert) == {"check", "params", "lhs", "rhs", "constant", "witness", "pass"}
        assert isinstance(cert["lhs"], str) and isinstance(cert["pass"], bool)

    def test_csv_rows(self):
        report = run_suite(
            {"seed": 1, "checks": [{"name": "window_bound", "samples": 2, "ns": [2, 3]}]}
        )
        rows = report.csv_rows()
        assert len(rows) == 2
        assert rows[0][0].startswith("window_bound")
