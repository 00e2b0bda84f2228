import math
import random
from fractions import Fraction as F

import pytest

from tsirelson_lab.seqvec import FinVec, IndexInterval, lp_norm, shift_support
from tsirelson_lab.tsirelson import tsirelson_norm
from tsirelson_lab.dualnorm import (
    DualTsirelsonEngine,
    LpEngine,
    TsirelsonEngine,
    dual_norm,
    dual_norm_exact_small,
    dual_norm_value,
    pairing,
    support_function_norm,
    tree_functionals,
)
from tsirelson_lab.certify import check_partition_bound

e = FinVec.basis

POOL = [F(v) for v in ("1", "-1", "1/2", "-1/2", "2", "-2", "1/3", "-1/3")]


def random_vec(rng, lo, hi):
    idx = [i for i in range(lo, hi + 1) if rng.random() < 0.75] or [hi]
    return FinVec.from_pairs((i, rng.choice(POOL)) for i in idx)


class TestPairing:
    def test_biorthogonality(self):
        assert pairing(e(1), e(1)) == 1
        assert pairing(e(2), e(1)) == 0
        assert pairing(2 * e(1) + e(3), e(1) + e(3)) == 3


class TestDualNormExamples:
    def test_unit_vectors(self):
        for n in (1, 2, 5, 9):
            assert dual_norm(e(n)).value == 1

    def test_t2_t3(self):
        assert dual_norm_value(e(2) + e(3)) == 2

    def test_t4_t5_t6(self):
        # paired with (2/3)(e4+e5+e6), which has T-norm 1
        assert dual_norm_value(e(4) + e(5) + e(6)) == 2

    def test_zero(self):
        bounds = dual_norm(FinVec.zero())
        assert bounds.value == 0

    def test_converged_bounds_match(self):
        rng = random.Random(3)
        for _ in range(15):
            bounds = dual_norm(random_vec(rng, 1, 8))
            assert bounds.lower == bounds.upper


class TestExactSmallOracle:
    def test_unit(self):
        assert dual_norm_exact_small(e(1)) == 1

    def test_t2_t3(self):
        assert dual_norm_exact_small(e(2) + e(3)) == 2

    def test_hull_cap(self):
        with pytest.raises(ValueError, match="hull"):
            dual_norm_exact_small(e(1) + e(10))

    def test_agreement_with_cutting_plane(self):
        rng = random.Random(13)
        for _ in range(100):
            hi = rng.randint(1, 10)
            y = random_vec(rng, max(1, hi - 5), hi)
            assert dual_norm_value(y) == dual_norm_exact_small(y)


class TestDualNormProperties:
    def test_duality_bound(self):
        rng = random.Random(17)
        for _ in range(40):
            y = random_vec(rng, 1, 9)
            x = random_vec(rng, 1, 9)
            assert abs(pairing(y, x)) <= dual_norm(y).upper * tsirelson_norm(x)

    def test_window_bound_sharp_constant(self):
        rng = random.Random(19)
        for n in range(2, 8):
            for _ in range(20):
                y = random_vec(rng, n + 1, 2 * n)
                sup = max(abs(c) for _, c in y.entries)
                assert dual_norm_value(y) <= 2 * sup

    def test_window_bound_sharpness_and_closed_window_failure(self):
        # the indicator of (n, 2n] attains the constant 2 exactly, while
        # already one extra index below makes the bound false
        for n in (2, 3, 5):
            half_open = FinVec.from_pairs((i, 1) for i in range(n + 1, 2 * n + 1))
            assert dual_norm_value(half_open) == 2
        closed_values = {
            2: F(3),
            3: F(8, 3),
            4: F(5, 2),
            5: F(12, 5),
        }
        for n, expected in closed_values.items():
            closed = FinVec.from_pairs((i, 1) for i in range(n, 2 * n + 1))
            assert dual_norm_value(closed) == expected
            assert expected > 2

    def test_one_unconditionality(self):
        rng = random.Random(23)
        for _ in range(25):
            y = random_vec(rng, 1, 8)
            flipped = FinVec.from_pairs(
                (i, c if rng.random() < 0.5 else -c) for i, c in y.entries
            )
            assert dual_norm_value(flipped) == dual_norm_value(y)

    def test_left_shift_monotonicity(self):
        rng = random.Random(29)
        for _ in range(25):
            y = random_vec(rng, 2, 10)
            assert dual_norm_value(shift_support(y, 1)) >= dual_norm_value(y)

    def test_order_preserving_left_moves_monotone(self):
        # coordinates moved leftward (any order-preserving relabeling with
        # new index <= old) never lose norm; this generalizes the full
        # shift and is what justifies dropping zero difference slots in
        # the james transform
        rng = random.Random(30)
        for _ in range(25):
            y = random_vec(rng, 1, 10)
            moved = []
            floor = 1
            for i, c in y.entries:
                target = rng.randint(floor, i)
                moved.append((target, c))
                floor = target + 1
            z = FinVec.from_pairs(moved)
            assert dual_norm_value(z) >= dual_norm_value(y)

    def test_partition_domination(self):
        rng = random.Random(31)
        for _ in range(30):
            top = rng.randint(2, 9)
            y = random_vec(rng, 1, top)
            cuts = sorted(rng.sample(range(1, top), k=min(2, top - 1)))
            cert = check_partition_bound(y, [0] + cuts + [top])
            assert cert.passed

    def test_tree_functionals_dual_feasible(self):
        # every enumerated functional lies in the dual unit ball
        for f in tree_functionals(IndexInterval(2, 6)):
            vec = FinVec.from_pairs(f)
            assert dual_norm_value(vec) <= 1


class TestGenericCuttingPlane:
    def test_l1_oracle_reproduces_linf(self):
        # the same machinery pointed at the l1 ball gives the sup norm
        def l1_norm(x):
            return lp_norm(x, 1)

        def l1_maximizer(x):
            return FinVec.from_pairs(
                (i, 1 if c > 0 else -1) for i, c in x.entries
            )

        rng = random.Random(37)
        for _ in range(50):
            y = random_vec(rng, 1, 10)
            got = support_function_norm(y, l1_norm, l1_maximizer)
            assert got == lp_norm(y, math.inf)


class TestEngines:
    def test_flags_and_names(self):
        for engine in (LpEngine(1), LpEngine(math.inf), TsirelsonEngine(), DualTsirelsonEngine()):
            assert engine.is_1_unconditional
            assert engine.has_monotone_basis

    def test_eval_exact(self):
        assert DualTsirelsonEngine().eval_exact(e(2) + e(3)) == 2
        assert LpEngine(1).eval_exact(e(1) - e(2)) == 2

    def test_monotone_basis_flag_honest(self):
        rng = random.Random(41)
        engine = DualTsirelsonEngine()
        for _ in range(15):
            y = random_vec(rng, 1, 8)
            top = y.entries[-1][0]
            prefix = FinVec.from_pairs(
                (i, c) for i, c in y.entries if i < top
            )
            assert engine.eval_exact(prefix) <= engine.eval_exact(y)
