import itertools
import math
import random
from fractions import Fraction as F

import pytest

from tsirelson_lab.seqvec import EventuallyConstantSeq, FinVec
from tsirelson_lab.dualnorm import DualTsirelsonEngine, LpEngine
from tsirelson_lab.jamesify import (
    JamesEngine,
    PairSelection,
    alpha_limit,
    bidual_norm,
    canonical_selection_indices,
    difference_vector,
    james_norm,
    u_map,
)

e = FinVec.basis
T_STAR = DualTsirelsonEngine()

POOL = [F(v) for v in ("1", "-1", "1/2", "-1/2", "2", "-2", "1/3", "-1/3")]


def w(n):
    return FinVec.from_pairs((i, 1) for i in range(1, n + 1))


def random_vec(rng, lo, hi):
    idx = [i for i in range(lo, hi + 1) if rng.random() < 0.7] or [hi]
    return FinVec.from_pairs((i, rng.choice(POOL)) for i in idx)


def james_brute(a, engine, extra=2):
    """Independent exhaustive maximization over selections in [1, m+extra]."""
    if a.is_zero:
        return F(0)
    top = a.entries[-1][0]
    best = F(0)
    domain = range(1, top + extra + 1)
    for size in range(2, len(domain) + 1, 2):
        for combo in itertools.combinations(domain, size):
            value = engine.eval(difference_vector(a, PairSelection(combo)))
            if value > best:
                best = value
    return best


class TestPairSelection:
    def test_validation(self):
        with pytest.raises(ValueError):
            PairSelection((1,))
        with pytest.raises(ValueError):
            PairSelection((2, 2))
        assert PairSelection((1, 3, 4, 9)).k == 2

    def test_pairs(self):
        assert PairSelection((1, 2, 5, 7)).pairs() == [(1, 2), (5, 7)]


class TestDifferenceVector:
    def test_examples(self):
        assert difference_vector(w(3), PairSelection((3, 4))) == e(1)
        assert difference_vector(e(1) - e(2), PairSelection((1, 2))) == 2 * e(1)
        assert difference_vector(w(3), PairSelection((1, 2, 3, 4))) == e(2)

    def test_outside_support_reads_zero(self):
        assert difference_vector(e(2), PairSelection((5, 9))).is_zero


class TestCanonicalIndices:
    def test_runs_get_two_representatives(self):
        # a = (1, 0, 0, 1, 1): zero run {2,3} and one run {4,5} both matter
        a = e(1) + e(4) + e(5)
        assert canonical_selection_indices(a) == [1, 2, 3, 4, 5, 6]

    def test_w_pattern_collapses(self):
        assert canonical_selection_indices(w(20)) == [1, 2, 21]

    def test_zero(self):
        assert canonical_selection_indices(FinVec.zero()) == []


class TestJamesNormExamples:
    def test_unit_vectors(self):
        for j in range(1, 11):
            assert james_norm(e(j), T_STAR) == 1

    def test_w_n_is_one(self):
        for n in range(1, 21):
            assert james_norm(w(n), T_STAR) == 1

    def test_difference_pair(self):
        assert james_norm(e(1) - e(2), T_STAR) == 2

    def test_zero(self):
        assert james_norm(FinVec.zero(), T_STAR) == 0

    def test_interior_gap_regression(self):
        # selection (1,2,3,5) extracts both coefficients; a canonical set
        # restricted to support + {max+1} would miss it and report 1
        assert james_norm(e(2) + e(5), T_STAR) == 2

    def test_split_run_regression(self):
        # (1,2),(3,4),(5,6) needs two indices from the zero run {2,3}
        a = e(1) + e(4) + e(5)
        value = james_norm(a, T_STAR)
        assert value == james_brute(a, T_STAR)

    def test_non_unconditional_base_rejected(self):
        with pytest.raises(ValueError):
            james_norm(e(1), JamesEngine(T_STAR))

    def test_witness_attains(self):
        rng = random.Random(3)
        for _ in range(20):
            a = random_vec(rng, 1, 7)
            if a.is_zero:
                continue
            value, selection = james_norm(a, T_STAR, with_witness=True)
            assert T_STAR.eval(difference_vector(a, selection)) == value


class TestJamesNormAgainstBruteForce:
    def test_l1_linf_small_sign_vectors(self):
        l1, linf = LpEngine(1), LpEngine(math.inf)
        for entries in itertools.product([-1, 0, 1], repeat=4):
            a = FinVec.from_pairs(
                (i + 1, c) for i, c in enumerate(entries) if c
            )
            for engine in (l1, linf):
                assert james_norm(a, engine) == james_brute(a, engine)

    def test_tstar_random_vectors(self):
        rng = random.Random(5)
        for _ in range(25):
            a = random_vec(rng, 1, 6)
            assert james_norm(a, T_STAR) == james_brute(a, T_STAR)


class TestJamesNormAxioms:
    @pytest.mark.parametrize(
        "engine", [LpEngine(1), LpEngine(math.inf), DualTsirelsonEngine()]
    )
    def test_triangle_homogeneity_definiteness(self, engine):
        rng = random.Random(7)
        for _ in range(12):
            x = random_vec(rng, 1, 6)
            y = random_vec(rng, 1, 6)
            jx, jy = james_norm(x, engine), james_norm(y, engine)
            assert james_norm(x + y, engine) <= jx + jy
            assert james_norm(x.scale(F(-2, 3)), engine) == F(2, 3) * jx
            assert (jx == 0) == x.is_zero

    def test_monotone_basis(self):
        rng = random.Random(9)
        engine = JamesEngine(T_STAR)
        for _ in range(15):
            coeffs = [rng.choice(POOL + [F(0)]) for _ in range(6)]
            norms = []
            for n in range(1, 7):
                prefix = FinVec.from_pairs(
                    (i + 1, c) for i, c in enumerate(coeffs[:n])
                )
                norms.append(engine.eval(prefix))
            assert all(a <= b for a, b in zip(norms, norms[1:]))


class TestBidualModel:
    def test_alpha_limit(self):
        assert alpha_limit(EventuallyConstantSeq.constant(1)) == 1
        assert alpha_limit(EventuallyConstantSeq.from_finvec(e(3))) == 0
        assert alpha_limit(EventuallyConstantSeq.constant(5)) == 5

    def test_x0_has_norm_one(self):
        assert bidual_norm(EventuallyConstantSeq.constant(1)) == 1

    def test_embedding_matches_james_norm(self):
        rng = random.Random(11)
        for _ in range(10):
            a = random_vec(rng, 1, 5)
            emb = EventuallyConstantSeq.from_finvec(a)
            assert bidual_norm(emb) == james_norm(a, T_STAR)

    def test_spike_embedding(self):
        assert bidual_norm(EventuallyConstantSeq.from_values([1], 0)) == 1

    def test_stabilizes_past_one_extra_term(self):
        # partial sums are (-1, 1) -> 2 but (-1, 1, 1) -> 3; the supremum
        # is only reached once the tail owns two coordinates
        x = EventuallyConstantSeq.from_values([-1], 1)
        assert bidual_norm(x) == 3
        engine = JamesEngine(T_STAR)
        assert engine.eval(x.partial_sum(2)) == 2
        assert engine.eval(x.partial_sum(3)) == 3

    def test_partial_sums_nondecreasing(self):
        rng = random.Random(13)
        engine = JamesEngine(T_STAR)
        for _ in range(10):
            head = [rng.choice(POOL + [F(0)]) for _ in range(rng.randint(0, 3))]
            x = EventuallyConstantSeq.from_values(head, rng.choice(POOL))
            norms = [engine.eval(x.partial_sum(n)) for n in range(1, 7)]
            assert all(a <= b for a, b in zip(norms, norms[1:]))


class TestUMap:
    def test_x0_maps_to_minus_e1(self):
        image = u_map(EventuallyConstantSeq.constant(1))
        assert image == EventuallyConstantSeq.from_values([-1], 0)

    def test_embedding_shifts_right(self):
        a = e(1) + 2 * e(3)
        image = u_map(EventuallyConstantSeq.from_finvec(a))
        assert image == EventuallyConstantSeq.from_values([0, 1, 0, 2], 0)

    def test_linearity(self):
        rng = random.Random(17)
        for _ in range(30):
            x = EventuallyConstantSeq.from_values(
                [rng.choice(POOL + [F(0)]) for _ in range(rng.randint(0, 3))],
                rng.choice(POOL + [F(0)]),
            )
            y = EventuallyConstantSeq.from_values(
                [rng.choice(POOL + [F(0)]) for _ in range(rng.randint(0, 3))],
                rng.choice(POOL + [F(0)]),
            )
            c = rng.choice(POOL)
            assert u_map(x.add(y)) == u_map(x).add(u_map(y))
            assert u_map(x.scale(c)) == u_map(x).scale(c)

    def test_injectivity(self):
        rng = random.Random(19)
        seen = {}
        for _ in range(100):
            x = EventuallyConstantSeq.from_values(
                [rng.choice(POOL + [F(0)]) for _ in range(rng.randint(0, 3))],
                rng.choice(POOL + [F(0)]),
            )
            image = u_map(x)
            key = (image.head, image.tail_value)
            if key in seen:
                assert seen[key] == x
            seen[key] = x

    def test_distortion_finite_and_positive(self):
        # bookkeeping only: no isomorphism constant is gated, the recorded
        # extremes just have to be finite and positive
        rng = random.Random(23)
        ratios = []
        for _ in range(200):
            x = EventuallyConstantSeq.from_values(
                [rng.choice(POOL + [F(0)]) for _ in range(rng.randint(0, 2))],
                rng.choice(POOL),
            )
            num = bidual_norm(u_map(x))
            den = bidual_norm(x)
            assert den > 0
            ratios.append(num / den)
        assert min(ratios) > 0
        assert max(ratios) < math.inf
