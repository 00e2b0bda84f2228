"""The James transform of a 1-unconditional base norm, and the bidual model.

For a finitely supported a and a 1-unconditional base norm ||.||_B, the
transformed norm is

    ||a||_J = sup ||sum_j (a_{p(2j-1)} - a_{p(2j)}) t_j||_B

over all strictly increasing index selections p_1 < ... < p_{2k}.  With the
dual Tsirelson engine as base this is the Tsirelson*-James norm.

Selection domain lemma.  Let m = max support(a).  The supremum is attained
by selections drawn from the *canonical index set* C(a): the first two
indices of every maximal constant run of the padded sequence
(a_1, ..., a_m, 0), where the final zero run contributes only m+1.
Sketch: a selection's value depends only on the values a_{p_i}; pairs whose
two indices land in one constant run contribute a zero difference, and
dropping a zero slot compacts later slots leftward, which never decreases
the base norm (for bases, such as l_q and the dual Tsirelson norm, that
are monotone under left compaction of the support).  After dropping, at
most two selection indices meet any run - one closing a pair, one opening
the next - so both can be moved to the run's first two indices, and at
most one index exceeds m (a final closer, movable to m+1).  Individual
differences change sign at worst, which 1-unconditionality ignores.  In
particular the number of pairs never needs to exceed |C(a)| / 2.

The bidual of the James space is modeled by eventually constant coefficient
sequences; its norm is the supremum of the (nondecreasing) partial-sum
norms, which stabilizes as soon as the constant tail owns two coordinates,
i.e. at n = stabilization_index + 2: beyond that point the partial sums
share the same canonical index sets and hence the same selection values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .dualnorm import DualTsirelsonEngine, NormEngine
from .seqvec import (
    EventuallyConstantSeq,
    FinVec,
    NormBounds,
    NormValue,
    lower_of,
    upper_of,
)


@dataclass(frozen=True)
class PairSelection:
    """Strictly increasing indices p_1 < ... < p_{2k} (k >= 1)."""

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.indices) == 0 or len(self.indices) % 2 != 0:
            raise ValueError("a selection consists of k >= 1 index pairs")
        last = 0
        for p in self.indices:
            if not isinstance(p, int) or p <= last:
                raise ValueError("selection indices must be strictly increasing")
            last = p

    @property
    def k(self) -> int:
        return len(self.indices) // 2

    def pairs(self) -> list[tuple[int, int]]:
        it = iter(self.indices)
        return list(zip(it, it))

    def to_json_obj(self) -> list[int]:
        return list(self.indices)


def difference_vector(a: FinVec, selection: PairSelection) -> FinVec:
    """The vector whose j-th coordinate is a_{p(2j-1)} - a_{p(2j)}."""
    return FinVec.from_pairs(
        (j + 1, a.coeff(q) - a.coeff(r))
        for j, (q, r) in enumerate(selection.pairs())
    )


def canonical_selection_indices(a: FinVec) -> list[int]:
    """The canonical index set C(a) of the selection domain lemma."""
    if a.is_zero:
        return []
    top = a.entries[-1][0]
    values = [a.coeff(i) for i in range(1, top + 2)]  # padded with a zero
    chosen: list[int] = []
    run_start = 0
    for k in range(1, len(values) + 1):
        if k == len(values) or values[k] != values[run_start]:
            chosen.append(run_start + 1)
            if k - run_start >= 2:
                chosen.append(run_start + 2)
            run_start = k
    return chosen


def james_norm(
    a: FinVec,
    base: NormEngine,
    with_witness: bool = False,
):
    """Supremum of base norms of difference vectors over all selections.

    Branch and bound over canonical selections: partial selections extend
    pair by pair (zero differences skipped, which by the selection domain
    lemma loses nothing), leaves are evaluated with the base engine, and a
    branch is cut when the l1 value of its prefix plus an l1 bound on the
    best possible completion cannot beat the incumbent.  Base evaluations
    are memoized per call on the difference vector's absolute normal form.

    Returns an exact Fraction for exact bases (NormBounds otherwise); with
    ``with_witness`` also returns a maximizing :class:`PairSelection`
    (None for the zero vector).
    """
    if not base.is_1_unconditional:
        raise ValueError(f"james transform requires a 1-unconditional base, got {base.name}")
    zero = Fraction(0)
    if a.is_zero:
        return (zero, None) if with_witness else zero

    indices = canonical_selection_indices(a)
    values = [a.coeff(i) for i in indices]
    count = len(indices)
    suffix_abs = [zero] * (count + 1)
    for k in range(count - 1, -1, -1):
        suffix_abs[k] = suffix_abs[k + 1] + abs(values[k])

    memo: dict[tuple, NormValue] = {}

    def evaluate(diffs: tuple[Fraction, ...]) -> NormValue:
        key = tuple(abs(d) for d in diffs)
        cached = memo.get(key)
        if cached is None:
            vec = FinVec.from_pairs((j + 1, d) for j, d in enumerate(diffs))
            cached = base.eval(vec)
            memo[key] = cached
        return cached

    best_lower = zero
    best_upper = zero
    best_selection: Optional[PairSelection] = None

    stack: list[tuple[int, tuple[Fraction, ...], tuple[int, ...], Fraction]] = [
        (0, (), (), zero)
    ]
    while stack:
        start, diffs, used, l1 = stack.pop()
        # bound: every future pair contributes at most its endpoints' weights
        if diffs and l1 + suffix_abs[start] <= best_lower:
            continue
        extensions = []
        for qi in range(start, count - 1):
            for ri in range(qi + 1, count):
                d = values[qi] - values[ri]
                if d != 0:
                    extensions.append((abs(d), qi, ri, d))
        if extensions:
            # appending a nonzero pair never decreases a 1-unconditional
            # norm, so only unextendable selections need evaluating;
            # explore large differences first to tighten the incumbent
            extensions.sort()
            for _, qi, ri, d in extensions:
                stack.append(
                    (
                        ri + 1,
                        diffs + (d,),
                        used + (indices[qi], indices[ri]),
                        l1 + abs(d),
                    )
                )
        elif diffs:
            value = evaluate(diffs)
            lo, hi = lower_of(value), upper_of(value)
            if lo > best_lower:
                best_lower = lo
                best_selection = PairSelection(used)
            if hi > best_upper:
                best_upper = hi

    result: NormValue
    if best_lower == best_upper:
        result = best_lower
    else:
        result = NormBounds(best_lower, best_upper)
    return (result, best_selection) if with_witness else result


class JamesEngine(NormEngine):
    """James transform of a 1-unconditional base engine as a NormEngine.

    The transformed basis is monotone but not unconditional.
    """

    is_1_unconditional = False
    has_monotone_basis = True

    def __init__(self, base: Optional[NormEngine] = None):
        self.base = base if base is not None else DualTsirelsonEngine()
        if not self.base.is_1_unconditional:
            raise ValueError(
                f"james transform requires a 1-unconditional base, got {self.base.name}"
            )
        self.name = f"J[{self.base.name}]"

    def eval(self, x: FinVec) -> NormValue:
        return james_norm(x, self.base)


def alpha_limit(x: EventuallyConstantSeq) -> Fraction:
    """The limit of the coefficient sequence (its constant tail value)."""
    return x.tail_value


def bidual_norm(
    x: EventuallyConstantSeq,
    base: Optional[NormEngine] = None,
    verification_sweep: int = 3,
) -> NormValue:
    """Norm of a bidual element: the supremum of partial-sum James norms.

    Partial-sum norms are nondecreasing (monotone basis) and become
    constant once the tail owns two coordinates, so the supremum is the
    value at n = stabilization_index + 2; the next ``verification_sweep``
    partial sums are evaluated and checked for constancy as a guard.
    """
    engine = JamesEngine(base)
    s = x.stabilization_index
    if s == 0 and x.tail_value == 0:
        return Fraction(0)
    target = s + 2
    value = engine.eval(x.partial_sum(target))
    for n in range(target + 1, target + 1 + verification_sweep):
        probe = engine.eval(x.partial_sum(n))
        if upper_of(probe) != upper_of(value) or lower_of(probe) != lower_of(value):
            raise AssertionError(
                f"partial-sum norms failed to stabilize at n={target}: "
                f"{value} vs {probe} at n={n}"
            )
    return value


def u_map(x: EventuallyConstantSeq) -> EventuallyConstantSeq:
    """The bidual-to-space isomorphism candidate.

    Sends a sequence with limit L to (-L, x_1 - L, x_2 - L, ...), which has
    a zero tail and therefore describes an element of the James space
    itself.  Linear, and injective because L and then every x_j can be
    read back from the image.
    """
    limit = alpha_limit(x)
    shifted = [-limit] + [
        x.coeff(j) - limit for j in range(1, x.stabilization_index + 1)
    ]
    return EventuallyConstantSeq.from_values(shifted, 0)
