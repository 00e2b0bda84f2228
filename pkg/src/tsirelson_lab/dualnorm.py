"""The dual Tsirelson norm as the support function of the primal unit ball.

For a finitely supported functional y, the dual norm is

    ||y||* = sup { <y, x> : ||x||_T <= 1 }.

Every flattened evaluation tree is a functional of dual norm at most 1, and
for each x some tree attains ||x||_T, so the primal ball is exactly the
polar of the tree functionals.  ``dual_norm`` therefore runs a cutting
plane loop: maximize <y, x> over a working set of tree constraints
f(x) <= 1, test the optimizer with the exact primal norm, and when it
escapes the ball, cut it off with the functional returned by
``tsirelson_maximizer``.  Tree functionals over a fixed support hull form a
finite set and every added cut is new, so the loop terminates with an
exactly converged value.

Both the objective direction and the constraints can be folded into the
nonnegative orthant: the norm is 1-unconditional, so the supremum for |y|
is attained at some x >= 0, and on x >= 0 only the all-positive-leaf
versions of the tree functionals bind.

``dual_norm_exact_small`` cross-validates the loop on small hulls by
enumerating the complete (dominance-pruned) set of tree functionals up
front and solving a single exact linear program over it.

Cutting-plane state is local to each call; the module-level caches hold
only finished values (and per-window functional sets), written once, so
concurrent calls on distinct vectors are independent.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from fractions import Fraction
from math import lcm
from typing import Union

from . import _simplex
from .seqvec import (
    FinVec,
    IndexInterval,
    NormBounds,
    NormValue,
    lp_norm,
)
from .tsirelson import (
    admissible_partitions,
    tsirelson_maximizer,
    tsirelson_norm,
)


def pairing(y: FinVec, x: FinVec) -> Fraction:
    """Duality bracket <y, x> = sum_i y_i x_i, exact."""
    total = Fraction(0)
    for i, c in y.entries:
        total += c * x.coeff(i)
    return total


class NormEngine(ABC):
    """A norm evaluator with declared structural flags.

    ``is_1_unconditional`` promises the value depends only on coefficient
    absolute values; ``has_monotone_basis`` promises partial-sum norms are
    nondecreasing.  Both are property-tested, not assumed.
    """

    name: str = "norm"
    is_1_unconditional: bool = False
    has_monotone_basis: bool = False

    @abstractmethod
    def eval(self, x: FinVec) -> NormValue:
        raise NotImplementedError

    def eval_exact(self, x: FinVec) -> Fraction:
        value = self.eval(x)
        if isinstance(value, NormBounds):
            return value.value
        return value

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


class LpEngine(NormEngine):
    """Reference l_q engine; exact for q in {1, inf}."""

    is_1_unconditional = True
    has_monotone_basis = True

    def __init__(self, q: Union[int, Fraction, float]):
        self.q = q
        self.name = "linf" if q == float("inf") else f"l{q}"

    def eval(self, x: FinVec) -> NormValue:
        return lp_norm(x, self.q)


class TsirelsonEngine(NormEngine):
    name = "T"
    is_1_unconditional = True
    has_monotone_basis = True

    def eval(self, x: FinVec) -> Fraction:
        return tsirelson_norm(x)


class DualTsirelsonEngine(NormEngine):
    name = "Tstar"
    is_1_unconditional = True
    has_monotone_basis = True

    def eval(self, x: FinVec) -> Fraction:
        return dual_norm_value(x)


def support_function_norm(
    y: FinVec,
    ball_norm,
    ball_maximizer,
    max_rounds: int = 100000,
) -> Fraction:
    """Generic cutting-plane evaluation of sup{<y, x> : ball_norm(x) <= 1}.

    ``ball_norm`` must be a 1-unconditional exact norm with normalized unit
    vectors and ``ball_maximizer(x)`` must return a functional f (as a
    FinVec) with f(x) = ball_norm(x) and dual norm at most 1 - the
    separation oracle.  The loop works in the nonnegative orthant with LP
    variables only on support(y): 1-unconditionality makes the norm solid,
    so zeroing coordinates outside the objective's support keeps the
    optimizer feasible without changing its value.  It stops once the
    working-set optimizer lies inside the ball, making the restricted LP
    value the exact support-function value.
    """
    support = list(y.support())
    scale = lcm(*(c.denominator for _, c in y.entries))
    w = [abs(c) * scale for _, c in y.entries]
    position = {index: k for k, index in enumerate(support)}

    rows: list[list[Fraction]] = []
    seen: set[tuple[Fraction, ...]] = set()

    def add_constraint(f: FinVec) -> bool:
        row = [Fraction(0)] * len(support)
        for i, c in f.entries:
            if i in position:
                row[position[i]] = abs(c)
        key = tuple(row)
        if key in seen:
            return False
        seen.add(key)
        rows.append(row)
        return True

    for index in support:
        add_constraint(FinVec.basis(index))
    # warm start: the functional norming the direction of y itself
    add_constraint(ball_maximizer(y.abs()))

    for _ in range(max_rounds):
        rhs = [Fraction(1)] * len(rows)
        result = _simplex.maximize(w, rows, rhs)
        optimizer = FinVec.from_pairs(
            (index, result.solution[k]) for k, index in enumerate(support)
        )
        if ball_norm(optimizer) <= 1:
            return result.value / scale
        if not add_constraint(ball_maximizer(optimizer)):
            raise AssertionError("cutting plane stalled on a repeated constraint")
    raise RuntimeError(f"support function did not converge within {max_rounds} rounds")


_dual_cache: dict[tuple, Fraction] = {}


def dual_norm(y: FinVec, max_rounds: int = 100000) -> NormBounds:
    """Cutting-plane evaluation of the dual norm; converges exactly.

    The returned bounds always satisfy lower == upper: the loop only stops
    once the working-set optimizer lies in the primal ball, at which point
    the restricted LP value is the support function value itself.
    """
    if y.is_zero:
        return NormBounds(Fraction(0), Fraction(0))
    value = _dual_cache.get(_cache_key(y))
    if value is None:
        value = support_function_norm(
            y,
            tsirelson_norm,
            lambda x: tsirelson_maximizer(x).flatten(),
            max_rounds,
        )
        _dual_cache[_cache_key(y)] = value
    return NormBounds(value, value)


def _cache_key(y: FinVec) -> tuple:
    return tuple((i, abs(c)) for i, c in y.entries)


def dual_norm_value(y: FinVec) -> Fraction:
    """Converged dual norm as a plain Fraction."""
    return dual_norm(y).value


MAX_EXACT_HULL = 8


def dual_norm_exact_small(y: FinVec) -> Fraction:
    """Exhaustive-oracle dual norm for support hulls of length <= 8.

    Enumerates every tree functional on the hull once (pruned to the
    coordinatewise-maximal ones, which is lossless for constraints over
    x >= 0) and solves the support-function LP with the full constraint
    set, with no separation loop involved.
    """
    if y.is_zero:
        return Fraction(0)
    hull = y.hull()
    if len(hull) > MAX_EXACT_HULL:
        raise ValueError(
            f"support hull {hull} has length {len(hull)}; "
            f"the exhaustive oracle is limited to {MAX_EXACT_HULL}"
        )
    support = list(y.support())
    scale = lcm(*(c.denominator for _, c in y.entries))
    w = [abs(c) * scale for _, c in y.entries]
    position = {index: k for k, index in enumerate(support)}

    rows = []
    seen = set()
    for f in tree_functionals(hull):
        row = [Fraction(0)] * len(support)
        for i, c in f:
            if i in position:
                row[position[i]] = c
        key = tuple(row)
        if key not in seen and any(v != 0 for v in row):
            seen.add(key)
            rows.append(row)
    rhs = [Fraction(1)] * len(rows)
    result = _simplex.maximize(w, rows, rhs)
    return result.value / scale


_functional_cache: dict[tuple[int, int], tuple] = {}


def tree_functionals(window: IndexInterval) -> tuple[tuple[tuple[int, Fraction], ...], ...]:
    """All-positive flattened tree functionals on a window, dominance-pruned.

    Returned as tuples of (index, coefficient) pairs.  A functional
    coordinatewise below another is dropped: over x >= 0 its constraint is
    implied, and pruning child sets before combining is lossless because
    combination is coordinatewise monotone.
    """
    key = (window.lo, window.hi)
    cached = _functional_cache.get(key)
    if cached is not None:
        return cached

    candidates: set[tuple[tuple[int, Fraction], ...]] = set()
    for i in window.indices():
        candidates.add(((i, Fraction(1)),))
    max_parts = (window.hi + 1) // 2
    for k in range(2, max_parts + 1):
        for partition in admissible_partitions(window, k):
            child_sets = [tree_functionals(part) for part in partition.parts]
            stack: list[tuple[int, dict[int, Fraction]]] = [(0, {})]
            while stack:
                depth, acc = stack.pop()
                if depth == len(child_sets):
                    entries = tuple(
                        (i, c / 2) for i, c in sorted(acc.items())
                    )
                    candidates.add(entries)
                    continue
                for f in child_sets[depth]:
                    merged = dict(acc)
                    for i, c in f:
                        merged[i] = c
                    stack.append((depth + 1, merged))

    pruned = _prune_dominated(candidates, window)
    _functional_cache[key] = pruned
    return pruned


def _prune_dominated(
    candidates: set[tuple[tuple[int, Fraction], ...]], window: IndexInterval
) -> tuple:
    offset = window.lo
    width = len(window)
    dense = []
    for entries in candidates:
        row = [Fraction(0)] * width
        for i, c in entries:
            row[i - offset] = c
        dense.append((entries, row))
    # larger total first: a dominating row always has at least the same sum
    dense.sort(key=lambda item: (sum(item[1]), item[1]), reverse=True)
    kept: list[tuple] = []
    kept_rows: list[list[Fraction]] = []
    for entries, row in dense:
        dominated = False
        for other in kept_rows:
            if all(a <= b for a, b in zip(row, other)):
                dominated = True
                break
        if not dominated:
            kept.append(entries)
            kept_rows.append(row)
    return tuple(kept)
