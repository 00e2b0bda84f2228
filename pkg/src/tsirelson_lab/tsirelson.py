"""Exact evaluation of the Tsirelson norm and its maximizing functionals.

The norm computed here is the unique fixed point of the implicit equation

    ||x|| = max( max_i |x_i| ,
                 (1/2) * max { sum_j ||E_j x||  :  (E_1, ..., E_k) admissible } )

where a family of index sets E_1 < E_2 < ... < E_k (each set entirely below
the next) is *admissible* when k <= min E_1.  The recursion is well founded
on finitely supported vectors because every part of an admissible family
with k >= 2 is a proper subset of the current support.

Two reductions make the computation exact and polynomial in the support
size for the part counts that arise:

* Interval parts suffice.  The norm is 1-unconditional, hence monotone
  under coordinate restriction, so replacing an arbitrary part E_j by its
  enclosing interval never decreases ||E_j x|| while min E_1 (and thus
  admissibility) is unchanged.  The supremum over interval families
  therefore equals the supremum over arbitrary admissible families.
* Parts snap to support runs.  Shrinking an interval part to the hull of
  the support points it contains changes no value and only raises min E_1,
  so the dynamic program may enumerate parts as contiguous runs of support
  positions.  Splitting a part never decreases the inner sum (triangle
  inequality), so a budget of k parts is always spent on as many parts as
  admissibility allows; single-part families are omitted because their
  value (1/2)||E x|| can never exceed an already-considered norm.

``tsirelson_maximizer`` replays the dynamic program's argmax choices into
an :class:`EvaluationTree` whose flattened functional f attains
f(x) = ||x|| and lies in the dual unit ball.

Evaluation is pure; the module-level value cache is write-once (keyed on
the coefficient absolute values, which 1-unconditionality justifies) and
invisible to callers, so parallel evaluation of distinct vectors is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterator, Union

from .seqvec import FinVec, IndexInterval

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class IntervalPartition:
    """An admissible family E_1 < ... < E_k of index intervals (k <= min E_1)."""

    parts: tuple[IndexInterval, ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValueError("partition needs at least one part")
        for prev, nxt in zip(self.parts, self.parts[1:]):
            if prev.hi >= nxt.lo:
                raise ValueError(f"parts {prev} and {nxt} are not strictly ordered")
        if len(self.parts) > self.parts[0].lo:
            raise ValueError(
                f"inadmissible family: {len(self.parts)} parts but first part "
                f"starts at {self.parts[0].lo}"
            )

    @property
    def k(self) -> int:
        return len(self.parts)

    def to_json_obj(self) -> list[list[int]]:
        return [[p.lo, p.hi] for p in self.parts]


@dataclass(frozen=True)
class TreeLeaf:
    """Signed coordinate functional +-e_i*."""

    index: int
    sign: int

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("leaf sign must be +1 or -1")

    def flatten(self) -> FinVec:
        return FinVec.basis(self.index, self.sign)

    def to_json_obj(self) -> dict:
        return {"type": "leaf", "index": self.index, "sign": self.sign}


@dataclass(frozen=True)
class TreeNode:
    """Weight-1/2 node over an admissible partition, one child per part."""

    partition: IntervalPartition
    children: tuple["EvaluationTree", ...]

    def __post_init__(self) -> None:
        if len(self.children) != self.partition.k:
            raise ValueError("one child per part required")
        for part, child in zip(self.partition.parts, self.children):
            hull = child.flatten().hull()
            if hull is not None and (hull.lo < part.lo or hull.hi > part.hi):
                raise ValueError(f"child support {hull} escapes its part {part}")

    def flatten(self) -> FinVec:
        total = FinVec.zero()
        for child in self.children:
            total = total + child.flatten()
        return total.scale(HALF)

    def to_json_obj(self) -> dict:
        return {
            "type": "node",
            "parts": self.partition.to_json_obj(),
            "children": [c.to_json_obj() for c in self.children],
        }


EvaluationTree = Union[TreeLeaf, TreeNode]


def evaluation_tree_from_json(obj: dict) -> EvaluationTree:
    if obj.get("type") == "leaf":
        return TreeLeaf(int(obj["index"]), int(obj["sign"]))
    if obj.get("type") == "node":
        parts = tuple(IndexInterval(int(lo), int(hi)) for lo, hi in obj["parts"])
        children = tuple(evaluation_tree_from_json(c) for c in obj["children"])
        return TreeNode(IntervalPartition(parts), children)
    raise ValueError(f"not an evaluation tree: {obj!r}")


def admissible_partitions(
    window: IndexInterval, k: int
) -> Iterator[IntervalPartition]:
    """Stream every admissible k-part interval family inside ``window``.

    Parts are nonempty subintervals E_1 < ... < E_k of the window with
    min E_1 >= k; they need not cover the window.  Deterministic
    lexicographic order (by part endpoints, left to right).
    """
    if k < 2:
        raise ValueError("admissible enumeration is defined for k >= 2")

    def place(start: int, remaining: int, acc: list[IndexInterval]):
        if remaining == 0:
            yield IntervalPartition(tuple(acc))
            return
        # leave room for the remaining parts after this one
        for lo in range(start, window.hi - remaining + 2):
            for hi in range(lo, window.hi - remaining + 2):
                acc.append(IndexInterval(lo, hi))
                yield from place(hi + 1, remaining - 1, acc)
                acc.pop()

    first_start = max(window.lo, k)
    if first_start > window.hi:
        return
    yield from place(first_start, k, [])


class _NormProgram:
    """Dynamic program over support runs for one vector.

    Values are indexed by support *positions*: ``norm(a, b)`` is the norm
    of the restriction to the a-th through b-th support points.  The run
    tables ``_runs_best`` give, for a right endpoint b and start position
    p, the best total value of exactly r disjoint ordered runs inside
    [p, b], for every r at once.
    """

    def __init__(self, x: FinVec):
        if x.is_zero:
            raise ValueError("zero vector has no evaluation program")
        self.indices = [i for i, _ in x.entries]
        self.values = [abs(c) for _, c in x.entries]
        self.signs = [1 if c > 0 else -1 for _, c in x.entries]
        self.size = len(self.indices)
        self._norm_memo: dict[tuple[int, int], Fraction] = {}
        self._norm_arg: dict[tuple[int, int], tuple] = {}
        self._runs_memo: dict[tuple[int, int], list] = {}

    def norm(self, a: int, b: int) -> Fraction:
        key = (a, b)
        cached = self._norm_memo.get(key)
        if cached is not None:
            return cached
        best = self.values[a]
        arg: tuple = ("leaf", a)
        for l in range(a + 1, b + 1):
            if self.values[l] > best:
                best = self.values[l]
                arg = ("leaf", l)
        for p in range(a, b):
            if self.indices[p] < 2:
                continue  # a family starting here admits at most one part
            for q in range(p, b):
                budget = min(self.indices[p] - 1, b - q)
                if budget < 1:
                    continue
                table = self._runs(q + 1, b)
                tail_best, tail_count = table[min(budget, len(table) - 1)]
                if tail_best is None:
                    continue
                candidate = HALF * (self.norm(p, q) + tail_best)
                if candidate > best:
                    best = candidate
                    arg = ("family", p, q, tail_count)
        self._norm_memo[key] = best
        self._norm_arg[key] = arg
        return best

    def _runs(self, p: int, b: int) -> list:
        """Prefix-max view of ``_runs_exact``: entry r gives (best value of
        at most r runs in [p, b], run count attaining it)."""
        key = ("prefix", p, b)
        cached = self._runs_memo.get(key)
        if cached is not None:
            return cached
        exact = self._runs_exact(p, b)
        prefix: list = [(None, 0)] * len(exact)
        best_so_far = None
        best_count = 0
        for r in range(1, len(exact)):
            if exact[r][0] is not None and (
                best_so_far is None or exact[r][0] > best_so_far
            ):
                best_so_far = exact[r][0]
                best_count = r
            prefix[r] = (best_so_far, best_count)
        self._runs_memo[key] = prefix
        return prefix

    def _runs_exact(self, p: int, b: int) -> list:
        """Entry r: (best total value of exactly r disjoint ordered runs in
        positions [p, b], argmax move), or (None, None) when infeasible."""
        key = ("exact", p, b)
        cached = self._runs_memo.get(key)
        if cached is not None:
            return cached
        capacity = max(b - p + 1, 0)
        table: list = [(Fraction(0), None)] + [(None, None)] * capacity
        if capacity > 0:
            later = self._runs_exact(p + 1, b)
            for r in range(1, capacity + 1):
                best = None
                arg = None
                if r < len(later) and later[r][0] is not None:
                    best = later[r][0]
                    arg = ("skip",)
                for q in range(p, b - r + 2):
                    rest = self._runs_exact(q + 1, b)
                    if rest[r - 1][0] is not None:
                        candidate = self.norm(p, q) + rest[r - 1][0]
                        if best is None or candidate > best:
                            best = candidate
                            arg = ("run", q)
                table[r] = (best, arg)
        self._runs_memo[key] = table
        return table

    def _unroll_runs(self, p: int, b: int, r: int) -> list[tuple[int, int]]:
        if r == 0:
            return []
        table = self._runs_exact(p, b)
        arg = table[r][1]
        if arg is None:
            raise AssertionError("no runs recorded where some were expected")
        if arg[0] == "skip":
            return self._unroll_runs(p + 1, b, r)
        q = arg[1]
        return [(p, q)] + self._unroll_runs(q + 1, b, r - 1)

    def build_tree(self, a: int, b: int) -> EvaluationTree:
        self.norm(a, b)
        arg = self._norm_arg[(a, b)]
        if arg[0] == "leaf":
            pos = arg[1]
            return TreeLeaf(self.indices[pos], self.signs[pos])
        _, p, q, tail_count = arg
        runs = [(p, q)] + self._unroll_runs(q + 1, b, tail_count)
        parts = tuple(
            IndexInterval(self.indices[lo], self.indices[hi]) for lo, hi in runs
        )
        children = tuple(self.build_tree(lo, hi) for lo, hi in runs)
        return TreeNode(IntervalPartition(parts), children)


_norm_cache: dict[tuple, Fraction] = {}


def tsirelson_norm(x: FinVec) -> Fraction:
    """Exact Tsirelson norm of a finitely supported vector."""
    if x.is_zero:
        return Fraction(0)
    key = tuple((i, abs(c)) for i, c in x.entries)
    cached = _norm_cache.get(key)
    if cached is not None:
        return cached
    scale = lcm(*(c.denominator for _, c in x.entries))
    program = _NormProgram(x.scale(scale) if scale > 1 else x)
    value = program.norm(0, program.size - 1) / scale
    _norm_cache[key] = value
    return value


def tsirelson_maximizer(x: FinVec) -> EvaluationTree:
    """An evaluation tree whose flattened functional f has f(x) = ||x||.

    Ties are broken by the deterministic argmax order of the dynamic
    program, so equal inputs always yield the same tree.
    """
    if x.is_zero:
        raise ValueError("the zero vector has no maximizing functional")
    scale = lcm(*(c.denominator for _, c in x.entries))
    program = _NormProgram(x.scale(scale) if scale > 1 else x)
    return program.build_tree(0, program.size - 1)
