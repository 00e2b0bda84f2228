"""Exact sparse sequence vectors and index intervals.

Everything downstream operates on :class:`FinVec`: a finitely supported
vector with exact rational coefficients, indexed by positive integers
(1-based).  Restrictions to index intervals and order-preserving support
relabelings are the two structural operations the norm machinery needs.
:class:`EventuallyConstantSeq` models the bidual elements that stabilize to
a constant value.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

Rational = Union[int, Fraction, str]


def _frac(value: Rational) -> Fraction:
    if isinstance(value, float):
        raise TypeError(f"floats are not exact; got {value!r}")
    return Fraction(value)


@dataclass(frozen=True)
class IndexInterval:
    """Nonempty integer interval [lo, hi] of positive indices."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if not (isinstance(self.lo, int) and isinstance(self.hi, int)):
            raise TypeError("interval endpoints must be integers")
        if self.lo < 1:
            raise ValueError(f"interval must start at a positive index, got {self.lo}")
        if self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def __contains__(self, index: int) -> bool:
        return self.lo <= index <= self.hi

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def indices(self) -> range:
        return range(self.lo, self.hi + 1)

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


@dataclass(frozen=True)
class FinVec:
    """Finitely supported vector with exact rational coefficients.

    ``entries`` is a tuple of (index, coefficient) pairs with strictly
    increasing positive indices and no zero coefficients; the empty tuple
    is the zero vector.  Instances are immutable and hashable.
    """

    entries: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self) -> None:
        last = 0
        for index, coeff in self.entries:
            if not isinstance(index, int) or index < 1:
                raise ValueError(f"indices must be positive integers, got {index!r}")
            if index <= last:
                raise ValueError("indices must be strictly increasing")
            if not isinstance(coeff, Fraction):
                raise TypeError(f"coefficient at {index} is not a Fraction")
            if coeff == 0:
                raise ValueError(f"zero coefficient stored at index {index}")
            last = index

    @staticmethod
    def from_pairs(pairs: Iterable[tuple[int, Rational]]) -> FinVec:
        """Build a vector from (index, coeff) pairs, summing duplicates."""
        acc: dict[int, Fraction] = {}
        for index, coeff in pairs:
            acc[index] = acc.get(index, Fraction(0)) + _frac(coeff)
        return FinVec(tuple((i, c) for i, c in sorted(acc.items()) if c != 0))

    @staticmethod
    def basis(index: int, coeff: Rational = 1) -> FinVec:
        return FinVec.from_pairs([(index, coeff)])

    @staticmethod
    def zero() -> FinVec:
        return FinVec()

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    def hull(self) -> IndexInterval | None:
        """Smallest interval containing the support; None for zero."""
        if not self.entries:
            return None
        return IndexInterval(self.entries[0][0], self.entries[-1][0])

    def coeff(self, index: int) -> Fraction:
        for i, c in self.entries:
            if i == index:
                return c
            if i > index:
                break
        return Fraction(0)

    def __iter__(self) -> Iterator[tuple[int, Fraction]]:
        return iter(self.entries)

    # -- linear algebra ------------------------------------------------------

    def __add__(self, other: FinVec) -> FinVec:
        return FinVec.from_pairs(list(self.entries) + list(other.entries))

    def __sub__(self, other: FinVec) -> FinVec:
        return self + (-other)

    def __neg__(self) -> FinVec:
        return FinVec(tuple((i, -c) for i, c in self.entries))

    def scale(self, factor: Rational) -> FinVec:
        f = _frac(factor)
        if f == 0:
            return FinVec()
        return FinVec(tuple((i, c * f) for i, c in self.entries))

    def __mul__(self, factor: Rational) -> FinVec:
        return self.scale(factor)

    __rmul__ = __mul__

    def abs(self) -> FinVec:
        return FinVec(tuple((i, abs(c)) for i, c in self.entries))

    # -- serialization -------------------------------------------------------

    def to_json_obj(self) -> dict:
        return {"entries": [[i, str(c)] for i, c in self.entries]}

    @staticmethod
    def from_json_obj(obj: dict) -> FinVec:
        if not isinstance(obj, dict) or "entries" not in obj:
            raise ValueError("vector JSON must be an object with an 'entries' list")
        pairs = []
        for k, entry in enumerate(obj["entries"]):
            try:
                index, coeff = entry
                pairs.append((int(index), Fraction(str(coeff))))
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"bad vector entry #{k}: {entry!r} ({exc})") from exc
        return FinVec.from_pairs(pairs)

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @staticmethod
    def loads(text: str) -> FinVec:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"vector is not valid JSON: {exc}") from exc
        if isinstance(obj, list):
            obj = {"entries": obj}
        return FinVec.from_json_obj(obj)

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        return " + ".join(f"{c}*e{i}" for i, c in self.entries)


def restrict(x: FinVec, interval: IndexInterval) -> FinVec:
    """Coordinate projection onto an index interval (E x)."""
    return FinVec(tuple((i, c) for i, c in x.entries if i in interval))


def shift_support(x: FinVec, target_start: int) -> FinVec:
    """Relabel the k-th support index to target_start + k - 1.

    Preserves coefficients and their order; the result has contiguous
    support starting at ``target_start``.
    """
    if target_start < 1:
        raise ValueError("target_start must be a positive index")
    return FinVec(
        tuple((target_start + k, c) for k, (_, c) in enumerate(x.entries))
    )


@dataclass(frozen=True)
class NormBounds:
    """Certified enclosure lower <= value <= upper for a norm."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise ValueError(f"invalid bounds [{self.lower}, {self.upper}]")

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> Fraction:
        if not self.exact:
            raise ValueError(f"bounds not exact: [{self.lower}, {self.upper}]")
        return self.lower

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def __str__(self) -> str:
        if self.exact:
            return str(self.lower)
        return f"[{self.lower}, {self.upper}]"


NormValue = Union[Fraction, NormBounds]


def as_bounds(value: NormValue) -> NormBounds:
    if isinstance(value, NormBounds):
        return value
    return NormBounds(value, value)


def lower_of(value: NormValue) -> Fraction:
    return value.lower if isinstance(value, NormBounds) else value


def upper_of(value: NormValue) -> Fraction:
    return value.upper if isinstance(value, NormBounds) else value


DEFAULT_ROOT_TOLERANCE = Fraction(1, 10**12)


def _int_nth_root(n: int, k: int) -> tuple[int, bool]:
    """Floor k-th root of n >= 0, plus whether it is exact."""
    if n < 0 or k < 1:
        raise ValueError("nth root needs n >= 0 and k >= 1")
    if n in (0, 1) or k == 1:
        return n, True
    r = int(round(n ** (1.0 / k)))
    while r > 0 and r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r, r**k == n


def nth_root_bounds(
    value: Fraction, k: int, tolerance: Fraction = DEFAULT_ROOT_TOLERANCE
) -> tuple[Fraction, Fraction]:
    """Rational enclosure of value**(1/k) with width <= tolerance.

    Returns an exact degenerate pair when the root is rational.
    """
    if value < 0:
        raise ValueError("root of a negative value")
    if value == 0:
        return Fraction(0), Fraction(0)
    num_root, num_exact = _int_nth_root(value.numerator, k)
    den_root, den_exact = _int_nth_root(value.denominator, k)
    if num_exact and den_exact:
        exact = Fraction(num_root, den_root)
        return exact, exact
    lo = Fraction(num_root, den_root + 1)
    hi = Fraction(num_root + 1, max(den_root, 1))
    if lo**k > value:
        lo = Fraction(0)
    if hi**k < value:
        hi = max(Fraction(1), value)
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        if mid**k <= value:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _rational_power_bounds(
    base: Fraction, exponent: Fraction, tolerance: Fraction
) -> tuple[Fraction, Fraction]:
    """Enclosure of base**exponent for base >= 0, exponent > 0 rational."""
    powered = base**exponent.numerator
    return nth_root_bounds(powered, exponent.denominator, tolerance)


def lp_norm(
    x: FinVec,
    q: Union[int, Fraction, float],
    tolerance: Fraction = DEFAULT_ROOT_TOLERANCE,
) -> NormValue:
    """The l_q norm of x for q >= 1 (q = math.inf for the sup norm).

    Exact rational for q in {1, inf} and whenever the q-th root happens to
    be rational; otherwise a :class:`NormBounds` enclosure of width at most
    ``tolerance``.
    """
    if isinstance(q, float):
        if math.isinf(q) and q > 0:
            if x.is_zero:
                return Fraction(0)
            return max(abs(c) for _, c in x.entries)
        raise ValueError(f"q must be a rational >= 1 or infinity, got {q!r}")
    q = Fraction(q)
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    if x.is_zero:
        return Fraction(0)
    if q == 1:
        return sum((abs(c) for _, c in x.entries), Fraction(0))
    inner_tol = tolerance / (4 * len(x.entries))
    lo_sum = Fraction(0)
    hi_sum = Fraction(0)
    for _, c in x.entries:
        lo, hi = _rational_power_bounds(abs(c), q, inner_tol)
        lo_sum += lo
        hi_sum += hi
    inv = 1 / q
    lo_root = _rational_power_bounds(lo_sum, inv, tolerance / 4)[0]
    hi_root = _rational_power_bounds(hi_sum, inv, tolerance / 4)[1]
    if lo_root == hi_root:
        return lo_root
    return NormBounds(lo_root, hi_root)


@dataclass(frozen=True)
class EventuallyConstantSeq:
    """A sequence with arbitrary head and a constant tail value.

    Coefficient at index j is ``head[j-1]`` for j <= stabilization index s
    (zeros allowed in the head) and ``tail_value`` for every j > s.  These
    model the coefficient sequences of bidual elements.  Construction
    canonicalizes: trailing head entries equal to the tail are dropped, so
    equality of instances is equality of the sequences they describe.
    """

    head: tuple[Fraction, ...] = ()
    tail_value: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        for c in self.head:
            if not isinstance(c, Fraction):
                raise TypeError("head coefficients must be Fractions")
        if not isinstance(self.tail_value, Fraction):
            raise TypeError("tail value must be a Fraction")
        trimmed = self.head
        while trimmed and trimmed[-1] == self.tail_value:
            trimmed = trimmed[:-1]
        if trimmed is not self.head:
            object.__setattr__(self, "head", trimmed)

    @staticmethod
    def from_values(
        head: Sequence[Rational], tail_value: Rational = 0
    ) -> EventuallyConstantSeq:
        return EventuallyConstantSeq(
            tuple(_frac(c) for c in head), _frac(tail_value)
        )

    @staticmethod
    def from_finvec(x: FinVec) -> EventuallyConstantSeq:
        """Embed a finitely supported vector (tail value 0)."""
        if x.is_zero:
            return EventuallyConstantSeq()
        top = x.entries[-1][0]
        return EventuallyConstantSeq.from_values(
            [x.coeff(i) for i in range(1, top + 1)], 0
        )

    @staticmethod
    def constant(value: Rational) -> EventuallyConstantSeq:
        return EventuallyConstantSeq.from_values([], value)

    @property
    def stabilization_index(self) -> int:
        return len(self.head)

    def coeff(self, index: int) -> Fraction:
        if index < 1:
            raise ValueError("indices are 1-based")
        if index <= len(self.head):
            return self.head[index - 1]
        return self.tail_value

    def partial_sum(self, n: int) -> FinVec:
        """The vector agreeing with the sequence on [1, n], zero beyond."""
        return FinVec.from_pairs((i, self.coeff(i)) for i in range(1, n + 1))

    def add(self, other: EventuallyConstantSeq) -> EventuallyConstantSeq:
        n = max(len(self.head), len(other.head))
        return EventuallyConstantSeq.from_values(
            [self.coeff(i) + other.coeff(i) for i in range(1, n + 1)],
            self.tail_value + other.tail_value,
        )

    def scale(self, factor: Rational) -> EventuallyConstantSeq:
        f = _frac(factor)
        return EventuallyConstantSeq.from_values(
            [c * f for c in self.head], self.tail_value * f
        )

    def to_json_obj(self) -> dict:
        return {
            "head": [str(c) for c in self.head],
            "tail_value": str(self.tail_value),
        }

    @staticmethod
    def from_json_obj(obj: dict) -> EventuallyConstantSeq:
        if not isinstance(obj, dict) or "tail_value" not in obj:
            raise ValueError("sequence JSON must be an object with 'tail_value'")
        try:
            head = [Fraction(str(c)) for c in obj.get("head", [])]
            tail = Fraction(str(obj["tail_value"]))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad sequence JSON: {exc}") from exc
        return EventuallyConstantSeq.from_values(head, tail)
