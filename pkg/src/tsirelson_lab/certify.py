"""Exact certificates for the quantitative norm inequalities.

Every check computes both sides of one inequality in exact arithmetic,
packages the inputs and the extremal witness into a :class:`Certificate`,
and reports pass/fail by exact comparison.  ``run_suite`` executes a named
collection of checks deterministically (and optionally in parallel) and
aggregates them into a :class:`CertificateReport` whose serialized form is
byte-identical across runs for fixed seeds.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .blockseq import BlockSequence, combine, normalize, random_block_sequence
from .dualnorm import DualTsirelsonEngine, dual_norm_value
from .jamesify import JamesEngine, PairSelection, difference_vector, james_norm
from .seqvec import (
    FinVec,
    IndexInterval,
    NormBounds,
    lp_norm,
    lower_of,
    restrict,
    upper_of,
)

T_STAR = DualTsirelsonEngine()

SAMPLE_POOL: tuple[Fraction, ...] = tuple(
    Fraction(v) for v in ("1", "-1", "1/2", "-1/2", "2", "-2", "1/3", "-1/3")
)


@dataclass(frozen=True)
class Certificate:
    """One checked inequality: exact sides, witness, verdict."""

    check_id: str
    params: dict
    lhs: Fraction
    rhs: Fraction
    constant: Fraction
    witness: dict
    passed: bool

    def to_json_obj(self) -> dict:
        return {
            "check": self.check_id,
            "params": self.params,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "constant": str(self.constant),
            "witness": self.witness,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class QEstimateReport:
    """Empirical lower q-estimate constants over index ranges.

    ``empirical_c`` bounds, from above, any constant c that could witness a
    lower q-estimate on the tested family; per-range values let decay be
    inspected.  Bounds are exact on the norm side and certified intervals
    on the q-sum side.
    """

    q: Fraction
    ranges: tuple[tuple[int, int], ...]
    per_range: tuple[NormBounds, ...]
    empirical_c: NormBounds
    witness: dict

    def to_json_obj(self) -> dict:
        return {
            "q": str(self.q),
            "ranges": [list(r) for r in self.ranges],
            "per_range": [
                {"lower": str(b.lower), "upper": str(b.upper)} for b in self.per_range
            ],
            "empirical_c": {
                "lower": str(self.empirical_c.lower),
                "upper": str(self.empirical_c.upper),
            },
            "witness": self.witness,
        }


def _sample_vector(
    rng: random.Random,
    indices: Sequence[int],
    pool: Sequence[Fraction] = SAMPLE_POOL,
) -> FinVec:
    chosen = [i for i in indices if rng.random() < 0.75]
    if not chosen:
        chosen = [rng.choice(list(indices))]
    return FinVec.from_pairs((i, rng.choice(pool)) for i in chosen)


def _window_patterns(n: int) -> list[FinVec]:
    window = list(range(n + 1, 2 * n + 1))
    indicator = FinVec.from_pairs((i, 1) for i in window)
    alternating = FinVec.from_pairs((i, (-1) ** k) for k, i in enumerate(window))
    spikes = [FinVec.basis(i) for i in window]
    return [indicator, alternating] + spikes


def check_window_bound(
    n: int,
    samples: int = 500,
    seed: int = 0,
    constant: Fraction = Fraction(2),
) -> Certificate:
    """Dual norms over the window (n, 2n] stay below constant * sup.

    The window is the half-open one: on it the primal norm dominates half
    the l1 norm (the n singleton sets form an admissible family), which
    dualizes to exactly this bound; the indicator attains it, so the
    constant 2 is sharp.  Including index n breaks the inequality for
    every n - the indicator of [2, 4] already has dual norm 3 - so the
    closed window admits no such constant-2 certificate at all.
    """
    if not 2 <= n <= 10:
        raise ValueError("window bound check is calibrated for 2 <= n <= 10")
    rng = random.Random(seed)
    window = list(range(n + 1, 2 * n + 1))
    worst_ratio = Fraction(0)
    worst: Optional[tuple[FinVec, Fraction, Fraction]] = None
    vectors = _window_patterns(n) + [
        _sample_vector(rng, window) for _ in range(samples)
    ]
    for y in vectors:
        value = dual_norm_value(y)
        sup = max(abs(c) for _, c in y.entries)
        ratio = value / sup
        if ratio > worst_ratio or worst is None:
            worst_ratio = ratio
            worst = (y, value, sup)
    assert worst is not None
    y, value, sup = worst
    return Certificate(
        check_id=f"window_bound[n={n}]",
        params={"n": n, "window": [n + 1, 2 * n], "samples": samples, "seed": seed},
        lhs=worst_ratio,
        rhs=constant,
        constant=constant,
        witness={
            "vector": y.to_json_obj(),
            "dual_norm": str(value),
            "sup_norm": str(sup),
        },
        passed=worst_ratio <= constant,
    )


def check_partition_bound(y: FinVec, boundaries: Sequence[int]) -> Certificate:
    """Blockwise norm coefficients dominate the dual norm (exact)."""
    boundaries = list(boundaries)
    if not boundaries or boundaries[0] != 0 or sorted(boundaries) != boundaries:
        raise ValueError("boundaries must be increasing and start at 0")
    support = y.support()
    if support and support[-1] > boundaries[-1]:
        raise ValueError("boundaries must cover the support")
    lhs = dual_norm_value(y)
    block_norms = []
    for j in range(len(boundaries) - 1):
        window = IndexInterval(boundaries[j] + 1, boundaries[j + 1])
        block_norms.append(dual_norm_value(restrict(y, window)))
    dominating = FinVec.from_pairs(
        (j + 1, norm) for j, norm in enumerate(block_norms)
    )
    rhs = dual_norm_value(dominating)
    return Certificate(
        check_id="partition_bound",
        params={"boundaries": boundaries},
        lhs=lhs,
        rhs=rhs,
        constant=Fraction(1),
        witness={
            "vector": y.to_json_obj(),
            "block_norms": [str(b) for b in block_norms],
            "dominating_vector": dominating.to_json_obj(),
        },
        passed=lhs <= rhs,
    )


def _require_normalized(u: BlockSequence, engine: JamesEngine) -> None:
    for j, block in enumerate(u.blocks):
        if engine.eval_exact(block) != 1:
            raise ValueError(f"block {j + 1} is not normalized in {engine.name}")


def check_block_domination(
    u: BlockSequence, a: FinVec, skip_normalization_check: bool = False
) -> Certificate:
    """Combined-vector norm against neighbor-sum coefficients (exact)."""
    engine = JamesEngine(T_STAR)
    if not skip_normalization_check:
        _require_normalized(u, engine)
    combined = combine(u, a)
    lhs_value, selection = james_norm(combined, T_STAR, with_witness=True)
    count = len(u.blocks)
    dominating = FinVec.from_pairs(
        (j, abs(a.coeff(j)) + abs(a.coeff(j + 1))) for j in range(1, count + 1)
    )
    rhs = dual_norm_value(dominating)
    return Certificate(
        check_id="block_domination",
        params={"blocks": len(u.blocks)},
        lhs=lhs_value,
        rhs=rhs,
        constant=Fraction(1),
        witness={
            "coefficients": a.to_json_obj(),
            "combined": combined.to_json_obj(),
            "selection": selection.to_json_obj() if selection else None,
            "dominating_vector": dominating.to_json_obj(),
        },
        passed=lhs_value <= rhs,
    )


def check_cor10(
    u: BlockSequence,
    n: int,
    a: FinVec,
    constant: Fraction = Fraction(4),
    skip_normalization_check: bool = False,
) -> Certificate:
    """Window combinations of normalized blocks stay below constant * sup."""
    support = a.support()
    if not support:
        raise ValueError("coefficient vector must be nonzero")
    if support[0] < n or support[-1] > 2 * n:
        raise ValueError(f"support {support} escapes the window [{n}, {2 * n}]")
    engine = JamesEngine(T_STAR)
    if not skip_normalization_check:
        _require_normalized(u, engine)
    combined = combine(u, a)
    lhs_value, selection = james_norm(combined, T_STAR, with_witness=True)
    sup = max(abs(c) for _, c in a.entries)
    rhs = constant * sup
    return Certificate(
        check_id=f"cor10[n={n}]",
        params={"n": n, "blocks": len(u.blocks)},
        lhs=lhs_value,
        rhs=rhs,
        constant=constant,
        witness={
            "coefficients": a.to_json_obj(),
            "combined": combined.to_json_obj(),
            "selection": selection.to_json_obj() if selection else None,
            "sup_norm": str(sup),
            "ratio": str(lhs_value / sup),
        },
        passed=lhs_value <= rhs,
    )


def q_estimate_scan(
    u: BlockSequence,
    q: Fraction,
    ranges: Sequence[tuple[int, int]],
    seed: int = 0,
    samples: int = 3,
    skip_normalization_check: bool = False,
) -> QEstimateReport:
    """Empirical lower q-estimate constants for a normalized block sequence.

    For each range, tests the indicator plus seeded sample vectors and
    records the minimum of ||sum a_j u_j|| / (sum |a_j|^q)^(1/q); the norm
    side is exact and the q-sum side a certified interval, so each recorded
    value is a true interval around the achieved ratio.
    """
    q = Fraction(q)
    if q < 1:
        raise ValueError("q must be >= 1")
    engine = JamesEngine(T_STAR)
    if not skip_normalization_check:
        _require_normalized(u, engine)
    rng = random.Random(seed)
    per_range: list[NormBounds] = []
    witnesses = []
    for n, m in ranges:
        if not 1 <= n <= m <= len(u.blocks):
            raise ValueError(f"range [{n}, {m}] exceeds the block count")
        window = list(range(n, m + 1))
        candidates = [FinVec.from_pairs((i, 1) for i in window)]
        candidates += [_sample_vector(rng, window) for _ in range(samples)]
        best: Optional[NormBounds] = None
        best_vec: Optional[FinVec] = None
        for a in candidates:
            norm_value = engine.eval_exact(combine(u, a))
            denom = lp_norm(a, q)
            ratio = NormBounds(
                norm_value / upper_of(denom), norm_value / lower_of(denom)
            )
            if best is None or ratio.lower < best.lower:
                best = ratio
                best_vec = a
        assert best is not None and best_vec is not None
        per_range.append(best)
        witnesses.append(best_vec.to_json_obj())
    overall = min(per_range, key=lambda b: b.lower)
    return QEstimateReport(
        q=q,
        ranges=tuple((n, m) for n, m in ranges),
        per_range=tuple(per_range),
        empirical_c=overall,
        witness={"minimizers": witnesses},
    )


def check_q_decay(
    levels: int = 4,
    q: Fraction = Fraction(2),
    seed: int = 0,
    samples: int = 3,
) -> Certificate:
    """Empirical q-estimate constants decay strictly along dyadic ranges.

    Uses the canonical basis blocks and ranges [2^j, 2^(j+1)], j = 1..levels;
    passes when consecutive constants strictly decrease (safe interval
    comparison) and each stays below the plateau value 2 / (2^j + 1)^(1/q).
    """
    ranges = [(2**j, 2 ** (j + 1)) for j in range(1, levels + 1)]
    u = BlockSequence.canonical_basis(2 ** (levels + 1))
    report = q_estimate_scan(
        u, q, ranges, seed=seed, samples=samples, skip_normalization_check=True
    )
    decreasing = all(
        report.per_range[j + 1].upper < report.per_range[j].lower
        for j in range(len(ranges) - 1)
    )
    below_plateau = True
    plateau_strs = []
    for (n, m), bounds in zip(report.ranges, report.per_range):
        plateau = lp_norm(
            FinVec.from_pairs((i, 1) for i in range(n, m + 1)), q
        )
        plateau_strs.append(str(plateau))
        if bounds.lower > 2 / lower_of(plateau):
            below_plateau = False
    passed = decreasing and below_plateau
    return Certificate(
        check_id="q_decay",
        params={"q": str(q), "levels": levels, "seed": seed, "samples": samples},
        lhs=report.per_range[-1].upper,
        rhs=report.per_range[0].lower,
        constant=Fraction(2),
        witness={
            "report": report.to_json_obj(),
            "plateau_denominators": plateau_strs,
        },
        passed=passed,
    )


def check_shrinking_series(
    u: BlockSequence, levels: int, skip_normalization_check: bool = False
) -> Certificate:
    """Dyadic coefficient plateaus have summable norms (exact)."""
    if levels < 0:
        raise ValueError("levels must be >= 0")
    if levels == 0:
        return Certificate(
            check_id="shrinking_series",
            params={"levels": 0},
            lhs=Fraction(0),
            rhs=Fraction(4),
            constant=Fraction(4),
            witness={},
            passed=True,
        )
    if len(u.blocks) < 2 ** (levels + 1):
        raise ValueError(
            f"need {2 ** (levels + 1)} blocks for {levels} levels, got {len(u.blocks)}"
        )
    engine = JamesEngine(T_STAR)
    if not skip_normalization_check:
        _require_normalized(u, engine)
    level_norms = []
    level_witness = []
    passed = True
    for n in range(1, levels + 1):
        coeff = Fraction(1, 2**n)
        a = FinVec.from_pairs((j, coeff) for j in range(2**n + 1, 2 ** (n + 1) + 1))
        value, selection = james_norm(combine(u, a), T_STAR, with_witness=True)
        bound = Fraction(4, 2**n)
        if value > bound:
            passed = False
        level_norms.append(value)
        level_witness.append(
            {
                "level": n,
                "norm": str(value),
                "bound": str(bound),
                "coefficients": a.to_json_obj(),
                "selection": selection.to_json_obj() if selection else None,
            }
        )
    total = sum(level_norms, Fraction(0))
    if total > 4:
        passed = False
    return Certificate(
        check_id="shrinking_series",
        params={"levels": levels},
        lhs=total,
        rhs=Fraction(4),
        constant=Fraction(4),
        witness={"levels": level_witness},
        passed=passed,
    )


# -- suite running -----------------------------------------------------------


@dataclass(frozen=True)
class CertificateReport:
    certificates: tuple[Certificate, ...]
    seed: int

    @property
    def failures(self) -> int:
        return sum(1 for c in self.certificates if not c.passed)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json_obj(self) -> dict:
        return {
            "seed": self.seed,
            "total": len(self.certificates),
            "failures": self.failures,
            "pass": self.passed,
            "certificates": [c.to_json_obj() for c in self.certificates],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, indent=2) + "\n"

    def csv_rows(self) -> list[tuple[str, str, str]]:
        rows = []
        for c in self.certificates:
            n = str(c.params.get("n", ""))
            rows.append((c.check_id, n, str(c.lhs / c.rhs if c.rhs else c.lhs)))
        return rows


def _random_boundaries(rng: random.Random, top: int) -> list[int]:
    cuts = sorted(rng.sample(range(1, top), k=min(rng.randint(1, 3), top - 1)))
    return [0] + cuts + [top]


def _unit_window_bound(params: dict, seed: int) -> list[Certificate]:
    constant = Fraction(params.get("constant", 2))
    samples = params.get("samples", 500)
    certs = []
    for n in params.get("ns", range(2, 11)):
        certs.append(
            check_window_bound(n, samples=samples, seed=seed + n, constant=constant)
        )
    return certs


def _unit_partition_bound(params: dict, seed: int) -> list[Certificate]:
    rng = random.Random(seed)
    samples = params.get("samples", 200)
    hull = params.get("max_hull", 10)
    worst: Optional[Certificate] = None
    all_passed = True
    count = 0
    for _ in range(samples):
        top = rng.randint(2, hull)
        y = _sample_vector(rng, range(1, top + 1))
        boundaries = _random_boundaries(rng, top)
        cert = check_partition_bound(y, boundaries)
        count += 1
        all_passed = all_passed and cert.passed
        margin = cert.rhs - cert.lhs
        if worst is None or margin < (worst.rhs - worst.lhs):
            worst = cert
    assert worst is not None
    return [
        Certificate(
            check_id="partition_bound",
            params={"samples": count, "seed": seed, "max_hull": hull},
            lhs=worst.lhs,
            rhs=worst.rhs,
            constant=Fraction(1),
            witness=worst.witness,
            passed=all_passed,
        )
    ]


def _random_normalized_blocks(
    rng: random.Random, count: int, total_support: int
) -> BlockSequence:
    width = max(1, total_support // count)
    raw = random_block_sequence(
        seed=rng.randrange(2**30), count=count, max_block_width=width
    )
    return normalize(raw, JamesEngine(T_STAR))


def _unit_block_domination(params: dict, seed: int) -> list[Certificate]:
    rng = random.Random(seed)
    samples = params.get("samples", 100)
    max_blocks = params.get("max_blocks", 4)
    total_support = params.get("total_support", 12)
    worst: Optional[Certificate] = None
    all_passed = True
    for _ in range(samples):
        count = rng.randint(1, max_blocks)
        u = _random_normalized_blocks(rng, count, total_support)
        a = _sample_vector(rng, range(1, count + 1))
        cert = check_block_domination(u, a, skip_normalization_check=True)
        all_passed = all_passed and cert.passed
        margin = cert.rhs - cert.lhs
        if worst is None or margin < (worst.rhs - worst.lhs):
            worst = cert
    assert worst is not None
    return [
        Certificate(
            check_id="block_domination",
            params={"samples": samples, "seed": seed},
            lhs=worst.lhs,
            rhs=worst.rhs,
            constant=Fraction(1),
            witness=worst.witness,
            passed=all_passed,
        )
    ]


def _unit_cor10(params: dict, seed: int) -> list[Certificate]:
    rng = random.Random(seed)
    samples = params.get("samples", 100)
    n = params.get("n", 2)
    constant = Fraction(params.get("constant", 4))
    worst_ratio = Fraction(0)
    worst: Optional[Certificate] = None
    all_passed = True
    for _ in range(samples):
        u = _random_normalized_blocks(rng, 2 * n, params.get("total_support", 12))
        a = _sample_vector(rng, range(n, 2 * n + 1))
        cert = check_cor10(u, n, a, constant=constant, skip_normalization_check=True)
        all_passed = all_passed and cert.passed
        ratio = Fraction(cert.witness["ratio"])
        if worst is None or ratio > worst_ratio:
            worst_ratio = ratio
            worst = cert
    assert worst is not None
    return [
        Certificate(
            check_id=f"cor10[n={n}]",
            params={"samples": samples, "seed": seed, "n": n, "max_ratio": str(worst_ratio)},
            lhs=worst.lhs,
            rhs=worst.rhs,
            constant=constant,
            witness=worst.witness,
            passed=all_passed,
        )
    ]


def _unit_q_decay(params: dict, seed: int) -> list[Certificate]:
    return [
        check_q_decay(
            levels=params.get("levels", 4),
            q=Fraction(params.get("q", 2)),
            seed=seed,
            samples=params.get("samples", 3),
        )
    ]


def _unit_shrinking_series(params: dict, seed: int) -> list[Certificate]:
    levels = params.get("levels", 3)
    u = BlockSequence.canonical_basis(2 ** (levels + 1))
    return [check_shrinking_series(u, levels, skip_normalization_check=True)]


CHECK_UNITS = {
    "window_bound": _unit_window_bound,
    "partition_bound": _unit_partition_bound,
    "block_domination": _unit_block_domination,
    "cor10": _unit_cor10,
    "q_decay": _unit_q_decay,
    "shrinking_series": _unit_shrinking_series,
}


DEFAULT_SUITE = [
    {"name": "window_bound"},
    {"name": "partition_bound"},
    {"name": "block_domination"},
    {"name": "cor10"},
    {"name": "q_decay"},
    {"name": "shrinking_series"},
]

QUICK_SUITE = [
    {"name": "window_bound", "samples": 20, "ns": [2, 3, 4]},
    {"name": "partition_bound", "samples": 20, "max_hull": 8},
    {"name": "block_domination", "samples": 10, "total_support": 8},
    {"name": "cor10", "samples": 10, "total_support": 8},
    {"name": "q_decay", "levels": 3, "samples": 2},
    {"name": "shrinking_series", "levels": 2},
]


def _run_unit(entry: tuple[dict, int]) -> list[Certificate]:
    params, seed = entry
    name = params["name"]
    return CHECK_UNITS[name]({k: v for k, v in params.items() if k != "name"}, seed)


def run_suite(
    config: Optional[dict] = None,
    workers: int = 1,
) -> CertificateReport:
    """Run a named check collection; deterministic for a fixed config.

    ``config`` holds a ``seed`` and a ``checks`` list of parameter
    dictionaries, each naming a registered check unit.  Unknown names are
    rejected.  Results are ordered by check id regardless of execution
    order, so parallel runs serialize identically.
    """
    config = config or {}
    seed = int(config.get("seed", 0))
    checks = config.get("checks", DEFAULT_SUITE)
    entries = []
    for k, params in enumerate(checks):
        name = params.get("name")
        if name not in CHECK_UNITS:
            raise ValueError(f"unknown check name: {name!r}")
        entries.append((params, seed * 1009 + 17 * k))
    if workers > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_unit, entries))
    else:
        results = [_run_unit(entry) for entry in entries]
    certificates = [cert for batch in results for cert in batch]
    certificates.sort(key=lambda c: c.check_id)
    return CertificateReport(tuple(certificates), seed)


# -- witness replay -----------------------------------------------------------


def replay_certificate(cert: Certificate) -> Fraction:
    """Recompute the recorded lhs from the certificate's witness alone."""
    check = cert.check_id.split("[")[0]
    w = cert.witness
    if check == "window_bound":
        y = FinVec.from_json_obj(w["vector"])
        return dual_norm_value(y) / Fraction(w["sup_norm"])
    if check == "partition_bound":
        return dual_norm_value(FinVec.from_json_obj(w["vector"]))
    if check in ("block_domination", "cor10"):
        combined = FinVec.from_json_obj(w["combined"])
        if w.get("selection"):
            selection = PairSelection(tuple(w["selection"]))
            attained = dual_norm_value(difference_vector(combined, selection))
            if attained != james_norm(combined, T_STAR):
                raise AssertionError("witness selection does not attain the norm")
            return attained
        return james_norm(combined, T_STAR)
    if check == "shrinking_series":
        total = Fraction(0)
        for level in w.get("levels", []):
            total += Fraction(level["norm"])
        return total
    raise ValueError(f"no replay rule for {cert.check_id}")
