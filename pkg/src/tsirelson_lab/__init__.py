"""Exact-arithmetic Tsirelson-type norms and certified inequality checks.

The package evaluates the Tsirelson norm T, its dual T*, and the
Tsirelson*-James norm on finitely supported rational vectors, entirely in
exact arithmetic, and certifies a family of quantitative inequalities
between them with machine-checkable witnesses.
"""

from .seqvec import (
    EventuallyConstantSeq,
    FinVec,
    IndexInterval,
    NormBounds,
    lp_norm,
    restrict,
    shift_support,
)
from .tsirelson import (
    EvaluationTree,
    IntervalPartition,
    TreeLeaf,
    TreeNode,
    admissible_partitions,
    tsirelson_maximizer,
    tsirelson_norm,
)
from .dualnorm import (
    DualTsirelsonEngine,
    LpEngine,
    NormEngine,
    TsirelsonEngine,
    dual_norm,
    dual_norm_exact_small,
    dual_norm_value,
    pairing,
)
from .jamesify import (
    JamesEngine,
    PairSelection,
    alpha_limit,
    bidual_norm,
    difference_vector,
    james_norm,
    u_map,
)
from .blockseq import BlockSequence, combine, normalize, random_block_sequence
from .certify import (
    Certificate,
    CertificateReport,
    QEstimateReport,
    check_block_domination,
    check_cor10,
    check_partition_bound,
    check_shrinking_series,
    check_window_bound,
    q_estimate_scan,
    run_suite,
)

__all__ = [
    "BlockSequence",
    "Certificate",
    "CertificateReport",
    "DualTsirelsonEngine",
    "EvaluationTree",
    "EventuallyConstantSeq",
    "FinVec",
    "IndexInterval",
    "IntervalPartition",
    "JamesEngine",
    "LpEngine",
    "NormBounds",
    "NormEngine",
    "PairSelection",
    "QEstimateReport",
    "TreeLeaf",
    "TreeNode",
    "TsirelsonEngine",
    "admissible_partitions",
    "alpha_limit",
    "bidual_norm",
    "check_block_domination",
    "check_cor10",
    "check_partition_bound",
    "check_shrinking_series",
    "check_window_bound",
    "combine",
    "difference_vector",
    "dual_norm",
    "dual_norm_exact_small",
    "dual_norm_value",
    "james_norm",
    "lp_norm",
    "normalize",
    "pairing",
    "q_estimate_scan",
    "random_block_sequence",
    "restrict",
    "run_suite",
    "shift_support",
    "tsirelson_maximizer",
    "tsirelson_norm",
    "u_map",
]

__version__ = "0.1.0"
