"""Compact CNF formulas by replacing frequent literal sets with fresh variables."""

from .binary import BImplication, binary_interesting, bimpl_to_db, reduce_binary, to_b_implications
from .cnf import CnfFormula, DimacsError, complement, literal_count, parse_dimacs, write_dimacs
from .mining import (
    MinedItemset,
    TransactionDb,
    closed_itemsets,
    frequent_itemsets,
    maximal_itemsets,
    support,
)
from .oracle import EquisatReport, OracleLimitError, check_equisat, solve
from .pipeline import RunConfig, compact
from .reduce import (
    Candidate,
    OverlapClass,
    ReductionMap,
    ReductionStats,
    apply_reduction,
    build_overlap_classes,
    cnf_to_db,
    is_interesting,
    overlap_both_interesting,
    reduce_formula,
    reduce_partitioned,
    subset_still_interesting,
)

__version__ = "0.1.0"
