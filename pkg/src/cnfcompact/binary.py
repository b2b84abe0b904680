"""Compaction of the binary-clause part of a formula.

Binary clauses sharing a first literal are grouped into implications
``head ∨ (t1 ∧ ... ∧ tn)``. Tails are mined for closed literal sets; a set
``Y`` common to ``k`` tails is replaced by a fresh ``z`` in those tails and
``¬z ∨ (y1 ∧ ... ∧ yn)`` is added, turning ``n·k`` binary clauses into
``n + k``. Bi-cliques and cliques of binary clauses compact this way with
no dedicated detection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .cnf import CnfFormula, lit_key, lit_to_item, sorted_lits
from .mining import TransactionDb
from .reduce import (
    ReductionMap,
    ReductionStats,
    build_overlap_classes,
    dedup_clauses,
    greedy_substitute,
    mine_candidates,
)


@dataclass(frozen=True)
class BImplication:
    head: int
    tail: frozenset

    def clauses(self) -> list[frozenset]:
        return [frozenset((self.head, t)) for t in sorted_lits(self.tail)]

    def __str__(self) -> str:
        return f"{self.head} | [{' & '.join(map(str, sorted_lits(self.tail)))}]"


def is_binary(c: frozenset) -> bool:
    if len(c) != 2:
        return False
    a, b = c
    return a != -b


def to_b_implications(clauses: Iterable[frozenset] | CnfFormula) -> list[BImplication]:
    """Group binary clauses by their smaller literal, ordered ¬x1 < x1 < ¬x2 < ..."""
    if isinstance(clauses, CnfFormula):
        clauses = clauses.clauses
    tails: dict[int, set] = {}
    for c in clauses:
        if len(c) != 2:
            raise ValueError(f"not a binary clause: {sorted_lits(c)}")
        if not is_binary(c):
            raise ValueError(f"tautological clause: {sorted_lits(c)}")
        head, tail = sorted_lits(c)
        tails.setdefault(head, set()).add(tail)
    return [BImplication(h, frozenset(tails[h])) for h in sorted(tails, key=lit_key)]


def bimpl_to_db(bs: Iterable[BImplication]) -> TransactionDb:
    rows, heads = {}, {}
    for tid, b in enumerate(bs):
        rows[tid] = frozenset(lit_to_item(l) for l in b.tail)
        heads[tid] = b.head
    return TransactionDb(rows, meta=heads)


def binary_interesting(n: int, k: int) -> bool:
    """Replacing an n-literal tail set shared by k implications drops clauses."""
    return n >= 2 and k >= 2 and n * k > n + k


def clause_gain(n: int, k: int) -> int:
    return n * k - n - k


def reduce_binary(f: CnfFormula, min_support: int = 2,
                  validate: bool = False) -> tuple[CnfFormula, ReductionMap, ReductionStats]:
    """Compact the 2-clause sub-formula; other clauses pass through unchanged."""
    binary_idx = [i for i, c in enumerate(f.clauses) if is_binary(c)]
    binary, merged = dedup_clauses([f.clauses[i] for i in binary_idx])
    bs = to_b_implications(binary)
    heads = [b.head for b in bs]
    tails = [b.tail for b in bs]

    work = f.copy()
    rmap = ReductionMap()
    cands = mine_candidates(bimpl_to_db(bs), max(min_support, 2), 2, gate=binary_interesting)

    def definition_row(lits: frozenset, z: int) -> frozenset:
        heads.append(-z)
        return lits

    for oc in build_overlap_classes(cands):
        greedy_substitute(
            tails,
            oc.members,
            work.fresh_var,
            definition_row,
            gate=binary_interesting,
            scorer=clause_gain,
            on_apply=lambda cand, z: rmap.add(z, cand.literals, "and"),
            validate=validate,
        )

    if rmap:
        binary_set = set(binary_idx)
        work.clauses = [c for i, c in enumerate(f.clauses) if i not in binary_set]
        for h, t in zip(heads, tails):
            work.clauses.extend(BImplication(h, t).clauses())
    else:
        seen: set = set()
        work.clauses = []
        for i, c in enumerate(f.clauses):
            if is_binary(c):
                if c in seen:
                    continue
                seen.add(c)
            work.clauses.append(c)

    stats = ReductionStats.measure(f, work, duplicate_clauses_merged=merged,
                                   itemsets_applied=len(rmap), passes_run=1)
    return work, rmap, stats
