"""Literal-set substitution: mine closed literal sets, rewrite greedily.

A closed frequent set ``I`` of ``n`` literals occurring in ``k`` clauses is
replaced in each of those clauses by a fresh variable ``x`` and the
definition clause ``I ∪ {¬x}`` is appended. That trades ``n·k`` literal
occurrences for ``k + n + 1``.
"""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
from typing import Callable, Iterable, Sequence

from .cnf import CnfFormula, lit_key, lit_to_item, item_to_lit, literal_count, sorted_lits, var_of, write_dimacs
from .mining import TransactionDb, closed_itemsets

log = logging.getLogger(__name__)


class ReductionError(RuntimeError):
    """A candidate's bookkeeping disagrees with the formula."""


def is_interesting(n: int, k: int) -> bool:
    """True when substituting an n-literal set found in k clauses saves literals.

    ``k > (n+1)/(n-1)`` compared in integers.
    """
    return n >= 2 and k * (n - 1) > n + 1


def score(n: int, k: int) -> int:
    """Net number of literals removed by one substitution."""
    return k * (n - 1) - n - 1


@dataclass(eq=False)
class Candidate:
    literals: frozenset
    support: int
    cover: set = field(default_factory=set)

    @property
    def score(self) -> int:
        return score(len(self.literals), self.support)

    def canon(self) -> list[tuple[int, bool]]:
        return [lit_key(l) for l in sorted_lits(self.literals)]

    def copy(self) -> "Candidate":
        return Candidate(self.literals, self.support, set(self.cover))

    def __repr__(self) -> str:
        return f"Candidate({sorted_lits(self.literals)}, support={self.support})"


@dataclass
class OverlapClass:
    members: list[Candidate]

    def literals(self) -> frozenset:
        return frozenset().union(*(m.literals for m in self.members))


@dataclass
class Definition:
    var: int
    defines: frozenset
    kind: str = "or"  # "or": var -> OR(defines); "and": var -> AND(defines)


@dataclass
class ReductionMap:
    definitions: list[Definition] = field(default_factory=list)

    def add(self, var: int, defines: Iterable[int], kind: str = "or") -> None:
        if self.definitions and var <= self.definitions[-1].var:
            raise ValueError("fresh variables must be strictly increasing")
        self.definitions.append(Definition(var, frozenset(defines), kind))

    def extend(self, other: "ReductionMap") -> None:
        for d in other.definitions:
            self.add(d.var, d.defines, d.kind)

    def fresh_vars(self) -> list[int]:
        return [d.var for d in self.definitions]

    def __len__(self) -> int:
        return len(self.definitions)

    def to_json(self) -> str:
        doc = [{"var": d.var, "defines": sorted_lits(d.defines), "kind": d.kind} for d in self.definitions]
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReductionMap":
        m = cls()
        for entry in json.loads(text):
            m.add(int(entry["var"]), [int(l) for l in entry["defines"]], entry.get("kind", "or"))
        return m

    def extend_model(self, model: dict[int, bool]) -> dict[int, bool]:
        """Assign every fresh variable from its definition, in creation order."""
        out = dict(model)

        def val(l: int) -> bool:
            return out.get(var_of(l), False) == (l > 0)

        for d in self.definitions:
            if d.kind == "and":
                out[d.var] = all(val(l) for l in d.defines)
            else:
                out[d.var] = any(val(l) for l in d.defines)
        return out


@dataclass
class ReductionStats:
    literals_before: int = 0
    literals_after: int = 0
    clauses_before: int = 0
    clauses_after: int = 0
    vars_before: int = 0
    vars_after: int = 0
    bytes_before: int = 0
    bytes_after: int = 0
    duplicate_clauses_merged: int = 0
    itemsets_applied: int = 0
    passes_run: int = 0

    @property
    def percent_removed(self) -> float:
        if not self.literals_before:
            return 0.0
        return 100.0 * (self.literals_before - self.literals_after) / self.literals_before

    @classmethod
    def measure(cls, before: CnfFormula, after: CnfFormula, **kw) -> "ReductionStats":
        return cls(
            literals_before=literal_count(before),
            literals_after=literal_count(after),
            clauses_before=len(before),
            clauses_after=len(after),
            vars_before=before.num_vars,
            vars_after=after.num_vars,
            bytes_before=len(write_dimacs(before)),
            bytes_after=len(write_dimacs(after)),
            **kw,
        )

    def merge(self, other: "ReductionStats") -> None:
        self.duplicate_clauses_merged += other.duplicate_clauses_merged
        self.itemsets_applied += other.itemsets_applied
        self.passes_run = max(self.passes_run, other.passes_run)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["percent_removed"] = round(self.percent_removed, 4)
        return d


def dedup_clauses(clauses: Sequence[frozenset]) -> tuple[list[frozenset], int]:
    seen: set = set()
    out = []
    for c in clauses:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out, len(clauses) - len(out)


def cnf_to_db(f: CnfFormula) -> TransactionDb:
    """One transaction per distinct clause, keyed by the clause's first index.

    ``meta[tid]`` holds the multiplicity of that clause in ``f``.
    """
    first: dict[frozenset, int] = {}
    mult: dict[int, int] = {}
    for i, c in enumerate(f.clauses):
        tid = first.setdefault(c, i)
        mult[tid] = mult.get(tid, 0) + 1
    rows = {tid: frozenset(lit_to_item(l) for l in c) for c, tid in first.items()}
    return TransactionDb(rows, meta=mult)


def mine_candidates(rows: TransactionDb, min_support: int, min_size: int,
                    gate: Callable[[int, int], bool] = is_interesting) -> list[Candidate]:
    out = []
    for m in closed_itemsets(rows, min_support, max(min_size, 1)):
        if gate(len(m.items), m.support):
            out.append(Candidate(frozenset(item_to_lit(i) for i in m.items), m.support, set(m.cover)))
    out.sort(key=Candidate.canon)
    return out


class _DisjointSet:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        root = x
        while self.parent.setdefault(root, root) != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def build_overlap_classes(cands: Iterable[Candidate]) -> list[OverlapClass]:
    """Connected components of the share-a-literal graph, canonically ordered."""
    cands = list(cands)
    ds = _DisjointSet()
    for c in cands:
        lits = iter(c.literals)
        first = next(lits)
        ds.find(first)
        for l in lits:
            ds.union(first, l)
    groups: dict = {}
    for c in cands:
        groups.setdefault(ds.find(next(iter(c.literals))), []).append(c)
    classes = [OverlapClass(sorted(g, key=Candidate.canon)) for g in groups.values()]
    classes.sort(key=lambda oc: oc.members[0].canon())
    return classes


def subset_still_interesting(sub: Candidate, sup: Candidate) -> bool:
    """Whether ``sub`` stays worth substituting once ``sup`` has been applied.

    Applying ``sup`` leaves ``sub`` with residual support S(sub) - S(sup) + 1.
    """
    return is_interesting(len(sub.literals), sub.support - sup.support + 1)


def required_difference(s: int) -> int:
    return 2 if s >= 4 else 3 if s == 3 else 4


def overlap_both_interesting(a: Candidate, b: Candidate, union_support: int) -> bool:
    """Whether two overlapping sets can both contribute to a reduction."""
    residual = (is_interesting(len(a.literals), a.support - union_support + 1)
                or is_interesting(len(b.literals), b.support - union_support + 1))
    difference = (len(a.literals - b.literals) >= required_difference(a.support)
                  or len(b.literals - a.literals) >= required_difference(b.support))
    return residual or difference


def select_best(members: Sequence[Candidate], scorer: Callable[[int, int], int] = score) -> Candidate:
    # max score, then max support, then smallest canonical literal sequence
    return min(members, key=lambda m: (-scorer(len(m.literals), m.support), -m.support, m.canon()))


def greedy_substitute(
    rows: list[frozenset],
    members: list[Candidate],
    new_var: Callable[[], int],
    definition_row: Callable[[frozenset, int], frozenset],
    gate: Callable[[int, int], bool] = is_interesting,
    scorer: Callable[[int, int], int] = score,
    on_apply: Callable[[Candidate, int], None] | None = None,
    validate: bool = False,
    salvage: bool = False,
) -> int:
    """Greedy substitution loop over one overlap class; mutates ``rows``.

    ``rows[i]`` is the literal set a candidate cover index ``i`` refers to.
    Members that overlap the applied set without being nested in it are
    dropped. With ``salvage`` their part outside the applied set is kept as a
    new candidate when ``overlap_both_interesting`` says it can still pay off;
    its cover is recomputed by scanning ``rows``.
    Returns the number of substitutions applied.
    """
    members = [m.copy() for m in members]
    applied = 0
    while members:
        best = select_best(members, scorer)
        lits, k = best.literals, best.support
        for i in best.cover:
            if not lits <= rows[i]:
                raise ReductionError(f"{best!r} not contained in row {i}")
        x = new_var()
        for i in best.cover:
            rows[i] = (rows[i] - lits) | {x}
        def_idx = len(rows)
        rows.append(definition_row(lits, x))
        if on_apply is not None:
            on_apply(best, x)
        applied += 1

        members.remove(best)
        survivors, dropped = [], []
        for m in members:
            if lits < m.literals:
                m.literals = (m.literals - lits) | {x}
            elif m.literals <= lits:
                m.cover = (m.cover - best.cover) | {def_idx}
                m.support = m.support - k + 1
            elif m.literals & lits:
                dropped.append(m)
                continue
            if gate(len(m.literals), m.support):
                survivors.append(m)
        if salvage and dropped:
            survivors.extend(_salvage(rows, best, dropped, survivors, gate))
        members = survivors
        if validate:
            _check_covers(rows, members)
    return applied


def _salvage(rows: Sequence[frozenset], best: Candidate, dropped: list[Candidate],
             survivors: list[Candidate], gate: Callable[[int, int], bool]) -> list[Candidate]:
    seen = {m.literals for m in survivors}
    out = []
    for m in dropped:
        if not overlap_both_interesting(best, m, len(best.cover & m.cover)):
            continue
        rest = m.literals - best.literals
        if rest in seen:
            continue
        cover = {i for i, r in enumerate(rows) if rest <= r}
        if gate(len(rest), len(cover)):
            seen.add(rest)
            out.append(Candidate(rest, len(cover), cover))
    return out


def _check_covers(rows: Sequence[frozenset], members: Iterable[Candidate]) -> None:
    for m in members:
        exact = {i for i, r in enumerate(rows) if m.literals <= r}
        if exact != m.cover or len(exact) != m.support:
            raise ReductionError(f"{m!r}: recorded cover {sorted(m.cover)} != actual {sorted(exact)}")


def apply_reduction(f: CnfFormula, overlap_class: OverlapClass, rmap: ReductionMap,
                    validate: bool = False, salvage: bool = False) -> tuple[CnfFormula, ReductionMap]:
    """Rewrite ``f`` in place with the members of one overlap class."""
    rows = f.clauses
    greedy_substitute(
        rows,
        overlap_class.members,
        f.fresh_var,
        lambda lits, x: lits | {-x},
        on_apply=lambda cand, x: rmap.add(x, cand.literals, "or"),
        validate=validate,
        salvage=salvage,
    )
    return f, rmap


def reduce_formula(f: CnfFormula, min_support: int = 2, min_size: int = 2, passes: int = 2,
                   validate: bool = False, salvage: bool = False) -> tuple[CnfFormula, ReductionMap, ReductionStats]:
    if min_support < 2 or min_size < 2 or passes < 1:
        raise ValueError("need min_support >= 2, min_size >= 2, passes >= 1")
    work = f.copy()
    rmap = ReductionMap()
    merged = applied = passes_run = 0
    for _ in range(passes):
        work.clauses, dup = dedup_clauses(work.clauses)
        merged += dup
        cands = mine_candidates(cnf_to_db(work), min_support, min_size)
        if not cands:
            break
        passes_run += 1
        before = len(rmap)
        for oc in build_overlap_classes(cands):
            apply_reduction(work, oc, rmap, validate=validate, salvage=salvage)
        applied += len(rmap) - before
        log.debug("pass %d: %d substitutions, %d literals", passes_run, len(rmap) - before, literal_count(work))
    stats = ReductionStats.measure(f, work, duplicate_clauses_merged=merged,
                                   itemsets_applied=applied, passes_run=passes_run)
    return work, rmap, stats


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get("CNFCOMPACT_THREADS", "1")))
    except ValueError:
        return 1


def split_chunks(n: int, parts: int) -> list[range]:
    size, extra = divmod(n, parts)
    out, start = [], 0
    for p in range(parts):
        end = start + size + (p < extra)
        out.append(range(start, end))
        start = end
    return out


def reduce_partitioned(f: CnfFormula, parts: int, min_support: int = 2, min_size: int = 2,
                       passes: int = 2, reducer: Callable | None = None,
                       workers: int | None = None) -> tuple[CnfFormula, ReductionMap, ReductionStats]:
    """Reduce contiguous clause chunks independently and concatenate.

    Every chunk allocates fresh variables from the same base; chunk ``j``'s
    fresh variables are then shifted past those of chunks ``0..j-1``, so the
    result does not depend on scheduling.
    """
    if parts < 1:
        raise ValueError("parts must be >= 1")
    if reducer is None:
        def reducer(g):
            return reduce_formula(g, min_support, min_size, passes)

    base = f.next_fresh_var
    chunks = [CnfFormula([f.clauses[i] for i in r], f.num_declared_vars, base)
              for r in split_chunks(len(f.clauses), parts)]
    workers = workers or _worker_count()
    if workers > 1 and parts > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(reducer, chunks))
    else:
        results = [reducer(c) for c in chunks]

    out = CnfFormula([], f.num_declared_vars, base)
    rmap = ReductionMap()
    merged = ReductionStats()
    offset = 0
    for g, m, st in results:
        def shift(l: int) -> int:
            v = var_of(l)
            if v < base:
                return l
            return l + offset if l > 0 else l - offset

        out.clauses.extend(frozenset(shift(l) for l in c) for c in g.clauses)
        for d in m.definitions:
            rmap.add(d.var + offset, [shift(l) for l in d.defines], d.kind)
        offset += g.next_fresh_var - base
        merged.merge(st)
    out.next_fresh_var = base + offset
    stats = ReductionStats.measure(f, out, duplicate_clauses_merged=merged.duplicate_clauses_merged,
                                   itemsets_applied=merged.itemsets_applied, passes_run=merged.passes_run)
    return out, rmap, stats
