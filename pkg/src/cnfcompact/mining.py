"""Transaction databases and frequent / closed / maximal itemset mining.

Closed itemsets are enumerated with prefix-preserving closure extension
(the LCM scheme): every closed set is produced exactly once, from its
unique closed parent, with polynomial delay.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Mapping


@dataclass(frozen=True)
class MinedItemset:
    items: frozenset
    support: int
    cover: frozenset

    def sort_key(self):
        return (len(self.items), sorted(self.items))


@dataclass
class TransactionDb:
    """Transactions keyed by tid. ``meta`` carries optional per-tid payloads."""

    transactions: dict[Hashable, frozenset] = field(default_factory=dict)
    item_universe: frozenset = frozenset()
    meta: dict[Hashable, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.transactions = {tid: frozenset(t) for tid, t in self.transactions.items()}
        used = frozenset().union(*self.transactions.values()) if self.transactions else frozenset()
        self.item_universe = frozenset(self.item_universe) | used

    @classmethod
    def from_iterable(cls, rows: Iterable[Iterable], start: int = 0) -> "TransactionDb":
        return cls({i: frozenset(r) for i, r in enumerate(rows, start)})

    @classmethod
    def from_mapping(cls, rows: Mapping[Hashable, Iterable]) -> "TransactionDb":
        return cls(dict(rows))

    def __len__(self) -> int:
        return len(self.transactions)

    def frequency(self, items: Iterable) -> Fraction:
        return Fraction(support(self, items)[0], len(self))


def parse_transactions(text: str) -> TransactionDb:
    """One transaction per non-empty line, whitespace-separated tokens.

    Tokens that all parse as integers become int items, otherwise strings.
    """
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    try:
        rows = [[int(t) for t in r] for r in rows]
    except ValueError:
        pass
    return TransactionDb.from_iterable(rows, start=1)


def support(db: TransactionDb, items: Iterable) -> tuple[int, frozenset]:
    items = frozenset(items)
    unknown = items - db.item_universe
    if unknown:
        raise KeyError(f"unknown items: {sorted(map(str, unknown))}")
    cover = frozenset(tid for tid, t in db.transactions.items() if items <= t)
    return len(cover), cover


def _occurrences(db: TransactionDb) -> dict:
    occ: dict = {}
    for tid, t in db.transactions.items():
        for it in t:
            occ.setdefault(it, set()).add(tid)
    return occ


def frequent_itemsets(db: TransactionDb, min_support: int, min_size: int = 0) -> set[MinedItemset]:
    """All itemsets with support >= min_support (exponential; small inputs only)."""
    if min_support < 1:
        raise ValueError("min_support must be >= 1")
    out: set[MinedItemset] = set()
    if len(db) < min_support:
        return out
    occ = _occurrences(db)
    items = sorted(it for it, tids in occ.items() if len(tids) >= min_support)
    all_tids = frozenset(db.transactions)
    if min_size <= 0:
        out.add(MinedItemset(frozenset(), len(all_tids), all_tids))

    # depth-first over ascending item sequences, pruned by anti-monotonicity
    stack = [((), all_tids, 0)]
    while stack:
        prefix, cover, start = stack.pop()
        for i in range(start, len(items)):
            c = cover & occ[items[i]]
            if len(c) < min_support:
                continue
            ext = prefix + (items[i],)
            if len(ext) >= min_size:
                out.add(MinedItemset(frozenset(ext), len(c), frozenset(c)))
            stack.append((ext, c, i + 1))
    return out


def closed_itemsets(db: TransactionDb, min_support: int, min_size: int = 0) -> set[MinedItemset]:
    """Closed itemsets with support >= min_support and size >= min_size."""
    if min_support < 1:
        raise ValueError("min_support must be >= 1")
    return set(iter_closed(db, min_support, min_size))


def iter_closed(db: TransactionDb, min_support: int, min_size: int = 0):
    trans = db.transactions
    if len(trans) < min_support:
        return
    order = {it: i for i, it in enumerate(sorted(db.item_universe))}
    occ = {it: frozenset(tids) for it, tids in _occurrences(db).items()}

    def closure(tids) -> frozenset:
        it = iter(tids)
        acc = set(trans[next(it)])
        for tid in it:
            acc &= trans[tid]
            if not acc:
                break
        return frozenset(acc)

    root_cover = frozenset(trans)
    root = closure(root_cover) if trans else frozenset()
    if len(root) >= min_size:
        yield MinedItemset(root, len(root_cover), root_cover)

    # node: (closed set, its cover, rank of the item that generated it)
    stack = [(root, root_cover, -1)]
    while stack:
        closed, cover, core = stack.pop()
        counts: Counter = Counter()
        for tid in cover:
            for it in trans[tid]:
                if order[it] > core and it not in closed:
                    counts[it] += 1
        children = []
        for it in sorted((i for i, n in counts.items() if n >= min_support), key=order.__getitem__):
            rank = order[it]
            sub = cover & occ[it]
            q = closure(sub)
            # prefix-preserving test: no new item ranked below the extension item
            if any(order[x] < rank for x in q - closed):
                continue
            children.append((q, sub, rank))
        for q, sub, rank in children:
            if len(q) >= min_size:
                yield MinedItemset(q, len(sub), sub)
        stack.extend(reversed(children))


def maximal_itemsets(db: TransactionDb, min_support: int, min_size: int = 0) -> set[MinedItemset]:
    """Frequent itemsets with no frequent strict superset.

    Every frequent superset lies inside a closed frequent superset, so it
    is enough to keep closed sets that are not inside another closed set.
    """
    closed = sorted(closed_itemsets(db, min_support, 0), key=lambda m: -len(m.items))
    kept: list[MinedItemset] = []
    for m in closed:
        if not any(m.items < k.items for k in kept):
            kept.append(m)
    return {m for m in kept if len(m.items) >= min_size}


def canonical(itemsets: Iterable[MinedItemset]) -> list[MinedItemset]:
    return sorted(itemsets, key=MinedItemset.sort_key)
