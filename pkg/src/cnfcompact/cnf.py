"""CNF data model, DIMACS reading/writing and size accounting.

Literals are DIMACS signed integers throughout: ``v`` is the positive
literal of variable ``v`` and ``-v`` its complement. A clause is a
``frozenset`` of literals.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

log = logging.getLogger(__name__)

Clause = frozenset  # frozenset[int]

MAX_VAR = 2**31 - 1


class DimacsError(ValueError):
    """Raised on malformed DIMACS input."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def var_of(lit: int) -> int:
    return lit if lit > 0 else -lit


def complement(lit: int) -> int:
    return -lit


def lit_key(lit: int) -> tuple[int, bool]:
    """Sort key for the literal order ¬x1 < x1 < ¬x2 < x2 < ..."""
    return (lit if lit > 0 else -lit, lit > 0)


def sorted_lits(lits: Iterable[int]) -> list[int]:
    return sorted(lits, key=lit_key)


def lit_to_item(lit: int) -> int:
    """Encode a literal as a mining item id (complementary literals differ)."""
    return 2 * lit if lit > 0 else -2 * lit + 1


def item_to_lit(item: int) -> int:
    v, neg = divmod(item, 2)
    return -v if neg else v


@dataclass
class CnfFormula:
    """A CNF formula with a fresh-variable allocator.

    ``next_fresh_var`` is always larger than every variable occurring in
    the clauses and than ``num_declared_vars``.
    """

    clauses: list[frozenset[int]] = field(default_factory=list)
    num_declared_vars: int = 0
    next_fresh_var: int = 0

    def __post_init__(self) -> None:
        self.clauses = [frozenset(c) for c in self.clauses]
        top = max((var_of(l) for c in self.clauses for l in c), default=0)
        self.next_fresh_var = max(self.next_fresh_var, top + 1, self.num_declared_vars + 1)

    @property
    def num_vars(self) -> int:
        return self.next_fresh_var - 1

    def fresh_var(self) -> int:
        v = self.next_fresh_var
        if v > MAX_VAR:
            raise OverflowError("variable index space exhausted")
        self.next_fresh_var += 1
        return v

    def variables(self) -> set[int]:
        return {var_of(l) for c in self.clauses for l in c}

    def copy(self) -> "CnfFormula":
        return CnfFormula(list(self.clauses), self.num_declared_vars, self.next_fresh_var)

    def __len__(self) -> int:
        return len(self.clauses)


def literal_count(f: CnfFormula) -> int:
    """Formula size as the total number of literal occurrences."""
    return sum(len(c) for c in f.clauses)


def parse_dimacs(data: bytes | str, max_var: int = MAX_VAR) -> CnfFormula:
    """Parse DIMACS CNF text.

    Comment lines (``c``) are skipped and a ``%`` line ends the clause
    section (SATLIB convention). A clause-count mismatch with the header
    is logged, not raised.
    """
    if isinstance(data, bytes):
        data = data.decode("ascii", errors="replace")

    header: tuple[int, int] | None = None
    clauses: list[frozenset[int]] = []
    current: list[int] = []
    lineno = 0
    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        if line[0] == "%":
            break
        if line[0] == "p":
            parts = line.split()
            if header is not None:
                raise DimacsError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed header {line!r}", lineno)
            try:
                nvars, ncls = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"malformed header {line!r}", lineno) from None
            if nvars < 0 or ncls < 0 or nvars > max_var:
                raise DimacsError(f"malformed header {line!r}", lineno)
            header = (nvars, ncls)
            continue
        if header is None:
            raise DimacsError("clause data before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"non-integer token {tok!r}", lineno) from None
            if lit == 0:
                clauses.append(frozenset(current))
                current = []
            elif var_of(lit) > max_var:
                raise DimacsError(f"variable {var_of(lit)} exceeds cap {max_var}", lineno)
            else:
                current.append(lit)

    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        raise DimacsError("unterminated final clause", lineno)
    if len(clauses) != header[1]:
        log.warning("header declares %d clauses, found %d", header[1], len(clauses))
    return CnfFormula(clauses, num_declared_vars=header[0])


def write_dimacs(f: CnfFormula) -> bytes:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    for c in f.clauses:
        lines.append(" ".join(map(str, sorted_lits(c) + [0])))
    return ("\n".join(lines) + "\n").encode("ascii")


def read_cnf(path) -> CnfFormula:
    with open(path, "rb") as fh:
        return parse_dimacs(fh.read())


def write_cnf(f: CnfFormula, path) -> None:
    with open(path, "wb") as fh:
        fh.write(write_dimacs(f))
