"""Small complete SAT checker used to validate rewrites.

Plain DPLL with unit propagation, branching on the lowest unassigned
variable. Meant for desk-scale formulas only; ``var_limit`` enforces that.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cnf import CnfFormula, sorted_lits, var_of
from .reduce import ReductionMap

DEFAULT_VAR_LIMIT = 24


class OracleLimitError(RuntimeError):
    pass


def _assign(clauses: list[frozenset], lit: int) -> list[frozenset] | None:
    out = []
    neg = -lit
    for c in clauses:
        if lit in c:
            continue
        if neg in c:
            c = c - {neg}
            if not c:
                return None
        out.append(c)
    return out


def _dpll(clauses: list[frozenset], trail: dict[int, bool]) -> bool:
    while True:
        unit = next((c for c in clauses if len(c) == 1), None)
        if unit is None:
            break
        (lit,) = unit
        trail[var_of(lit)] = lit > 0
        clauses = _assign(clauses, lit)
        if clauses is None:
            return False
    if not clauses:
        return True
    v = min(var_of(l) for c in clauses for l in c)
    for lit in (v, -v):
        reduced = _assign(clauses, lit)
        if reduced is None:
            continue
        sub = dict(trail)
        sub[v] = lit > 0
        if _dpll(reduced, sub):
            trail.update(sub)
            return True
    return False


def solve(f: CnfFormula | Sequence[frozenset], var_limit: int = DEFAULT_VAR_LIMIT) -> dict[int, bool] | None:
    """Return a model over every variable of ``f``, or None if unsatisfiable."""
    clauses = f.clauses if isinstance(f, CnfFormula) else list(f)
    variables = {var_of(l) for c in clauses for l in c}
    if len(variables) > var_limit:
        raise OracleLimitError(f"{len(variables)} variables exceed oracle limit {var_limit}")
    if any(not c for c in clauses):
        return None
    trail: dict[int, bool] = {}
    if not _dpll([frozenset(c) for c in clauses], trail):
        return None
    return {v: trail.get(v, False) for v in sorted(variables)}


def satisfies(model: dict[int, bool], clause: Iterable[int]) -> bool:
    return any(model.get(var_of(l), False) == (l > 0) for l in clause)


def violated(f: CnfFormula, model: dict[int, bool]) -> list[int]:
    return [i for i, c in enumerate(f.clauses) if not satisfies(model, c)]


@dataclass
class EquisatReport:
    sat_original: bool
    sat_reduced: bool
    projection_ok: bool = True
    extension_ok: bool = True
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.sat_original == self.sat_reduced and self.projection_ok and self.extension_ok

    def summary(self) -> str:
        head = "PASS" if self.ok else "FAIL"
        lines = [f"{head}: sat(original)={self.sat_original} sat(reduced)={self.sat_reduced} "
                 f"projection={'ok' if self.projection_ok else 'FAILED'} "
                 f"extension={'ok' if self.extension_ok else 'FAILED'}"]
        lines.extend("  " + p for p in self.problems)
        return "\n".join(lines)


def _check_map(original: CnfFormula, rmap: ReductionMap) -> None:
    known = original.variables() | set(range(1, original.next_fresh_var))
    for d in rmap.definitions:
        if d.var in known:
            raise ValueError(f"map variable {d.var} collides with an existing variable")
        missing = {var_of(l) for l in d.defines} - known
        if missing:
            raise ValueError(f"map entry {d.var} references unknown variables {sorted(missing)}")
        known.add(d.var)


def check_equisat(original: CnfFormula, reduced: CnfFormula, rmap: ReductionMap,
                  var_limit: int = DEFAULT_VAR_LIMIT) -> EquisatReport:
    """Check satisfiability agreement plus both model-transfer directions."""
    _check_map(original, rmap)
    m_orig = solve(original, var_limit)
    m_red = solve(reduced, var_limit)
    rep = EquisatReport(m_orig is not None, m_red is not None)
    if rep.sat_original != rep.sat_reduced:
        rep.problems.append("satisfiability differs")

    if m_red is not None:
        orig_vars = original.variables()
        projected = {v: b for v, b in m_red.items() if v in orig_vars}
        bad = violated(original, projected)
        if bad:
            rep.projection_ok = False
            rep.problems.extend(
                f"projected model violates original clause {i}: {sorted_lits(original.clauses[i])}" for i in bad)

    if m_orig is not None:
        extended = rmap.extend_model(m_orig)
        bad = violated(reduced, extended)
        if bad:
            rep.extension_ok = False
            rep.problems.extend(
                f"extended model violates reduced clause {i}: {sorted_lits(reduced.clauses[i])}" for i in bad)
    return rep


def random_cnf(rng: random.Random, max_vars: int = 14, max_clauses: int = 60,
               min_len: int = 1, max_len: int = 5, plant: bool = True) -> CnfFormula:
    """Random CNF, optionally with a repeated literal core planted in several clauses.

    Planting makes substitutions likely so fuzzing exercises the rewrite paths.
    """
    nvars = rng.randint(2, max_vars)
    nclauses = rng.randint(1, max_clauses)

    def lit() -> int:
        v = rng.randint(1, nvars)
        return v if rng.random() < 0.5 else -v

    cores = []
    if plant:
        for _ in range(rng.randint(0, 3)):
            size = rng.randint(2, max(2, min(max_len, nvars)))
            vs = rng.sample(range(1, nvars + 1), min(size, nvars))
            cores.append([v if rng.random() < 0.5 else -v for v in vs])

    binary_share = rng.choice([0.0, 0.3, 0.7]) if min_len <= 2 <= max_len else 0.0
    clauses = []
    for _ in range(nclauses):
        length = 2 if rng.random() < binary_share else rng.randint(min_len, max_len)
        c = set()
        if cores and rng.random() < 0.5:
            c.update(rng.choice(cores)[:length])
        while len(c) < length and len({abs(l) for l in c}) < nvars:
            c.add(lit())
        clauses.append(frozenset(c))
    return CnfFormula(clauses, num_declared_vars=nvars)


def random_binary_cnf(rng: random.Random, max_vars: int = 14, max_clauses: int = 60) -> CnfFormula:
    nvars = rng.randint(2, max_vars)
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        a, b = rng.sample(range(1, nvars + 1), 2)
        clauses.append(frozenset((a if rng.random() < 0.5 else -a, b if rng.random() < 0.5 else -b)))
    return CnfFormula(clauses, num_declared_vars=nvars)
