"""Mode dispatch shared by the CLI and the fuzz harness."""

from __future__ import annotations

from dataclasses import dataclass

from .binary import reduce_binary
from .cnf import CnfFormula
from .reduce import ReductionMap, ReductionStats, reduce_formula, reduce_partitioned

MODES = ("general", "binary", "both")


@dataclass
class RunConfig:
    mode: str = "general"
    min_support: int = 2
    min_size: int = 2
    passes: int = 2
    parts: int = 1
    seed: int = 0
    validate: bool = False
    overlap_salvage: bool = False

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.min_support < 2 or self.min_size < 2 or self.passes < 1 or self.parts < 1:
            raise ValueError("need min_support >= 2, min_size >= 2, passes >= 1, parts >= 1")


def _single(f: CnfFormula, cfg: RunConfig) -> tuple[CnfFormula, ReductionMap, ReductionStats]:
    if cfg.mode == "binary":
        return reduce_binary(f, cfg.min_support, validate=cfg.validate)
    g, m, st = reduce_formula(f, cfg.min_support, cfg.min_size, cfg.passes, validate=cfg.validate,
                             salvage=cfg.overlap_salvage)
    if cfg.mode == "general":
        return g, m, st
    h, m2, st2 = reduce_binary(g, cfg.min_support, validate=cfg.validate)
    m.extend(m2)
    out = ReductionStats.measure(f, h, duplicate_clauses_merged=st.duplicate_clauses_merged
                                 + st2.duplicate_clauses_merged,
                                 itemsets_applied=st.itemsets_applied + st2.itemsets_applied,
                                 passes_run=st.passes_run)
    return h, m, out


def compact(f: CnfFormula, cfg: RunConfig | None = None) -> tuple[CnfFormula, ReductionMap, ReductionStats]:
    cfg = cfg or RunConfig()
    if cfg.parts == 1:
        return _single(f, cfg)
    return reduce_partitioned(f, cfg.parts, reducer=lambda g: _single(g, cfg))
