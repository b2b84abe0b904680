"""Stats rendering: text block, versioned JSON, TSV rows and a figure."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter

from .cnf import CnfFormula, literal_count, write_dimacs
from .reduce import ReductionStats

STATS_SCHEMA = 1


def stats_text(st: ReductionStats, wall_time: float | None = None) -> str:
    rows = [
        ("literals", st.literals_before, st.literals_after),
        ("clauses", st.clauses_before, st.clauses_after),
        ("variables", st.vars_before, st.vars_after),
        ("bytes", st.bytes_before, st.bytes_after),
    ]
    lines = [f"{'':<10} {'before':>12} {'after':>12}"]
    lines += [f"{name:<10} {a:>12} {b:>12}" for name, a, b in rows]
    lines.append(f"removed literals: {st.percent_removed:.2f}%")
    lines.append(f"itemsets applied: {st.itemsets_applied}  duplicate clauses merged: {st.duplicate_clauses_merged}")
    if wall_time is not None:
        lines.append(f"wall time: {wall_time:.3f}s")
    return "\n".join(lines) + "\n"


def stats_json(st: ReductionStats, **extra) -> str:
    doc = {"schema": STATS_SCHEMA, **extra, **st.as_dict()}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def formula_profile(f: CnfFormula) -> dict:
    lengths = Counter(len(c) for c in f.clauses)
    return {
        "clauses": len(f.clauses),
        "literals": literal_count(f),
        "variables": f.num_vars,
        "bytes": len(write_dimacs(f)),
        "lengths": dict(sorted(lengths.items())),
    }


def profile_table(named: dict[str, CnfFormula], delimiter: str = "\t") -> str:
    """One row per (formula, clause length) plus summary rows, delimiter-separated."""
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    w.writerow(["formula", "metric", "key", "value"])
    for name, f in named.items():
        prof = formula_profile(f)
        for metric in ("clauses", "literals", "variables", "bytes"):
            w.writerow([name, metric, "", prof[metric]])
        for length, n in prof["lengths"].items():
            w.writerow([name, "clause_length", length, n])
    return buf.getvalue()


def plot_profiles(named: dict[str, CnfFormula], path) -> None:
    """Clause-length histogram and literal totals for each formula, saved to ``path``."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    profiles = {name: formula_profile(f) for name, f in named.items()}
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    lengths = sorted({l for p in profiles.values() for l in p["lengths"]})
    width = 0.8 / max(len(profiles), 1)
    for j, (name, p) in enumerate(profiles.items()):
        xs = [l + (j - (len(profiles) - 1) / 2) * width for l in lengths]
        ax1.bar(xs, [p["lengths"].get(l, 0) for l in lengths], width=width, label=name)
    ax1.set_xlabel("clause length")
    ax1.set_ylabel("clauses")
    ax1.set_xticks(lengths)
    ax1.legend(frameon=False)

    names = list(profiles)
    ax2.bar(names, [profiles[n]["literals"] for n in names], color="0.5")
    ax2.set_ylabel("literals")
    for spine in ("top", "right"):
        ax1.spines[spine].set_visible(False)
        ax2.spines[spine].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None} if str(path).endswith(".png") else None)
    plt.close(fig)
