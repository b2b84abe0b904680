"""``cnfcompact`` command line: reduce, mine, verify, stats.

Exit codes: 0 success, 1 usage error, 2 parse or I/O error,
3 verification failure, 4 oracle variable limit exceeded.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
import time

from .cnf import DimacsError, item_to_lit, parse_dimacs, read_cnf, sorted_lits, write_dimacs
from .mining import canonical, closed_itemsets, maximal_itemsets, parse_transactions
from .oracle import DEFAULT_VAR_LIMIT, OracleLimitError, check_equisat, random_binary_cnf, random_cnf
from .pipeline import MODES, RunConfig, compact
from .reduce import ReductionMap, cnf_to_db
from . import report

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_VERIFY, EXIT_LIMIT = 0, 1, 2, 3, 4

log = logging.getLogger("cnfcompact")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write(path, data: bytes | str) -> None:
    if isinstance(data, str):
        data = data.encode()
    if path in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _read(path) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def cmd_reduce(args) -> int:
    cfg = RunConfig(args.mode, args.min_support, args.min_size, args.passes, args.parts,
                    validate=args.validate, overlap_salvage=args.overlap_salvage)
    f = parse_dimacs(_read(args.input))
    t0 = time.perf_counter()
    g, rmap, st = compact(f, cfg)
    wall = time.perf_counter() - t0

    _write(args.output, write_dimacs(g))
    if args.map:
        _write(args.map, rmap.to_json())
    if args.stats_json:
        _write(args.stats_json, report.stats_json(st, mode=cfg.mode, min_support=cfg.min_support,
                                                  min_size=cfg.min_size, passes=cfg.passes, parts=cfg.parts))
    if args.plot:
        report.plot_profiles({"original": f, "reduced": g}, args.plot)
    # keep stdout clean when it carries the formula
    out = sys.stderr if args.output in (None, "-") else sys.stdout
    out.write(report.stats_text(st, wall))
    return EXIT_OK


def cmd_mine(args) -> int:
    data = _read(args.input).decode("utf-8", errors="replace")
    fmt = args.format
    if fmt == "auto":
        fmt = "dimacs" if any(l.startswith("p cnf") for l in data.splitlines()) else "transactions"
    if fmt == "dimacs":
        db = cnf_to_db(parse_dimacs(data))

        def show(items):
            return " ".join(map(str, sorted_lits(item_to_lit(i) for i in items)))
    else:
        db = parse_transactions(data)

        def show(items):
            return " ".join(map(str, sorted(items)))

    miner = maximal_itemsets if args.maximal else closed_itemsets
    found = canonical(miner(db, args.min_support, args.min_size))
    lines = ["support\titems"] + [f"{m.support}\t{show(m.items)}" for m in found]
    _write(args.output, "\n".join(lines) + "\n")
    return EXIT_OK


def _fuzz(args) -> int:
    rng = random.Random(args.seed)
    modes = [args.mode] if args.mode else list(MODES)
    passed = failed = 0
    for i in range(args.fuzz):
        mode = modes[i % len(modes)]
        if mode == "binary" and rng.random() < 0.5:
            f = random_binary_cnf(rng, args.max_vars, args.max_clauses)
        else:
            f = random_cnf(rng, args.max_vars, args.max_clauses)
        parts = rng.choice([1, 2, 4]) if args.parts is None else args.parts
        g, rmap, _ = compact(f, RunConfig(mode, parts=parts))
        rep = check_equisat(f, g, rmap, var_limit=args.var_limit)
        if rep.ok:
            passed += 1
        else:
            failed += 1
            print(f"case {i} (mode={mode}, parts={parts}):\n{rep.summary()}")
            print(write_dimacs(f).decode(), end="")
    print(f"fuzz: {passed}/{args.fuzz} passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


def cmd_verify(args) -> int:
    if args.fuzz:
        if args.var_limit == DEFAULT_VAR_LIMIT:
            args.var_limit = args.max_vars + 64
        return _fuzz(args)
    if not (args.original and args.reduced and args.map):
        raise _UsageError("verify needs ORIGINAL REDUCED --map MAP, or --fuzz N")
    f = read_cnf(args.original)
    g = read_cnf(args.reduced)
    rmap = ReductionMap.from_json(_read(args.map).decode())
    try:
        rep = check_equisat(f, g, rmap, var_limit=args.var_limit)
    except ValueError as e:
        print(f"FAIL: {e}")
        return EXIT_VERIFY
    print(rep.summary())
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_stats(args) -> int:
    named = {"original": read_cnf(args.input)}
    if args.reduced:
        named["reduced"] = read_cnf(args.reduced)
    _write(args.output, report.profile_table(named, delimiter="," if args.csv else "\t"))
    if args.plot:
        report.plot_profiles(named, args.plot)
    return EXIT_OK


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cnfcompact", description="Compact CNF formulas by substituting frequent literal sets.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("reduce", help="rewrite a DIMACS file into a smaller equi-satisfiable one")
    r.add_argument("input")
    r.add_argument("-o", "--output", default=None, help="reduced DIMACS (default: stdout)")
    r.add_argument("--map", help="write the fresh-variable map as JSON")
    r.add_argument("--stats-json", help="write stats as JSON")
    r.add_argument("--plot", help="write a clause-length figure (png/pdf/svg)")
    r.add_argument("--mode", choices=MODES, default="general")
    r.add_argument("--min-support", type=int, default=2)
    r.add_argument("--min-size", type=int, default=2)
    r.add_argument("--passes", type=int, default=2)
    r.add_argument("--parts", type=int, default=1)
    r.add_argument("--validate", action="store_true", help="re-check every cover against the formula (slow)")
    r.add_argument("--overlap-salvage", action="store_true",
                   help="keep the non-overlapping part of a dropped candidate when it can still pay off")
    r.set_defaults(func=cmd_reduce)

    m = sub.add_parser("mine", help="print closed (or maximal) frequent itemsets")
    m.add_argument("input")
    m.add_argument("-o", "--output", default=None)
    m.add_argument("--format", choices=("auto", "dimacs", "transactions"), default="auto")
    m.add_argument("--min-support", type=int, default=2)
    m.add_argument("--min-size", type=int, default=1)
    m.add_argument("--maximal", action="store_true")
    m.set_defaults(func=cmd_mine)

    v = sub.add_parser("verify", help="check a reduction with the built-in SAT oracle")
    v.add_argument("original", nargs="?")
    v.add_argument("reduced", nargs="?")
    v.add_argument("--map")
    v.add_argument("--var-limit", type=int, default=DEFAULT_VAR_LIMIT)
    v.add_argument("--fuzz", type=int, default=0, metavar="N")
    v.add_argument("--max-vars", type=int, default=14)
    v.add_argument("--max-clauses", type=int, default=60)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--mode", choices=MODES, default=None, help="fuzz one mode only")
    v.add_argument("--parts", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("stats", help="tabulate formula size metrics, optionally with a figure")
    s.add_argument("input")
    s.add_argument("reduced", nargs="?")
    s.add_argument("-o", "--output", default=None)
    s.add_argument("--csv", action="store_true", help="comma- instead of tab-separated")
    s.add_argument("--plot")
    s.set_defaults(func=cmd_stats)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (_UsageError, ValueError) as e:
        if isinstance(e, DimacsError):
            print(f"cnfcompact: parse error: {e}", file=sys.stderr)
            return EXIT_IO
        print(f"cnfcompact: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OracleLimitError as e:
        print(f"cnfcompact: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except OSError as e:
        print(f"cnfcompact: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
