"""Command-line entry point: ``satfim {mine,gen,export,bench,verify}``.

Exit codes: 0 on success (or equal verification), 1 when verification finds
a difference, 2 for usage errors and invalid flag combinations.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import dataset as ds
from . import enumeration as en
from .bench import run_cell, to_csv
from .encoder import ExportError, EncodeOptions, encode, export
from .oracle import maximal, verify
from .pbsat import SolverConfig
from .search import STRATEGIES, mine

BLOCKINGS = {
    "simple": en.SIMPLE,
    "subsets": en.SUBSETS_EXPLICIT,
    "subsets-compact": en.SUBSETS_COMPACT,
    "supersets": en.SUPERSETS_EXPLICIT,
    "supersets-compact": en.SUPERSETS_COMPACT,
}


class UsageError(Exception):
    pass


def _theta(text: str):
    """Integers are absolute thresholds; anything with a point is relative."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _polarity(text: str) -> bool:
    if text not in ("pos", "neg"):
        raise argparse.ArgumentTypeError("expected pos or neg")
    return text == "pos"


def _add_encoding_flags(p):
    p.add_argument("--encoding", choices=("baseline", "reduced"), default="baseline")
    p.add_argument("--positive-only", action="store_true",
                   help="rewrite negated literals as 1 - x")
    p.add_argument("--removal", choices=("none", "incremental", "fixed"), default=None,
                   help="auxiliary variables emulating clause removal")


def _add_search_flags(p):
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--format", choices=("transactions", "matrix"), default="transactions")
    p.add_argument("--theta", required=True, type=_theta,
                   help="absolute count, or a fraction of the transactions")
    p.add_argument("--strategy", choices=STRATEGIES, default="cmg")
    p.add_argument("--blocking", choices=tuple(BLOCKINGS), default=None)
    _add_encoding_flags(p)
    p.add_argument("--polarity-items", type=_polarity, default=None, metavar="{pos,neg}")
    p.add_argument("--polarity-trans", type=_polarity, default=None, metavar="{pos,neg}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timeout", type=float, default=None, help="seconds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="satfim",
                                     description="Frequent itemset mining with a PB/SAT solver.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="mine frequent or maximal itemsets")
    _add_search_flags(p)
    p.add_argument("--maximal-only", action="store_true",
                   help="write only the maximal itemsets")
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("gen", help="generate a synthetic database")
    p.add_argument("--items", type=int, required=True)
    p.add_argument("--trans", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--gamma", type=float, default=0.1)
    p.add_argument("--planted", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("export", help="write the encoding as DIMACS CNF or OPB")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--input-format", choices=("transactions", "matrix"), default="transactions")
    p.add_argument("--theta", required=True, type=_theta)
    _add_encoding_flags(p)
    p.add_argument("--format", choices=("cnf", "opb"), required=True)
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("bench", help="sweep thresholds and strategies, emit CSV")
    p.add_argument("--input", type=Path, action="append", default=[],
                   help="dataset file (repeatable)")
    p.add_argument("--format", choices=("transactions", "matrix"), default="transactions")
    p.add_argument("--gen", action="append", default=[], metavar="SPEC",
                   help="generator spec such as items=12,trans=30,density=0.3,seed=1")
    p.add_argument("--thetas", required=True,
                   help="comma-separated thresholds, absolute or relative")
    p.add_argument("--strategies", default="simple,lsm,cmg,ld")
    p.add_argument("--blocking", choices=tuple(BLOCKINGS), default=None)
    _add_encoding_flags(p)
    p.add_argument("--timeout", type=float, default=None, help="seconds per cell")
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("verify", help="compare a mining run against Apriori")
    _add_search_flags(p)
    return parser


def _options(args, strategy) -> EncodeOptions:
    growing = strategy in ("cmg", "ld")
    removal = args.removal
    if removal is None:
        removal = "incremental" if growing else "none"
    if growing and removal == "none":
        raise UsageError(f"--strategy {strategy} needs --removal incremental or fixed")
    if strategy == "dual" and removal == "fixed":
        raise UsageError("--strategy dual cannot use --removal fixed")
    return EncodeOptions(reduced=args.encoding == "reduced", positive_only=args.positive_only,
                         removal_mode=removal, dual=strategy == "dual",
                         length_aux=strategy == "ld")


def _run(args, db):
    kwargs = {}
    if args.polarity_items is not None:
        kwargs["item_polarity"] = args.polarity_items
    if args.polarity_trans is not None:
        kwargs["trans_polarity"] = args.polarity_trans
    if args.timeout:
        kwargs["deadline"] = time.monotonic() + args.timeout
    blocking = BLOCKINGS[args.blocking] if args.blocking else None
    return mine(db, args.theta, args.strategy, blocking, _options(args, args.strategy),
                SolverConfig(seed=args.seed), **kwargs)


def _sort_key(s):
    return (len(s), sorted(s))


def format_results(db, entries: dict) -> str:
    """One line per itemset: labels in alphabet order, then ``#SUP: k``."""
    lines = []
    for s in sorted(entries, key=_sort_key):
        lines.append(f"{' '.join(db.labels(s))} #SUP: {entries[s]}")
    return "\n".join(lines) + ("\n" if lines else "")


def cmd_mine(args) -> int:
    db = ds.load(args.input, args.format)
    outcome = _run(args, db)
    coll = outcome.collection(db)
    tops = maximal(coll)
    if args.out is not None:
        chosen = {s: coll[s] for s in tops} if args.maximal_only else coll
        args.out.write_text(format_results(db, chosen))
    status = "" if outcome.status == "ok" else f" status={outcome.status}"
    print(f"frequent={len(coll)} maximal={len(tops)} iterations={outcome.iterations} "
          f"time={outcome.stats.seconds:.3f}{status}")
    return 0


def cmd_gen(args) -> int:
    params = ds.GeneratorParams(n=args.items, m=args.trans, density=args.density,
                                gamma=args.gamma, planted=args.planted, seed=args.seed)
    db = ds.generate(params)
    ds.save(db, args.out, "transactions")
    print(f"density={ds.density(db):.4f}")
    return 0


def cmd_export(args) -> int:
    db = ds.load(args.input, args.input_format)
    opts = EncodeOptions(reduced=args.encoding == "reduced", positive_only=args.positive_only,
                         removal_mode=args.removal or "none")
    text = export(encode(db, args.theta, opts), args.format)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)
    return 0


def _parse_gen_spec(spec: str) -> ds.GeneratorParams:
    names = {"items": "n", "trans": "m", "density": "density", "gamma": "gamma",
             "planted": "planted", "seed": "seed"}
    values = {}
    for part in filter(None, spec.split(",")):
        key, sep, raw = part.partition("=")
        if not sep or key.strip() not in names:
            raise UsageError(f"bad generator spec field {part!r}; keys are {sorted(names)}")
        field = names[key.strip()]
        values[field] = float(raw) if field in ("density", "gamma") else int(raw)
    for required in ("n", "m", "density"):
        if required not in values:
            raise UsageError(f"generator spec {spec!r} lacks {required}")
    return ds.GeneratorParams(**values)


def cmd_bench(args) -> int:
    datasets = [(str(p), ds.load(p, args.format)) for p in args.input]
    for spec in args.gen:
        datasets.append((spec, ds.generate(_parse_gen_spec(spec))))
    if not datasets:
        raise UsageError("bench needs at least one --input or --gen")
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    for s in strategies:
        if s not in STRATEGIES:
            raise UsageError(f"unknown strategy {s!r}")
    thetas = [_theta(t.strip()) for t in args.thetas.split(",") if t.strip()]
    blocking = BLOCKINGS[args.blocking] if args.blocking else None
    options = {s: _options(args, s) for s in strategies}
    records = [run_cell(db, name, theta, s, blocking, options[s], args.timeout)
               for name, db in datasets for theta in thetas for s in strategies]
    text = to_csv(records)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)
    timeouts = sum(r.status == "timeout" for r in records)
    print(f"cells={len(records)} timeouts={timeouts}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    db = ds.load(args.input, args.format)
    outcome = _run(args, db)
    theta = ds.resolve_theta(args.theta, db.m)
    report = verify(outcome, db, theta)
    print(report.format(list(db.items)))
    return 0 if report.equal else 1


COMMANDS = {"mine": cmd_mine, "gen": cmd_gen, "export": cmd_export,
            "bench": cmd_bench, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ExportError, ValueError, KeyError, OSError) as exc:
        print(f"satfim {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
