"""Command-line front end.

Exit status: 0 when an answer was produced, 1 when a search was exhausted,
2 on usage errors (bad flags or unparseable input).  Data goes to stdout,
diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .canon import (
    Coloring,
    Front,
    canonize,
    count_canonical,
    decide_mixing,
)
from .errors import EncodingError, FinkError
from .finvec import BlockSequence, KVector, SpanTerm, block_sum, span_enumerate, tetris, unit_blocks
from .pigeonhole import SearchBudget, outcome_to_dict, search_homogeneous
from .results import Exhausted
from .staircase import (
    enumerate_stair_functions,
    make_sos,
    raw_stair_functions,
    sos_violation,
    strong_decomposition,
)

EXIT_OK, EXIT_EXHAUSTED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("FINKIT_THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="finkit", description="FIN_k spans, staircases, fronts and searches")
    ap.add_argument("--format", choices=("json", "csv", "table"), default="json")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, k_default=None):
        p.add_argument("--k", type=int, required=k_default is None, default=k_default)
        p.add_argument("--format", choices=("json", "csv", "table"), default=argparse.SUPPRESS)

    p = sub.add_parser("span", help="enumerate the span of a block sequence")
    common(p)
    p.add_argument("--blocks", required=True, help="vectors k:{pos:val,...}, space separated or JSON")

    p = sub.add_parser("sos", help="check the system-of-staircases conditions")
    common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--vector")
    g.add_argument("--blocks")
    g.add_argument("--make", type=int, metavar="COUNT", help="check make_sos(k, COUNT)")
    p.add_argument("--strong", action="store_true")

    p = sub.add_parser("stairs", help="enumerate staircase functions")
    common(p)
    p.add_argument("--raw", action="store_true", help="list parameter tuples instead of relations")

    p = sub.add_parser("count", help="t_k, t'_k, t~_k and C_{k,d}")
    common(p)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--compare", action="store_true", help="also count enumerated canonical maps")

    def coloring_flags(p, rank_default):
        p.add_argument("--rule", default=None)
        p.add_argument("--coloring", default=None, help="coloring JSON (inline or @file)")
        p.add_argument("--rank", type=int, default=rank_default, help="front AX_n with this n")
        p.add_argument("--blocks", default=None, help="base sequence (default depends on command)")
        p.add_argument("--universe", type=int, default=8, help="blocks in the default base")

    p = sub.add_parser("homog", help="search for a homogeneous block subsequence")
    common(p)
    coloring_flags(p, 1)
    p.add_argument("--target-len", type=int, default=3)
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--threads", type=int, default=_default_threads())

    p = sub.add_parser("mixing", help="decide mixing of a pair of approximations")
    common(p)
    coloring_flags(p, 2)
    p.add_argument("--pair", required=True, help='e.g. "x0 | x0+x2"; blocks separated by ","')
    p.add_argument("--horizon-blocks", type=int, default=None)

    p = sub.add_parser("canonize", help="search for a reduct where the coloring is canonical")
    common(p)
    coloring_flags(p, 1)
    p.add_argument("--target-len", type=int, default=3)
    p.add_argument("--mode", choices=("theorem1", "theorem2"), default="theorem2")
    p.add_argument("--budget-nodes", type=int, default=None)
    return ap


# -- input helpers ----------------------------------------------------------------


def _read_json_arg(text: str):
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    return json.loads(text)


def _base(args, default: str) -> BlockSequence:
    if args.blocks:
        return BlockSequence.parse(args.blocks, args.k)
    if args.universe < 0:
        raise UsageError("--universe must be >= 0")
    if default == "sos":
        return make_sos(args.k, args.universe)
    return unit_blocks(args.k, args.universe)


def _coloring(args, front: Front) -> Coloring:
    if (args.rule is None) == (args.coloring is None):
        raise UsageError("give exactly one of --rule and --coloring")
    if args.rule is not None:
        return Coloring(front, rule=args.rule)
    return Coloring.from_dict(_read_json_arg(args.coloring), front)


def _parse_block(text: str, X: BlockSequence) -> KVector:
    text = text.strip()
    if ":{" in text:
        return KVector.parse(text)
    term = SpanTerm.parse(text)
    for i, _ in term.parts:
        if i >= len(X):
            raise EncodingError(f"x{i} is outside the {len(X)}-block base")
    return block_sum([tetris(X[i], s) for i, s in term.parts])


def _parse_side(text: str, X: BlockSequence) -> BlockSequence:
    text = text.strip()
    if not text:
        return BlockSequence(X.level, ())
    return BlockSequence(X.level, tuple(_parse_block(b, X) for b in text.split(",")))


# -- commands ---------------------------------------------------------------------


def cmd_span(args):
    X = BlockSequence.parse(args.blocks, args.k)
    rows = [
        {"index": i, "vector": w.encode(), "term": str(term)}
        for i, (w, term) in enumerate(span_enumerate(X))
    ]
    return EXIT_OK, {"k": args.k, "blocks": X.encode(), "size": len(rows), "rows": rows}


def cmd_sos(args):
    if args.vector:
        x = KVector.parse(args.vector)
        items = [x]
    else:
        if args.make is not None:
            X = make_sos(args.k, args.make, strong=args.strong)
        else:
            X = BlockSequence.parse(args.blocks, args.k)
        items = list(X.blocks)
    rows = []
    for i, x in enumerate(items):
        clause = sos_violation(x)
        strong = None
        if args.strong:
            strong = strong_decomposition(x) is not None
        rows.append({"index": i, "vector": x.encode(), "sos": clause is None, "violated": clause, "strong": strong})
    ok = all(r["sos"] and (r["strong"] is not False) for r in rows)
    return EXIT_OK, {"k": args.k, "all_sos": ok, "rows": rows}


def cmd_stairs(args):
    funcs = raw_stair_functions(args.k) if args.raw else enumerate_stair_functions(args.k)
    rows = [{"index": i, "function": str(f), "params": f.to_dict()} for i, f in enumerate(funcs)]
    doc = {
        "k": args.k,
        "raw_count": len(raw_stair_functions(args.k)),
        "deduped_count": len(enumerate_stair_functions(args.k)),
        "listing": "raw" if args.raw else "deduped",
        "rows": rows,
    }
    return EXIT_OK, doc


def cmd_count(args):
    if args.d < 2:
        raise UsageError("--d must be >= 2")
    row = count_canonical(args.k, args.d, compare=args.compare)
    d = row.to_dict()
    return EXIT_OK, {"rows": [d]}


def cmd_homog(args):
    X = _base(args, "unit")
    front = Front.uniform(X, args.rank)
    c = _coloring(args, front)
    budget = SearchBudget(len(X), args.target_len, args.budget_nodes)
    out = search_homogeneous(c, X, args.rank, budget, threads=args.threads)
    doc = outcome_to_dict(out, X, args.rank, budget)
    return (EXIT_OK if out.sequence is not None else EXIT_EXHAUSTED), doc


def cmd_mixing(args):
    X = _base(args, "unit")
    front = Front.uniform(X, args.rank)
    c = _coloring(args, front)
    sides = args.pair.split("|")
    if len(sides) != 2:
        raise UsageError('--pair needs exactly one "|"')
    s, t = (_parse_side(side, X) for side in sides)
    report = decide_mixing(X, s, t, c, args.horizon_blocks)
    return EXIT_OK, {"k": X.level, "report": report.to_dict()}


def cmd_canonize(args):
    X = _base(args, "sos")
    front = Front.uniform(X, args.rank)
    c = _coloring(args, front)
    res = canonize(c, X, args.target_len, args.mode, node_limit=args.budget_nodes)
    if isinstance(res, Exhausted):
        return EXIT_EXHAUSTED, res.to_dict()
    doc = res.to_dict()
    doc["k"] = X.level
    doc["display"] = {d: str(m) for d, m in sorted(res.maps.items())}
    return EXIT_OK, doc


COMMANDS = {
    "span": cmd_span,
    "sos": cmd_sos,
    "stairs": cmd_stairs,
    "count": cmd_count,
    "homog": cmd_homog,
    "mixing": cmd_mixing,
    "canonize": cmd_canonize,
}


# -- output ------------------------------------------------------------------------


def _flatten(doc: dict, prefix="") -> list:
    out = []
    for key in sorted(doc):
        val = doc[key]
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            out += _flatten(val, name + ".")
        else:
            out.append({"field": name, "value": json.dumps(val) if isinstance(val, list) else val})
    return out


def _rows(doc: dict) -> list:
    if "rows" in doc:
        return [
            {k: (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v) for k, v in r.items()}
            for r in doc["rows"]
        ]
    return _flatten(doc)


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, ensure_ascii=False)
    rows = _rows(doc)
    cols = list(rows[0]) if rows else []
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    cells = [[str("" if r[c] is None else r[c]) for c in cols] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(line.rstrip() for line in lines)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
        status, doc = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"finkit: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FinkError, json.JSONDecodeError, OSError) as exc:
        print(f"finkit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(render(doc, args.format))
    return status


if __name__ == "__main__":
    raise SystemExit(main())
