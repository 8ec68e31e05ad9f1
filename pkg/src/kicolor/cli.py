"""Command-line front end.

Every run produces one report.  ``--format structured`` prints it as JSON
with sorted keys; the default text form prints ``key: value`` lines.  Exit
status says whether the answer was computed (0), the input or arguments were
rejected (2), or a work budget ran out (3).  A "no" answer still exits 0.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import fvs as fvs_mod
from .errors import KiColorError, ResourceExceeded
from .gadget import (
    assignment_to_coloring, build_gadget, coloring_to_assignment, is_satisfiable,
    parse_dimacs_cnf, satisfying_assignments, write_roles,
)
from .graph import parse_dimacs_graph, write_dimacs_graph
from .kk1 import chi_k_kminus1
from .kneser import build_kneser
from .oracle import brute_chromatic, brute_count, brute_decide, max_independent_set_size
from .solver import (
    Params, chromatic_number_ki, count_colorings, decide, find_coloring, is_proper,
    parse_coloring, write_coloring,
)

EXIT_OK, EXIT_USAGE, EXIT_BUDGET = 0, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


class _Inputs:
    """Reads input files and keeps a running digest of their bytes."""

    def __init__(self):
        self._hash = hashlib.sha256()

    def read(self, path, tag):
        data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
        self._hash.update(f"{tag}:{len(data)}:".encode())
        self._hash.update(data)
        return data

    def digest(self):
        return self._hash.hexdigest()


def _graph(args, inputs):
    return parse_dimacs_graph(inputs.read(args.graph, "graph"))


def _fvs(args, g, inputs):
    if getattr(args, "fvs_file", None):
        return fvs_mod.user_fvs(g, fvs_mod.parse_fvs(inputs.read(args.fvs_file, "fvs"), g.n))
    return fvs_mod.find_fvs(g)


def _fvs_report(res):
    return {"vertices": [v + 1 for v in res.sorted()], "method": res.method,
            "certified_minimum": res.certified_minimum}


def _write(path, text):
    Path(path).write_text(text)
    return str(path)


# -- subcommands -----------------------------------------------------------------
# each returns (parameters, fvs-or-None, answer)

def _cmd_decide(args, inputs):
    g = _graph(args, inputs)
    res = _fvs(args, g, inputs)
    p = Params(args.q, args.k, args.i)
    return _qki(p), res, decide(g, p, res, threads=args.threads)


def _cmd_count(args, inputs):
    g = _graph(args, inputs)
    res = _fvs(args, g, inputs)
    p = Params(args.q, args.k, args.i)
    # decimal string: counts outgrow JSON number precision
    return _qki(p), res, str(count_colorings(g, p, res, threads=args.threads))


def _cmd_chromatic(args, inputs):
    g = _graph(args, inputs)
    res = _fvs(args, g, inputs)
    q = chromatic_number_ki(g, args.k, args.i, res, threads=args.threads)
    return {"k": args.k, "i": args.i}, res, q


def _cmd_extract(args, inputs):
    g = _graph(args, inputs)
    res = _fvs(args, g, inputs)
    p = Params(args.q, args.k, args.i)
    f = find_coloring(g, p, res)
    answer = {"colorable": f is not None}
    if f is not None:
        assert is_proper(g, f, p)
        text = write_coloring(f)
        if args.out:
            answer["coloring_file"] = _write(args.out, text)
        else:
            answer["coloring"] = text.splitlines()
    return _qki(p), res, answer


def _cmd_oracle(args, inputs):
    g = _graph(args, inputs)
    if args.mode == "mis":
        return {}, None, max_independent_set_size(g, args.budget)
    if args.mode == "chromatic":
        return {"k": args.k, "i": args.i}, None, brute_chromatic(g, args.k, args.i, args.budget)
    p = Params(args.q, args.k, args.i)
    if args.mode == "count":
        return _qki(p), None, str(brute_count(g, p, args.budget))
    return _qki(p), None, brute_decide(g, p, args.budget)


def _cmd_fvs(args, inputs):
    g = _graph(args, inputs)
    if args.fvs_file:
        res = _fvs(args, g, inputs)
    elif args.method == "exact":
        res = fvs_mod.find_fvs_exact(g, g.n, node_limit=args.node_limit)
    elif args.method == "greedy":
        res = fvs_mod.find_fvs_greedy(g)
    else:
        res = fvs_mod.find_fvs(g, node_limit=args.node_limit)
    answer = {"size": len(res)}
    if args.out:
        answer["fvs_file"] = _write(args.out, fvs_mod.write_fvs(res.vertices))
    return {"method": args.method}, res, answer


def _cmd_kneser(args, inputs):
    kg = build_kneser(args.r, args.k)
    answer = {"vertices": kg.graph.n, "edges": kg.graph.edge_count}
    if args.out:
        base = Path(args.out)
        labels = "".join(f"v {v + 1} {c}\n" for v, c in enumerate(kg.labels))
        answer["graph_file"] = _write(base.with_suffix(".col"),
                                      write_dimacs_graph(kg.graph, [f"Kneser graph K({args.r},{args.k})"]))
        answer["labels_file"] = _write(base.with_suffix(".labels"), labels)
    return {"r": args.r, "k": args.k}, None, answer


def _cmd_kk1(args, inputs):
    g = _graph(args, inputs)
    r = chi_k_kminus1(g, args.k)
    return {"k": args.k, "i": args.k - 1}, None, {
        "chi": r.chi, "q_kk1": r.q_kk1, "witnesses": r.witnesses()}


def _cmd_gadget(args, inputs):
    formula = parse_dimacs_cnf(inputs.read(args.cnf, "cnf"))
    gd = build_gadget(formula, args.k, args.i)
    answer = {"q": gd.q, "vertices": gd.graph.n, "edges": gd.graph.edge_count,
              "satisfiable": is_satisfiable(formula)}
    if args.out:
        base = Path(args.out)
        answer["graph_file"] = _write(base.with_suffix(".col"), write_dimacs_graph(gd.graph))
        answer["roles_file"] = _write(base.with_suffix(".roles"), write_roles(gd))
    res = None
    if args.solve:
        res = _fvs(args, gd.graph, inputs)
        answer["colorable"] = decide(gd.graph, gd.params, res, threads=args.threads)
        first = next(satisfying_assignments(formula), None)
        if first is not None:
            back = coloring_to_assignment(gd, assignment_to_coloring(gd, first))
            answer["decoded_assignment"] = [p if back[p] else -p for p in sorted(back)]
    return {"q": gd.q, "k": args.k, "i": args.i}, res, answer


def _cmd_verify(args, inputs):
    g = _graph(args, inputs)
    p = Params(args.q, args.k, args.i)
    f = parse_coloring(inputs.read(args.coloring, "coloring"), g.n, p.q)
    complete = set(f) == set(range(g.n))
    return _qki(p), None, {"complete": complete, "proper": is_proper(g, f, p)}


def _qki(p):
    return {"q": p.q, "k": p.k, "i": p.i}


# -- parser ----------------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="kicolor", description="(k,i)-coloring solver suite")
    parser.add_argument("--format", choices=("text", "structured"), default="text")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text, graph=True, qki=False, ki=False, fvs=False):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(fn=fn)
        sp.add_argument("--format", choices=("text", "structured"), default=argparse.SUPPRESS)
        if graph:
            sp.add_argument("--graph", required=True, help="DIMACS .col file ('-' for stdin)")
        if qki:
            sp.add_argument("--q", type=int, required=True)
        if qki or ki:
            sp.add_argument("--k", type=int, required=True)
            sp.add_argument("--i", type=int, required=True)
        if fvs:
            sp.add_argument("--fvs-file", help="replay this feedback vertex set")
            sp.add_argument("--threads", type=int, default=1)
        return sp

    add("decide", _cmd_decide, "is the graph (q,k,i)-colorable", qki=True, fvs=True)
    add("count", _cmd_count, "number of proper (q,k,i)-colorings", qki=True, fvs=True)
    add("chromatic", _cmd_chromatic, "(k,i)-chromatic number", ki=True, fvs=True)
    sp = add("extract", _cmd_extract, "find one proper (q,k,i)-coloring", qki=True, fvs=True)
    sp.add_argument("--out", help="write the coloring here")

    sp = add("oracle", _cmd_oracle, "brute-force cross-check")
    sp.add_argument("--mode", choices=("decide", "count", "chromatic", "mis"), default="decide")
    sp.add_argument("--q", type=int)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--i", type=int, default=0)
    sp.add_argument("--budget", type=int, default=None, help="node-expansion cap")

    sp = add("fvs", _cmd_fvs, "compute a feedback vertex set")
    sp.add_argument("--method", choices=("auto", "exact", "greedy"), default="auto")
    sp.add_argument("--node-limit", type=int, default=200_000)
    sp.add_argument("--fvs-file", help="verify this set instead of searching")
    sp.add_argument("--out", help="write the set here, one vertex per line")

    sp = add("kneser", _cmd_kneser, "build a Kneser graph", graph=False)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--out", help="path prefix for the .col and .labels files")

    sp = add("kk1", _cmd_kk1, "(k,k-1)-chromatic number through classic coloring")
    sp.add_argument("--k", type=int, required=True)

    sp = add("gadget", _cmd_gadget, "build the 3-CNF reduction graph", graph=False, ki=True)
    sp.add_argument("--cnf", required=True, help="DIMACS cnf file")
    sp.add_argument("--out", help="path prefix for the .col and .roles files")
    sp.add_argument("--solve", action="store_true", help="also decide colorability")
    sp.add_argument("--fvs-file")
    sp.add_argument("--threads", type=int, default=1)

    sp = add("verify", _cmd_verify, "check a coloring file", qki=True)
    sp.add_argument("--coloring", required=True)
    return parser


def _render_text(report):
    lines = []
    for key in ("subcommand", "input_digest", "parameters", "fvs", "answer", "wall_time"):
        val = report[key]
        if isinstance(val, (dict, list)):
            val = json.dumps(val, sort_keys=True)
        lines.append(f"{key}: {val}")
    return "\n".join(lines) + "\n"


def render(report, fmt):
    if fmt == "structured":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    return _render_text(report)


def _execute(argv):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        return EXIT_USAGE, {"error": str(exc)}, "text"
    if getattr(args, "threads", 1) < 1:
        return EXIT_USAGE, {"error": "--threads must be at least 1"}, args.format
    if args.command == "oracle" and args.mode in ("decide", "count") and args.q is None:
        return EXIT_USAGE, {"error": "oracle --mode decide/count needs --q"}, args.format
    inputs = _Inputs()
    start = time.perf_counter()
    try:
        params, res, answer = args.fn(args, inputs)
    except ResourceExceeded as exc:
        return EXIT_BUDGET, {"error": str(exc)}, args.format
    except (KiColorError, OSError) as exc:
        return EXIT_USAGE, {"error": str(exc)}, args.format
    report = {
        "subcommand": args.command,
        "input_digest": inputs.digest(),
        "parameters": params,
        "fvs": None if res is None else _fvs_report(res),
        "answer": answer,
        "wall_time": round(time.perf_counter() - start, 6),
    }
    return EXIT_OK, report, args.format


def run(argv=None):
    """Execute one command without printing; returns ``(exit_code, report)``.

    On failure the report holds only an ``error`` message.
    """
    code, report, _ = _execute(argv)
    return code, report


def main(argv=None):
    code, report, fmt = _execute(argv)
    if code != EXIT_OK:
        print(f"error: {report['error']}", file=sys.stderr)
        return code
    sys.stdout.write(render(report, fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
