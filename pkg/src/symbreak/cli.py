"""Pipe-friendly command line: normalize | detect | break | solve | gen |
check-prop.  Programs travel as smodels format on stdin/stdout by default;
diagnostics go to stderr.

Exit codes: 0 success, 10 satisfiable, 20 unsatisfiable, 1 usage error,
2 parse error, 3 unsupported feature.
"""

import argparse
import os
import sys
import time

from . import families, oracle, sbc, valsym
from .autgrp import SearchBudgetExceeded, detect_symmetries
from .graphenc import DuplicateEdge, EncodeOptions, dump_graph, encode_graph
from .permgroup import PermGroup, format_cycles, irredundant_filter
from .program import CardinalityDuplicate, ProgramError, normalize
from .propagation import NotTight, solve_tight
from .smodels_io import (ParseError, UnsupportedRuleType, read_smodels,
                         read_text, write_smodels, write_text)

EXIT_OK = 0
EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_UNSUPPORTED = 3


def _read_program(args):
    if args.input and args.input != "-":
        with open(args.input, "rb") as fh:
            data = fh.read()
    else:
        data = sys.stdin.buffer.read()
    if getattr(args, "text", False):
        return read_text(data)
    return read_smodels(data)


def _write_program(args, p):
    text_out = getattr(args, "text_out", False)
    data = write_text(p).encode() if text_out else write_smodels(p)
    if args.output and args.output != "-":
        with open(args.output, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)


def _io_flags(sub):
    sub.add_argument("-f", "--input", default="-", help="input file (default stdin)")
    sub.add_argument("-o", "--output", default="-", help="output file (default stdout)")
    sub.add_argument("--text", action="store_true",
                     help="read the text notation instead of smodels format")
    sub.add_argument("--text-out", action="store_true",
                     help="write the text notation instead of smodels format")


def _pc_config(args):
    return sbc.PcConfig(
        k_supports=0 if args.full else args.size,
        restrict_to_support=not args.no_opt,
        exclude_cycle_max=not args.no_opt,
        skip_fact_pairs=not args.no_opt)


def cmd_normalize(args):
    p = _read_program(args)
    _write_program(args, normalize(p, drop_tautologies=args.drop_tautologies))
    return EXIT_OK


def _detect(args, p):
    t0 = time.perf_counter()
    opts = EncodeOptions()
    gens, graph = detect_symmetries(p, opts)
    elapsed = time.perf_counter() - t0
    if getattr(args, "irredundant", False):
        gens = irredundant_filter(gens)
    return gens, graph, elapsed


def cmd_detect(args):
    p = _read_program(args)
    if args.dump_graph:
        sys.stdout.write(dump_graph(encode_graph(p)))
        return EXIT_OK
    gens, graph, elapsed = _detect(args, p)
    if args.show_generators or not args.stats:
        for g in gens:
            sys.stdout.write(format_cycles(g, p.symbols) + "\n")
    if args.stats:
        order = PermGroup(gens).order()
        sys.stdout.write(f"generators: {len(gens)}\n")
        sys.stdout.write(f"vertices: {graph.vertex_count}\n")
        sys.stdout.write(f"edges: {graph.edge_count()}\n")
        sys.stdout.write(f"group order: {order}\n")
        sys.stdout.write(f"time: {elapsed:.3f}s\n")
    return EXIT_OK


def cmd_break(args):
    p = _read_program(args)
    gens, _, _ = _detect(args, p)
    cfg = _pc_config(args)
    _write_program(args, sbc.build_sbc(p, gens, cfg))
    return EXIT_OK


def cmd_solve(args):
    p = _read_program(args)
    limit = args.limit if args.limit and args.limit > 0 else None
    if args.oracle:
        models = oracle.enumerate_answer_sets(p, limit=limit)
    else:
        models = solve_tight(p, limit=limit)
    if args.count:
        sys.stdout.write(f"{len(models)}\n")
    else:
        for m in models:
            names = sorted(p.symbols[a] for a in m)
            sys.stdout.write(" ".join(names) + "\n")
    return EXIT_SAT if models else EXIT_UNSAT


def cmd_gen(args):
    family = args.family
    params = args.params
    if family == "pigeons":
        p = families.gen_pigeons(int(params[0]), variant=args.variant,
                                 holes=int(params[1]) if len(params) > 1 else None)
    elif family == "allint":
        p = families.gen_allint(int(params[0]))
    elif family == "ramsey":
        p = families.gen_ramsey(*(int(x) for x in params[:3]))
    elif family == "schur":
        p = families.gen_schur(int(params[0]), int(params[1]))
    elif family == "colouring":
        n, k = int(params[0]), int(params[1])
        seed = args.seed if args.seed is not None else _default_seed()
        edges = families.random_graph(n, args.density, seed)
        p = families.gen_colouring(edges, k, n_vertices=n)
    elif family == "graceful":
        kind = params[0].upper()
        spec = families.gen_graceful(kind, int(params[1]),
                                     int(params[2]) if len(params) > 2 else None)
        if args.encode_csp:
            p = valsym.encode(spec, method="direct")
        else:
            sys.stdout.write(valsym.format_cspspec(spec))
            return EXIT_OK
    else:
        raise ValueError(f"unknown family {family!r}")
    if args.shuffle is not None:
        p = families.shuffle_atoms(p, args.shuffle)
    _write_program(args, p)
    return EXIT_OK


def cmd_check_prop(args):
    report = valsym.strength_compare(
        args.encoder, args.constraint, trials=args.trials,
        seed=args.seed if args.seed is not None else _default_seed(),
        n=args.vars, d=args.dom, m=args.values)
    sys.stdout.write(report.summary() + "\n")
    return EXIT_OK if report.up_stronger == 0 else EXIT_USAGE


def _default_seed():
    return int(os.environ.get("SYMBREAK_SEED", "0"))


def build_parser():
    ap = argparse.ArgumentParser(
        prog="symbreak",
        description="symmetry detection and breaking for ground programs")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("normalize", help="deduplicate literals and rules")
    _io_flags(s)
    s.add_argument("--drop-tautologies", action="store_true")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("detect", help="report the program's symmetry generators")
    _io_flags(s)
    s.add_argument("--show-generators", action="store_true")
    s.add_argument("--stats", action="store_true")
    s.add_argument("--dump-graph", action="store_true")
    s.add_argument("--irredundant", action="store_true")
    s.set_defaults(func=cmd_detect)

    s = sub.add_parser("break", help="append symmetry-breaking constraints")
    _io_flags(s)
    s.add_argument("--size", type=int, default=0, metavar="K",
                   help="limit each constraint to its first K supports")
    s.add_argument("--full", action="store_true",
                   help="no support limit (the default)")
    s.add_argument("--no-opt", action="store_true",
                   help="disable all constraint-size reductions")
    s.add_argument("--irredundant", action="store_true")
    s.set_defaults(func=cmd_break)

    s = sub.add_parser("solve", help="enumerate answer sets")
    _io_flags(s)
    s.add_argument("--oracle", action="store_true",
                   help="use brute-force enumeration instead of search")
    s.add_argument("--limit", type=int, default=0,
                   help="stop after N answer sets (0 = all)")
    s.add_argument("--count", action="store_true", help="print only the count")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("gen", help="emit a benchmark instance")
    _io_flags(s)
    s.add_argument("family", choices=["pigeons", "allint", "ramsey", "schur",
                                      "colouring", "graceful"])
    s.add_argument("params", nargs="*", help="family parameters")
    s.add_argument("--variant", default="disjunctive",
                   choices=["disjunctive", "support"])
    s.add_argument("--density", type=float, default=0.5)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--shuffle", type=int, default=None, metavar="SEED",
                   help="renumber atoms reproducibly")
    s.add_argument("--encode-csp", action="store_true",
                   help="emit CSP instances as direct-encoded programs")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("check-prop", help="compare propagation against oracles")
    s.add_argument("--encoder", required=True,
                   choices=["direct", "support", "alldiff", "pair", "dfa",
                            "allowed", "pairwise"])
    s.add_argument("--constraint", default=None,
                   choices=["table", "alldiff", "precedence-pair", "precedence"])
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--vars", type=int, default=3)
    s.add_argument("--dom", type=int, default=3)
    s.add_argument("--values", type=int, default=3)
    s.set_defaults(func=cmd_check_prop)
    return ap


_DEFAULT_CONSTRAINT = {
    "direct": "table", "support": "table", "alldiff": "alldiff",
    "pair": "precedence-pair", "dfa": "precedence", "allowed": "precedence",
    "pairwise": "precedence",
}


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    if args.command == "check-prop" and args.constraint is None:
        args.constraint = _DEFAULT_CONSTRAINT[args.encoder]
    try:
        return args.func(args)
    except UnsupportedRuleType as e:
        print(f"symbreak: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ParseError as e:
        print(f"symbreak: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (DuplicateEdge, CardinalityDuplicate) as e:
        print(f"symbreak: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (NotTight, SearchBudgetExceeded, oracle.TooLarge) as e:
        print(f"symbreak: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ProgramError, valsym.CspError, ValueError, IndexError) as e:
        print(f"symbreak: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
