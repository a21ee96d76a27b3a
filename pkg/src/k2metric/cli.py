"""Command-line front end.

Reports go to stdout (or ``--out``), diagnostics to stderr. Exit status is
0 on success, 1 on a usage error and 2 on a data or format error.
"""
from __future__ import annotations

import argparse
import io
import math
import sys

from . import paperlab
from .errors import K2Error
from .k2search import SearchConfig, joint_score_uniform, k2_search, parse_order
from .metric import parse_prior, structure_log_score, uniform_log_structure_prior
from .model import format_structure, load_database, parse_domains, parse_structure
from .posterior import DEFAULT_MAX_NODES, posterior_over_structures

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read_db(args):
    if not args.data:
        raise UsageError("--data is required")
    domains = None
    if args.domains:
        with open(args.domains, encoding="utf-8") as fh:
            domains = parse_domains(fh.read())
    with open(args.data, encoding="utf-8", newline="") as fh:
        return load_database(fh, domains)


def _prior(args, db):
    try:
        return parse_prior(args.prior, db)
    except OSError:
        raise
    except K2Error as exc:
        if args.prior.startswith("dirichlet="):
            raise
        raise UsageError(str(exc)) from None


def cmd_score(args, out):
    db = _read_db(args)
    prior = _prior(args, db)
    dag = parse_structure(args.structure or "", db.names)
    result = structure_log_score(dag, db, prior)
    log_prior = uniform_log_structure_prior(db.n)
    log_joint = result.log_score + log_prior
    out.write(f"structure\t{format_structure(dag, db.names)}\n")
    out.write(f"prior\t{prior.describe()}\n")
    for name, s in zip(db.names, result.per_family):
        out.write(f"family\t{name}\t{s:.6f}\n")
    out.write(f"log_likelihood\t{result.log_score:.6f}\n")
    out.write(f"log_structure_prior\t{log_prior:.6f}\n")
    out.write(f"log_joint\t{log_joint:.6f}\n")
    out.write(f"joint\t{math.exp(log_joint):.3e}\n")


def cmd_enumerate(args, out):
    db = _read_db(args)
    table = posterior_over_structures(db, _prior(args, db), args.max_nodes)
    out.write(table.to_tsv(db.names))


def cmd_search(args, out):
    db = _read_db(args)
    try:
        order = parse_order(args.order, db.names)
        max_parents = db.n - 1 if args.max_parents is None else args.max_parents
        config = SearchConfig(order, max_parents, _prior(args, db))
    except ValueError as exc:
        if isinstance(exc, K2Error):
            raise
        raise UsageError(str(exc)) from None
    result = k2_search(db, config)
    log_joint = joint_score_uniform(result, db.n)
    out.write(f"structure\t{format_structure(result.dag, db.names)}\n")
    for name, s in zip(db.names, result.family_scores):
        out.write(f"family\t{name}\t{s:.6f}\n")
    out.write(f"log_likelihood\t{result.log_score:.6f}\n")
    out.write(f"log_joint\t{log_joint:.6f}\n")
    out.write(f"joint\t{math.exp(log_joint):.3e}\n")


def _family_spec(args):
    if args.omega is None:
        raise UsageError("--omega is required")
    try:
        if args.counts:
            counts = [int(c) * args.scale for c in args.counts.split(",")]
        else:
            counts = [args.scale] * (2 * args.omega + 1)
        return paperlab.PaperFamilySpec(args.omega, counts)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_gen_db(args, out):
    db = paperlab.generate_paper_db(_family_spec(args))
    db.to_csv(out)
    if args.domains:
        with open(args.domains, "w", encoding="utf-8") as fh:
            fh.write(db.domains_text())


def cmd_reproduce(args, out):
    if args.target == "sec31":
        out.write(paperlab.reproduce_section31().to_tsv())
    elif args.target == "table3":
        out.write(paperlab.grid_to_tsv(paperlab.reproduce_table3(), "A"))
    elif args.target == "table4":
        alphas = args.alpha or list(paperlab.TABLE4_ALPHAS)
        if any(not a > 0 for a in alphas):
            raise UsageError("--alpha values must be positive")
        out.write(paperlab.grid_to_tsv(paperlab.reproduce_table4(alphas), "alpha"))
    else:
        omega = args.omega or 4
        scales = args.scales or [1, 10, 100, 1000]
        try:
            values = paperlab.convergence_study(omega, scales)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        out.write("scale\tP(B_S2|D)\n")
        for s, v in zip(scales, values):
            out.write(f"{s}\t{paperlab.round_half_up(v)}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="k2metric", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, data=True):
        if data:
            p.add_argument("--data", help="CSV database")
            p.add_argument("--domains", help="domain declaration file")
            p.add_argument("--prior", default="uniform",
                           help="uniform | alpha=<x> | dirichlet=<path> (default: uniform)")
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("score", help="score one structure")
    common(p)
    p.add_argument("--structure", default="", help="edges 'a->b;b->c' (default: no edges)")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("enumerate", help="posterior over every DAG")
    common(p)
    p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("search", help="greedy K2 search")
    common(p)
    p.add_argument("--order", help="comma-separated variable names (default: column order)")
    p.add_argument("--max-parents", type=int, default=None)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("gen-db", help="write a database of the x2 = |x1| family as CSV")
    common(p, data=False)
    p.add_argument("--omega", type=int)
    p.add_argument("--counts", help="comma-separated a_0,a_1+,a_1-,... (default: all ones)")
    p.add_argument("--scale", type=int, default=1, help="multiply every count")
    p.add_argument("--domains", help="also write the domain declaration here")
    p.set_defaults(func=cmd_gen_db)

    p = sub.add_parser("reproduce", help="recompute a published result")
    common(p, data=False)
    p.add_argument("target", choices=["sec31", "table3", "table4", "convergence"])
    p.add_argument("--alpha", type=float, action="append", help="table4: alpha (repeatable)")
    p.add_argument("--omega", type=int, help="convergence: omega (default 4)")
    p.add_argument("--scale", dest="scales", type=int, action="append",
                   help="convergence: scale (repeatable)")
    p.set_defaults(func=cmd_reproduce)
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        buf = io.StringIO()
        args.func(args, buf)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (K2Error, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(buf.getvalue())
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DATA
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
