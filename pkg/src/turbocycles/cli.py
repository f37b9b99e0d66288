"""Command-line entry point.

Exit status is 0 on success and 1 on invalid input such as an unknown flag or
an unreadable file. A randomized graph construction that gives up exits with 2.
"""

from __future__ import annotations

import argparse
import io
import logging
import sys
import warnings
from dataclasses import replace

import numpy as np

from .census import census, census_rows, read_census_csv, write_census_csv, write_summary_csv
from .errors import ConstructionFailure, InvalidParameterError
from .estimator import VARIANTS, read_theory_csv, theory_curve, write_theory_csv
from .experiment import (
    DESK_SCALE,
    ExperimentConfig,
    compare_report,
    format_comparison,
    format_independence,
    format_report,
    full_scale_config,
    independence_from_counts,
    independence_report,
    parse_report,
    run_simulation,
    write_text,
)
from .graphs import (
    TurboGraph,
    build_ldpc_graph,
    build_turbo_graph,
    format_graph,
    gen_random_permutation,
    gen_s_random_permutation,
    read_graph,
)
from .pictures import NonIntegralCountWarning

log = logging.getLogger("turbocycles")

EXIT_OK, EXIT_INVALID, EXIT_CONSTRUCTION = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="turbocycles", description="Cycle-length statistics for turbo and LDPC graphs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("generate", parents=[common], help="write a graph file")
    p.add_argument("--family", choices=["turbo", "ldpc"], required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--s", type=int, default=0, help="S-random spread (turbo; 0 = plain random)")
    p.add_argument("--dv", type=_positive, default=3)
    p.add_argument("--dc", type=_positive, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-restarts", type=_positive, default=None)

    p = sub.add_parser("census", parents=[common], help="count cycles at nodes of a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--kmax", type=int, required=True)
    pick = p.add_mutually_exclusive_group()
    pick.add_argument("--nodes", type=_positive, help="sample this many distinct nodes uniformly")
    pick.add_argument("--node", action="append", help="explicit node id such as 0:5 or v:3 (repeatable)")
    p.add_argument("--seed", type=int, default=0, help="seed for node sampling")
    p.add_argument("--include-u", action="store_true", help="count each cross edge as two edges")
    p.add_argument("--summary", default=None, help="also write k,frac_nodes_no_cycle_leq_k,sample_size")
    p.add_argument("--threads", type=_positive, default=1)

    p = sub.add_parser("theory", parents=[common], help="emit an analytic no-cycle curve")
    p.add_argument("--family", choices=VARIANTS, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--kmin", type=int, default=4)
    p.add_argument("--dv", type=_positive, default=None)
    p.add_argument("--dc", type=_positive, default=None)

    p = sub.add_parser("simulate", parents=[common], help="run a Monte Carlo experiment")
    p.add_argument("--config", default=None, help="key=value config file (default: desk-scale turbo run)")
    p.add_argument("--seed", type=int, default=None, help="override the config's base seed")
    p.add_argument("--full-scale", action="store_true", help="200 graphs x 100 nodes at n=64000 (turbo) or n=63000 (LDPC); a long batch job")
    p.add_argument("--census-out", default=None)
    p.add_argument("--independence-out", default=None)
    p.add_argument("--threads", type=_positive, default=1)

    p = sub.add_parser("compare", parents=[common], help="simulation report vs theory curve")
    p.add_argument("--report", required=True)
    p.add_argument("--theory", default=None, help="theory CSV (default: computed from the report's config)")

    p = sub.add_parser("independence", parents=[common], help="marginal product vs joint no-cycle events")
    p.add_argument("--census", required=True, help="census CSV (node_id,k,count)")
    p.add_argument("--family", choices=["turbo", "ldpc"], required=True)
    return parser


def _cmd_generate(args) -> str:
    if args.family == "turbo":
        if args.s < 0:
            raise InvalidParameterError("--s must be >= 0")
        if args.s:
            perm = gen_s_random_permutation(args.n, args.s, args.seed,
                                            max_restarts=args.max_restarts or 100)
        else:
            perm = gen_random_permutation(args.n, args.seed)
        graph = build_turbo_graph(perm, seed=args.seed, s=args.s)
    else:
        graph = build_ldpc_graph(args.n, args.dv, args.dc, args.seed, max_restarts=args.max_restarts or 1000)
    return format_graph(graph)


def _cmd_census(args) -> str:
    graph = read_graph(args.graph)
    if args.node:
        sample = []
        for text in args.node:
            kind, _, pos = text.partition(":")
            try:
                label = (int(kind) if isinstance(graph, TurboGraph) else kind, int(pos))
            except ValueError:
                raise InvalidParameterError(f"bad node id {text!r}") from None
            sample.append(label)
    elif args.nodes:
        if args.nodes > graph.num_nodes:
            raise InvalidParameterError(f"graph has only {graph.num_nodes} nodes")
        rng = np.random.default_rng(args.seed)
        sample = sorted(rng.choice(graph.num_nodes, size=args.nodes, replace=False).tolist())
    else:
        sample = list(range(graph.num_nodes))
    result = census(graph, sample, args.kmax, include_u=args.include_u, workers=args.threads)
    rows = census_rows(graph, result)
    if args.summary:
        buf = io.StringIO()
        write_summary_csv([c for _, c in rows], args.kmax, buf)
        write_text(buf.getvalue(), args.summary, sys.stdout)
    buf = io.StringIO()
    write_census_csv(rows, args.kmax, buf)
    return buf.getvalue()


def _cmd_theory(args) -> str:
    curve = theory_curve(args.family, args.n, args.kmax, k_min=args.kmin, d_v=args.dv, d_c=args.dc)
    buf = io.StringIO()
    write_theory_csv(curve, buf)
    return buf.getvalue()


def _cmd_simulate(args) -> str:
    config = ExperimentConfig.from_file(args.config) if args.config else DESK_SCALE
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.full_scale:
        config = full_scale_config(config)
        log.warning("full-scale run (%d graphs x %d nodes, n=%d, kmax=%d): expect a long batch job",
                    config.graphs, config.nodes, config.n, config.kmax)
    report = run_simulation(config, workers=args.threads)
    census_out = args.census_out or config.census_out
    if census_out:
        buf = io.StringIO()
        write_census_csv([(name, {k: c for k, c in enumerate(counts) if c}) for name, counts in report.rows],
                         config.kmax, buf)
        write_text(buf.getvalue(), census_out, sys.stdout)
    independence_out = args.independence_out or config.independence_out
    if independence_out:
        write_text(format_independence(independence_report(report)), independence_out, sys.stdout)
    if args.out is None and config.out:
        args.out = config.out
    return format_report(report)


def _cmd_compare(args) -> str:
    with open(args.report) as fh:
        report = parse_report(fh.read())
    if args.theory:
        with open(args.theory) as fh:
            curve = read_theory_csv(fh)
    else:
        cfg = report.config
        if cfg.is_ldpc:
            curve = theory_curve("ldpc", cfg.n, cfg.kmax, d_v=cfg.dv, d_c=cfg.dc)
        else:
            curve = theory_curve("turbo-with-u" if cfg.include_u else "turbo", cfg.n, cfg.kmax)
    return format_comparison(compare_report(report, curve))


def _cmd_independence(args) -> str:
    per_node, kmax = read_census_csv(args.census)
    rows = [(name, [counts.get(k, 0) for k in range(kmax + 1)]) for name, counts in per_node.items()]
    return format_independence(independence_from_counts(rows, kmax, ldpc=args.family == "ldpc"))


COMMANDS = {
    "generate": _cmd_generate,
    "census": _cmd_census,
    "theory": _cmd_theory,
    "simulate": _cmd_simulate,
    "compare": _cmd_compare,
    "independence": _cmd_independence,
}


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    warnings.simplefilter("ignore", NonIntegralCountWarning)
    try:
        text = COMMANDS[args.command](args)
        write_text(text, args.out, sys.stdout)
    except ConstructionFailure as exc:
        print(f"turbocycles: construction failed: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    except (InvalidParameterError, ValueError, OSError) as exc:
        print(f"turbocycles: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def main() -> None:
    sys.exit(cli_main())
