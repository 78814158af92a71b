"""Command line interface.

Reports are ``key: value`` lines (or one JSON document with ``--json``).
Exit codes: 0 success / property holds, 1 property fails or no solution,
2 usage error, 3 parse or validation error, 4 guard or step budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import dynamics as dyn
from . import gadgets
from .equilibria import (
    DEFAULT_GUARD,
    KINDS,
    best_responses,
    classify_ne,
    enumerate_ne,
    nash_violation,
    solve_ne,
)
from .errors import (
    FormatError,
    GraphClassError,
    GuardExceededError,
    InvalidProfileError,
    NetworkError,
    PreconditionError,
    SNGError,
)
from .fileformat import parse_network, parse_profile, parse_rational, serialize_network
from .metrics import efficiency
from .model import (
    all_null,
    classify_graph,
    cycle_order,
    format_profile,
    format_strategy,
    payoff,
    social_welfare,
)

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_INVALID, EXIT_BUDGET = range(5)


class _Report:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.items: list[tuple[str, object]] = []

    def add(self, key, value):
        self.items.append((key, value))

    def render(self) -> str:
        if self.as_json:
            return json.dumps(dict(self.items), indent=2) + "\n"
        out = []
        for key, value in self.items:
            if isinstance(value, list):
                out.append(f"{key}: {len(value)}")
                out += [f"{key}[{k}]: {_text(v)}" for k, v in enumerate(value)]
            else:
                out.append(f"{key}: {_text(value)}")
        return "\n".join(out) + "\n"


def _text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    return str(v)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_net(args):
    return parse_network(_read(args.net))


def _rational_list(text: str):
    return [parse_rational(x.strip(), "--a") for x in text.split(",")]


# -- subcommands ------------------------------------------------------------

def cmd_validate(args, rep):
    net = _load_net(args)
    rep.add("valid", True)
    rep.add("nodes", len(net.nodes))
    rep.add("edges", len(net.edges))
    rep.add("products", len(net.products))
    return EXIT_OK


def cmd_classify(args, rep):
    net = _load_net(args)
    cls = classify_graph(net)
    rep.add("is-dag", cls.is_dag)
    rep.add("is-simple-cycle", cls.is_simple_cycle)
    rep.add("has-no-source-nodes", cls.has_no_source_nodes)
    return EXIT_OK


def cmd_payoff(args, rep):
    net = _load_net(args)
    s = parse_profile(_read(args.profile), net)
    for i in net.nodes:
        rep.add(f"payoff[{i}]", str(payoff(net, s, i)))
    rep.add("social-welfare", str(social_welfare(net, s)))
    return EXIT_OK


def cmd_ne_check(args, rep):
    net = _load_net(args)
    s = parse_profile(_read(args.profile), net)
    violation = nash_violation(net, s)
    rep.add("nash", violation is None)
    rep.add("classification", classify_ne(s).value)
    if violation is not None:
        node, better = violation
        rep.add("deviation", f"node={node} strategy={format_strategy(better)}")
        rep.add("best-responses", ",".join(format_strategy(x) for x in best_responses(net, s, node)))
        return EXIT_FALSE
    return EXIT_OK


def cmd_ne_enumerate(args, rep):
    net = _load_net(args)
    nes = enumerate_ne(net, args.guard)
    rep.add("ne", [format_profile(net, s) for s in nes])
    return EXIT_OK if nes else EXIT_FALSE


def cmd_ne_solve(args, rep):
    net = _load_net(args)
    report = solve_ne(net, args.kind, args.method, args.guard)
    rep.add("kind", args.kind)
    rep.add("method", report.method.value)
    rep.add("exists", report.exists)
    if report.witness is not None:
        rep.add("classification", report.classification.value)
        rep.add("witness", format_profile(net, report.witness))
    if report.counterexample is not None:
        node, better = report.counterexample
        rep.add("deviation", f"node={node} strategy={format_strategy(better)}")
    if report.note:
        rep.add("note", report.note)
    return EXIT_OK if report.exists else EXIT_FALSE


def _scheduler(spec: str, net, cycle: bool):
    if spec == "smallest-index":
        order = None
        if cycle:
            order = cycle_order(net)
            if order is None:
                raise GraphClassError("--cycle-order needs a simple cycle", "not-a-simple-cycle")
            order = tuple(order)
        return dyn.SmallestIndexBestResponse(order)
    kind, _, rest = spec.partition(":")
    if kind == "random":
        try:
            seed = int(rest)
        except ValueError:
            raise SNGError(f"bad seed in {spec!r}", "invalid-scheduler-seed") from None
        return dyn.RandomBetterResponse(seed)
    if kind == "fixed":
        return dyn.FixedOrderBestResponse(tuple(rest.split(",")))
    raise PreconditionError(f"unknown scheduler {spec!r}", "usage")


def _start(spec: str, net):
    if spec == "all-null":
        return all_null(net)
    if spec.startswith("random:"):
        try:
            return dyn.random_profile(net, int(spec[len("random:"):]))
        except ValueError:
            raise PreconditionError(f"bad seed in {spec!r}", "usage") from None
    return parse_profile(_read(spec), net)


def cmd_dynamics(args, rep):
    net = _load_net(args)
    start = _start(args.start, net)
    sched = _scheduler(args.scheduler, net, args.cycle_order)
    trace = dyn.run_scheduler(net, start, sched, args.max_steps)
    if args.trace:
        _write(args.trace, "".join(line + "\n" for line in trace.lines()))
    if args.plot:
        from .plotting import plot_trace
        plot_trace(net, trace, args.plot)
    rep.add("start", format_profile(net, start))
    rep.add("steps", len(trace.steps))
    rep.add("outcome", trace.outcome)
    rep.add("final", format_profile(net, trace.final))
    rep.add("final-welfare", str(social_welfare(net, trace.final)))
    return EXIT_OK if trace.reached_ne else EXIT_BUDGET


def cmd_igraph(args, rep):
    net = _load_net(args)
    graph = dyn.build_improvement_graph(net, args.guard)
    if args.dot:
        _write(args.dot, graph.to_dot())
    rep.add("states", len(graph.states))
    rep.add("transitions", len(graph.transitions))
    rep.add("sinks", len(graph.sinks()))
    code = EXIT_OK
    if args.check == "fip":
        ok = graph.is_acyclic()
        rep.add("fip", ok)
        code = EXIT_OK if ok else EXIT_FALSE
    elif args.check == "weak":
        ok = graph.all_reach_sink()
        rep.add("weakly-acyclic", ok)
        code = EXIT_OK if ok else EXIT_FALSE
    return code


def cmd_metrics(args, rep):
    net = _load_net(args)
    report = efficiency(net, args.guard)
    rep.add("optimum", str(report.optimum))
    rep.add("optimum-profile", format_profile(net, report.optimum_profile))
    rep.add("equilibria", len(report.equilibria))
    if args.plot:
        from .plotting import plot_efficiency
        plot_efficiency(report, args.plot)
    if not report.has_ne:
        rep.add("error", "no-nash-equilibrium")
        return EXIT_FALSE
    for label, (s, w) in (("best-ne", report.best_ne), ("worst-ne", report.worst_ne)):
        rep.add(label, format_profile(net, s))
        rep.add(f"{label}-welfare", str(w))
    for label, ratio in (("poa", report.poa), ("pos", report.pos)):
        rep.add(label, str(ratio))
        rep.add(f"{label}-raw", f"{ratio.numerator} / {ratio.denominator}")
    return EXIT_OK


def cmd_gen(args, rep):
    r = lambda v: parse_rational(v, "parameter")
    c0 = r(args.c0)
    which = args.which
    if which == "fig1":
        net = gadgets.gen_fig1(r(args.theta), r(args.w1), r(args.w2), c0=c0)
    elif which == "fig3":
        net = gadgets.gen_fig3(r(args.theta), r(args.w), c0=c0)
    elif which == "partition":
        if not args.a:
            raise PreconditionError("partition needs --a v1,v2,...", "usage")
        inst = gadgets.PartitionInstance.normalised(_rational_list(args.a))
        net = gadgets.gen_partition_reduction(inst, r(args.theta), r(args.w1), r(args.w2), c0=c0)
    elif which == "pos-witness":
        net = gadgets.gen_pos_witness(c0=c0)
    elif which == "dag-inefficiency":
        net = gadgets.gen_dag_inefficiency(args.k, c0=c0)
    elif which == "equitable":
        if not args.source:
            raise PreconditionError("equitable needs --from NETWORK", "usage")
        net = gadgets.equitable_from(parse_network(_read(args.source)))
    else:
        net = gadgets.gen_random(args.graph_class, args.n, args.products, args.seed, c0=c0)
        print(f"seed: {args.seed}", file=sys.stderr)
    _write(args.out, serialize_network(net))
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document")
    net_arg = argparse.ArgumentParser(add_help=False, parents=[common])
    net_arg.add_argument("net", help="network document ('-' for stdin)")
    guard = argparse.ArgumentParser(add_help=False)
    guard.add_argument("--guard", type=int, default=DEFAULT_GUARD,
                       help="maximum number of joint strategies to enumerate")

    parser = argparse.ArgumentParser(prog="sngames", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[net_arg]).set_defaults(func=cmd_validate)
    sub.add_parser("classify", parents=[net_arg]).set_defaults(func=cmd_classify)
    p = sub.add_parser("payoff", parents=[net_arg])
    p.add_argument("--profile", required=True)
    p.set_defaults(func=cmd_payoff)

    ne = sub.add_parser("ne").add_subparsers(dest="ne_command", required=True)
    p = ne.add_parser("check", parents=[net_arg])
    p.add_argument("--profile", required=True)
    p.set_defaults(func=cmd_ne_check)
    ne.add_parser("enumerate", parents=[net_arg, guard]).set_defaults(func=cmd_ne_enumerate)
    p = ne.add_parser("solve", parents=[net_arg, guard])
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--method", choices=("auto", "brute", "dag", "cycle", "sourcefree"), default="auto")
    p.set_defaults(func=cmd_ne_solve)

    p = sub.add_parser("dynamics", parents=[net_arg])
    p.add_argument("--start", default="all-null", help="profile file, all-null or random:SEED")
    p.add_argument("--scheduler", default="smallest-index",
                   help="smallest-index, random:SEED or fixed:ID,ID,...")
    p.add_argument("--max-steps", type=int, required=True)
    p.add_argument("--cycle-order", action="store_true",
                   help="index players along the cycle for smallest-index")
    p.add_argument("--trace", help="write one line per step to this file")
    p.add_argument("--plot", help="write a welfare/gain figure to this file")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("igraph", parents=[net_arg, guard])
    p.add_argument("--dot", help="write the improvement graph in DOT format")
    p.add_argument("--check", choices=("fip", "weak"))
    p.set_defaults(func=cmd_igraph)

    p = sub.add_parser("metrics", parents=[net_arg, guard])
    p.add_argument("--plot", help="write an equilibrium-welfare figure to this file")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("gen", parents=[common])
    p.add_argument("which", choices=("fig1", "fig3", "partition", "pos-witness",
                                     "dag-inefficiency", "equitable", "random"))
    p.add_argument("--theta", default="1/4")
    p.add_argument("--w1", default="1/3")
    p.add_argument("--w2", default="1/2")
    p.add_argument("--w", default="1/2", help="fig3 edge weight")
    p.add_argument("--a", help="comma separated PARTITION values (normalised to sum 1)")
    p.add_argument("--k", type=int, default=3, help="followers for dag-inefficiency")
    p.add_argument("--from", dest="source", help="network to re-weight equitably")
    p.add_argument("--class", dest="graph_class", choices=gadgets.GRAPH_CLASSES, default="general")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--products", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--c0", default="1")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    rep = _Report(getattr(args, "json", False))
    try:
        code = args.func(args, rep)
    except (FormatError, NetworkError, InvalidProfileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except GuardExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GraphClassError, PreconditionError) as exc:
        if exc.code == "constraint-violated":
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SNGError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if rep.items:
        sys.stdout.write(rep.render())
    return code
