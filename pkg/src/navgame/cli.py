"""Command-line surface.

Exit codes: 0 success, 1 usage/input/solver errors, 2 when --expect-stable
was set and the verdict is not stable.  All randomness flows through
explicit seeds in the arguments, so identical invocations give identical
bytes on disk.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path

from .analysis import (
    EquilibriumReport,
    PoaReport,
    brute_force_reachable,
    brute_force_social_optimum,
    parse_criterion,
    poa_report,
    verify_equilibrium,
)
from .covers import CoverError, SearchBudget
from .directed import construct_directed_optimum
from .dynamics import parse_schedule, run_dynamics
from .fileio import (
    FileFormatError,
    load_network,
    load_profile,
    load_space,
    network_to_json,
    save_algorithm_trace,
    save_dynamics_trace,
    save_network,
    save_profile,
    save_space,
)
from .geometry import DegenerateInputError, build_nng, delaunay_2d
from .instances import (
    Clustered,
    Grid,
    Line,
    PoaLowerBoundFamily,
    SetCoverGadget,
    UniformSquare,
)
from .metric import MetricError
from .network import GameError, Network, Variant, induce_network
from .render import RenderError, render_svg, to_dot
from .undirected import AlgorithmError, compute_approximate_ne


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract wants 1
        raise UsageError(message)


def _budget(args) -> SearchBudget | None:
    return SearchBudget(max_nodes=args.budget) if args.budget else None


def _emit(doc, path: str | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2, default=_json_default)
    if path:
        Path(path).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, frozenset):
        return sorted(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _report_doc(report: EquilibriumReport) -> dict:
    doc = asdict(report)
    for w in doc["witnesses"]:
        w["mode"] = w["mode"].value
        w["deviation"] = None if w["deviation"] is None else sorted(w["deviation"])
    return doc


def _poa_doc(report: PoaReport) -> dict:
    doc = asdict(report)
    for key in ("ratio_exact", "ratio_bound", "bound_value"):
        if doc[key] is not None:
            doc[key] = str(doc[key])
    return doc


# ---------------------------------------------------------------------------
# subcommands


def _cmd_generate(args) -> int:
    if args.kind == "uniform":
        spec = UniformSquare(
            n=args.n, seed=args.seed, dimension=args.dimension,
            side=args.side, scale=args.scale,
        )
        save_space(spec.build(), args.out)
    elif args.kind == "clustered":
        spec = Clustered(
            n=args.n, clusters=args.clusters, seed=args.seed,
            dimension=args.dimension, box=args.side, spread=args.spread,
            scale=args.scale,
        )
        save_space(spec.build(), args.out)
    elif args.kind == "line":
        if not args.positions:
            raise UsageError("line needs --positions")
        positions = tuple(int(x) for x in args.positions.split(","))
        save_space(Line(positions, scale=args.scale).build(), args.out)
    elif args.kind == "grid":
        save_space(
            Grid(rows=args.rows, cols=args.cols, spacing=args.spacing).build(),
            args.out,
        )
    elif args.kind == "set-cover-gadget":
        if not args.sets or args.universe is None:
            raise UsageError("gadget needs --sets and --universe")
        sets = tuple(
            frozenset(int(x) for x in group.split(",") if x)
            for group in args.sets.split(";")
        )
        gadget = SetCoverGadget(sets, args.universe, args.variant).build()
        save_space(gadget.space, args.out)
        if args.profile_out:
            save_profile(gadget.profile, args.profile_out)
    elif args.kind == "poa-family":
        family = PoaLowerBoundFamily(
            components=args.components, radius=args.radius,
            pair_gap=args.pair_gap, span=args.span, layout=args.layout,
        ).build()
        save_space(family.space, args.out)
        if args.shared_out:
            save_profile(family.shared, args.shared_out)
        if args.selfish_out:
            save_profile(family.selfish, args.selfish_out)
    else:
        raise UsageError(f"unknown kind {args.kind!r}")
    return 0


def _cmd_construct(args) -> int:
    space = load_space(args.space)
    if args.method == "directed-optimum":
        opt = construct_directed_optimum(space, budget=_budget(args))
        save_network(opt.network, args.out)
        if args.profile_out:
            save_profile(opt.profile, args.profile_out)
        _emit(
            {
                "method": args.method,
                "social_cost": opt.social_cost,
                "certified": opt.certified,
            },
            None,
        )
    elif args.method == "approx-ne":
        network, trace = compute_approximate_ne(
            space, mode=args.algorithm_mode, budget=_budget(args)
        )
        save_network(network, args.out)
        if args.trace_out:
            save_algorithm_trace(trace, args.trace_out)
        _emit(
            {
                "method": args.method,
                "mode": trace.mode,
                "edges": len(network.edges),
                "iterations": trace.iterations,
                "certified": trace.certified,
            },
            None,
        )
    elif args.method == "delaunay":
        edges = delaunay_2d(space)
        save_network(
            Network(Variant.UNDIRECTED, space.n, frozenset(edges), None), args.out
        )
    elif args.method == "nng":
        nng = build_nng(space)
        save_network(
            Network(Variant.UNDIRECTED, space.n, nng.undirected_edges, None),
            args.out,
        )
    else:
        raise UsageError(f"unknown method {args.method!r}")
    return 0


def _cmd_verify(args) -> int:
    space = load_space(args.space)
    profile = load_profile(args.profile)
    report = verify_equilibrium(
        space,
        profile,
        criterion=parse_criterion(args.criterion),
        budget=_budget(args),
        method=args.method,
    )
    _emit(_report_doc(report), args.out)
    if args.expect_stable and not report.stable:
        return 2
    return 0


def _cmd_dynamics(args) -> int:
    space = load_space(args.space)
    initial = load_profile(args.initial)
    trace = run_dynamics(
        space,
        initial,
        parse_schedule(args.schedule),
        max_steps=args.max_steps,
        budget=_budget(args),
    )
    if args.out:
        save_dynamics_trace(trace, args.out)
    _emit(
        {
            "status": trace.status.value,
            "steps": len(trace.steps),
            "moves": len(trace.moves),
            "first_repeat": trace.first_repeat,
            "certified": trace.certified,
            "final_cost": sum(len(s) for s in trace.final.strategies),
        },
        None,
    )
    return 0


def _cmd_poa(args) -> int:
    space = load_space(args.space)
    profile = load_profile(args.profile)
    report = poa_report(
        space, profile, budget=_budget(args), so_max_n=args.so_max_n
    )
    _emit(_poa_doc(report), args.out)
    return 0


def _cmd_export(args) -> int:
    space = load_space(args.space)
    if args.network:
        network = load_network(args.network)
    elif args.profile:
        network = induce_network(load_profile(args.profile))
    else:
        raise UsageError("export needs --network or --profile")
    if args.format == "dot":
        text = to_dot(network, space)
    elif args.format == "svg":
        text = render_svg(network, space)
    elif args.format == "json":
        text = json.dumps(network_to_json(network), sort_keys=True, indent=2) + "\n"
    else:
        raise UsageError(f"unknown format {args.format!r}")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_oracle(args) -> int:
    space = load_space(args.space)
    if args.which == "brute-so":
        result = brute_force_social_optimum(
            space, args.variant, max_n=args.max_n
        )
        doc = {
            "variant": result.variant.value,
            "cost": result.cost,
            "edges": [list(e) for e in sorted(result.network.edges)],
        }
        _emit(doc, args.out)
    elif args.which == "brute-reach":
        if not args.network or args.source is None:
            raise UsageError("brute-reach needs --network and --source")
        network = load_network(args.network)
        reach = brute_force_reachable(network, space, args.source)
        _emit({"source": args.source, "reachable": sorted(reach)}, args.out)
    else:
        raise UsageError(f"unknown oracle {args.which!r}")
    return 0


# ---------------------------------------------------------------------------
# wiring


def _build_parser() -> _Parser:
    p = _Parser(prog="navgame", description=__doc__)
    p.add_argument("--error-json", action="store_true",
                   help="print failures as machine-readable JSON")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write an instance to disk")
    g.add_argument("--kind", required=True,
                   choices=["uniform", "clustered", "line", "grid",
                            "set-cover-gadget", "poa-family"])
    g.add_argument("--out", required=True)
    g.add_argument("--n", type=int, default=10)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--dimension", type=int, default=2)
    g.add_argument("--side", type=int, default=1_000_000)
    g.add_argument("--scale", type=int, default=1)
    g.add_argument("--clusters", type=int, default=3)
    g.add_argument("--spread", type=int, default=2_000)
    g.add_argument("--positions", help="comma-separated 1D coordinates")
    g.add_argument("--rows", type=int, default=3)
    g.add_argument("--cols", type=int, default=3)
    g.add_argument("--spacing", type=int, default=1)
    g.add_argument("--sets", help="semicolon-separated member lists, e.g. 0,1;1,2")
    g.add_argument("--universe", type=int)
    g.add_argument("--variant", default="directed",
                   choices=["directed", "undirected"])
    g.add_argument("--components", type=int, default=8)
    g.add_argument("--radius", type=int, default=10_000_000)
    g.add_argument("--pair-gap", type=int, default=1_000)
    g.add_argument("--span", type=int, default=3)
    g.add_argument("--layout", default="tangential",
                   choices=["tangential", "radial"])
    g.add_argument("--profile-out")
    g.add_argument("--shared-out")
    g.add_argument("--selfish-out")
    g.set_defaults(func=_cmd_generate)

    c = sub.add_parser("construct", help="build a network from a point set")
    c.add_argument("--space", required=True)
    c.add_argument("--method", required=True,
                   choices=["directed-optimum", "approx-ne", "delaunay", "nng"])
    c.add_argument("--out", required=True)
    c.add_argument("--trace-out")
    c.add_argument("--profile-out")
    c.add_argument("--algorithm-mode",
                   choices=["general", "euclidean", "planar-2d"])
    c.add_argument("--budget", type=int)
    c.set_defaults(func=_cmd_construct)

    v = sub.add_parser("verify", help="check a profile for stability")
    v.add_argument("--space", required=True)
    v.add_argument("--profile", required=True)
    v.add_argument("--criterion", default="ne",
                   help="ne, beta:<fraction>, or additive:<int>")
    v.add_argument("--method", default="auto",
                   choices=["auto", "generic", "structural"])
    v.add_argument("--expect-stable", action="store_true")
    v.add_argument("--budget", type=int)
    v.add_argument("--out")
    v.set_defaults(func=_cmd_verify)

    d = sub.add_parser("dynamics", help="run best-response dynamics")
    d.add_argument("--space", required=True)
    d.add_argument("--initial", required=True)
    d.add_argument("--schedule", default="round-robin",
                   help="round-robin, random:<seed>, or scripted:<a,b,...>")
    d.add_argument("--max-steps", type=int, default=10_000)
    d.add_argument("--budget", type=int)
    d.add_argument("--out")
    d.set_defaults(func=_cmd_dynamics)

    a = sub.add_parser("poa", help="cost of a profile vs optimum and bounds")
    a.add_argument("--space", required=True)
    a.add_argument("--profile", required=True)
    a.add_argument("--so-max-n", type=int)
    a.add_argument("--budget", type=int)
    a.add_argument("--out")
    a.set_defaults(func=_cmd_poa)

    e = sub.add_parser("export", help="render a network")
    e.add_argument("--space", required=True)
    e.add_argument("--network")
    e.add_argument("--profile")
    e.add_argument("--format", required=True, choices=["dot", "json", "svg"])
    e.add_argument("--out")
    e.set_defaults(func=_cmd_export)

    o = sub.add_parser("oracle", help="size-capped exhaustive references")
    o.add_argument("which", choices=["brute-so", "brute-reach"])
    o.add_argument("--space", required=True)
    o.add_argument("--variant", default="undirected",
                   choices=["directed", "undirected"])
    o.add_argument("--max-n", type=int)
    o.add_argument("--network")
    o.add_argument("--source", type=int)
    o.add_argument("--out")
    o.set_defaults(func=_cmd_oracle)
    return p


_ERRORS = (
    UsageError,
    FileFormatError,
    GameError,
    MetricError,
    CoverError,
    AlgorithmError,
    DegenerateInputError,
    RenderError,
    OSError,
    ValueError,
)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    error_json = False
    try:
        args = parser.parse_args(argv)
        error_json = args.error_json
        return args.func(args)
    except _ERRORS as exc:
        payload = {"error": str(exc), "type": type(exc).__name__}
        if error_json:
            print(json.dumps(payload, sort_keys=True))
        else:
            print(f"navgame: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
