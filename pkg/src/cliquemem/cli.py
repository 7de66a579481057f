"""Command line front end: ``cliquemem <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 data-format error, 3 infeasible spec.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import theory
from .classify import accept
from .core import (
    NetworkFormatError,
    OrderProfile,
    Topology,
    load_network,
    new_network,
    parse_message,
    read_messages,
    save_network,
)
from .harness import (
    InfeasibleSpecError,
    SpecFormatError,
    emit_csv,
    emit_plot,
    load_spec,
    preset,
    preset_names,
    run_experiment,
)
from .retrieval import blind_recover, guided_recover

EXIT_OK, EXIT_USAGE, EXIT_FORMAT, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _cmd_learn(args) -> int:
    topo = Topology(args.chi, args.l)
    net = new_network(topo)
    with open(args.messages) as fh:
        messages = read_messages(fh)
    net.learn_many(messages)
    save_network(net, args.output)
    print(f"learned {len(messages)} messages: {net.edge_count} edges, density {net.density():.6g}")
    return EXIT_OK


def _cmd_retrieve(args) -> int:
    net = load_network(args.network)
    cue = parse_message(args.cue)
    if args.guided:
        if not args.known:
            raise UsageError("--guided needs --known CLUSTERS")
        known = [int(t) for t in args.known.split(",") if t.strip()]
        out = guided_recover(net, cue, known, args.iters, args.gamma)
    else:
        out = blind_recover(net, cue, args.iters, args.gamma)
    pairs = ",".join(f"{i}:{j}" for i, j in sorted(out.final_active))
    print(pairs)
    print(f"# iterations={out.iterations_run} converged={out.converged} "
          f"cycle={out.cycle_detected} ambiguous={out.ambiguous}", file=sys.stderr)
    return EXIT_OK


def _cmd_classify(args) -> int:
    net = load_network(args.network)
    ok = accept(net, parse_message(args.probe))
    print("accept" if ok else "reject")
    return EXIT_OK


def _theory_value(tok: str):
    if ".." in tok:
        lo, hi = tok.split("..")
        return OrderProfile.uniform(int(lo), int(hi))
    if tok.lower() in ("true", "false"):
        return tok.lower() == "true"
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        return float(tok)
    except ValueError:
        return tok


def _cmd_theory(args) -> int:
    if args.name not in theory.FORMULAS:
        raise UsageError(f"unknown formula {args.name!r}; choose from {', '.join(sorted(theory.FORMULAS))}")
    kw = {}
    for item in args.params:
        if "=" not in item:
            raise UsageError(f"parameter {item!r} is not name=value")
        k, v = item.split("=", 1)
        kw[k] = _theory_value(v)
    try:
        value = theory.FORMULAS[args.name](**kw)
    except TypeError as exc:
        raise UsageError(str(exc)) from exc
    if isinstance(value, tuple):
        value = [float(v) if not isinstance(v, (int, np.integer)) else int(v) for v in value]
    print(json.dumps(value))
    return EXIT_OK


def _cmd_experiment(args) -> int:
    if bool(args.figure) == bool(args.spec):
        raise UsageError("give exactly one of --figure or a spec file")
    overrides = {k: getattr(args, k) for k in ("trials", "max_trials", "seed") if getattr(args, k) is not None}
    if args.figure:
        try:
            spec = preset(args.figure, **overrides)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from exc
    else:
        from dataclasses import replace

        spec = replace(load_spec(args.spec), **overrides)
    spec.validate()
    points = []
    for p in run_experiment(spec, workers=args.workers):
        points.append(p)
        if args.verbose:
            print(f"{p.series} x={p.x:g} sim={p.sim_rate:.4g} theory={p.theory:.4g} "
                  f"trials={p.trials} errors={p.errors} ({p.wall_time:.1f}s)", file=sys.stderr)
    series = sorted({p.series for p in points}, key=[p.series for p in points].index)
    out = Path(args.output)
    if len(series) == 1:
        emit_csv(points, out)
        written = [out]
    else:
        written = []
        for s in series:
            path = out.with_name(f"{out.stem}_{s}{out.suffix or '.csv'}")
            emit_csv([p for p in points if p.series == s], path)
            written.append(path)
    if args.plot:
        emit_plot(points, args.plot, spec.mode, title=spec.figure_id)
        written.append(Path(args.plot))
    for w in written:
        print(w)
    return EXIT_OK


def _cmd_inspect(args) -> int:
    net = load_network(args.network)
    t = net.topology
    info = {
        "chi": t.chi, "l": t.l, "n": t.n, "q_bits": t.q_bits,
        "edges": net.edge_count, "density": net.density(),
    }
    for k, v in info.items():
        print(f"{k}: {v}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cliquemem", description="Sparse clique-based associative memory.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("learn", help="learn a message file into a network file")
    s.add_argument("messages")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--chi", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.set_defaults(func=_cmd_learn)

    s = sub.add_parser("retrieve", help="recover a message from a partial cue")
    s.add_argument("network")
    s.add_argument("cue", help="e.g. 3:17,9:0")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--blind", action="store_true", default=True)
    mode.add_argument("--guided", action="store_true")
    s.add_argument("--known", help="comma-separated cluster indices (guided)")
    s.add_argument("--iters", type=int, default=1)
    s.add_argument("--gamma", type=int, default=1)
    s.set_defaults(func=_cmd_retrieve)

    s = sub.add_parser("classify", help="accept or reject a probe message")
    s.add_argument("network")
    s.add_argument("probe")
    s.set_defaults(func=_cmd_classify)

    s = sub.add_parser("theory", help="evaluate a closed form, e.g. p_error_blind chi=100 l=64 c=12 c_e=3 d=0.3")
    s.add_argument("name")
    s.add_argument("params", nargs="*")
    s.set_defaults(func=_cmd_theory)

    s = sub.add_parser("experiment", help="run a figure preset or spec file")
    s.add_argument("spec", nargs="?")
    s.add_argument("--figure", help=f"preset name ({', '.join(preset_names())})")
    s.add_argument("-o", "--output", default="experiment.csv")
    s.add_argument("--plot", help="SVG output path")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--trials", type=int)
    s.add_argument("--max-trials", dest="max_trials", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=_cmd_experiment)

    s = sub.add_parser("inspect", help="print network statistics")
    s.add_argument("network")
    s.set_defaults(func=_cmd_inspect)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cliquemem: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NetworkFormatError, SpecFormatError) as exc:
        print(f"cliquemem: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except InfeasibleSpecError as exc:
        print(f"cliquemem: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"cliquemem: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # malformed messages and out-of-range indices in user data
        print(f"cliquemem: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
