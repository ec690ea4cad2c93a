"""Command-line entry point: ``mixgap <subcommand> [options]``.

Exit codes: 0 success, 1 usage/config error, 2 report rows carry errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .ball import VertexSet
from .errors import MixgapError
from .experiment import ExperimentConfig, dumps, emit_report, format_float, run_experiment
from .graph import Graph, girth

log = logging.getLogger("mixgap")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _common(suppress: bool) -> argparse.ArgumentParser:
    # subcommand copies must not overwrite flags given before the subcommand
    p = argparse.ArgumentParser(add_help=False)
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=dflt(None))
    p.add_argument("--config", type=Path, default=dflt(None))
    p.add_argument("--out", type=Path, default=dflt(None))
    p.add_argument("--format", choices=("csv", "json"), default=dflt("json"))
    p.add_argument("--quiet", action="store_true", default=dflt(False))
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mixgap", description=__doc__.splitlines()[0], parents=[_common(False)])
    common = _common(True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", parents=[common], help="write an H or G_n graph file")
    gen.add_argument("--kind", choices=("h", "gn", "q"), default="h")
    gen.add_argument("--n", type=int, default=250)
    gen.add_argument("--d", type=int, default=3)
    gen.add_argument("--girth-min", type=int, default=None)
    gen.add_argument("--method", choices=("swap_repair", "tree_graft"), default="tree_graft")
    gen.add_argument("--radius", type=int, default=None)
    gen.add_argument("--delta", type=float, default=0.1)
    gen.add_argument("--depth-min", type=int, default=2)
    gen.add_argument("--bridge-len", type=int, default=2)
    gen.add_argument("--stretch", type=int, default=10)

    mea = sub.add_parser("measure", parents=[common], help="measure a graph file")
    mea.add_argument("--graph", type=Path, required=True)
    mea.add_argument("--op", required=True,
                     choices=("girth", "stationary", "mixing", "spectral", "hitting", "hitting-bound"))
    mea.add_argument("--start", type=int, default=0)
    mea.add_argument("--epsilon", type=float, default=0.25)
    mea.add_argument("--laziness", type=float, default=0.5)
    mea.add_argument("--t-max", type=int, default=100_000)
    mea.add_argument("--cutoff", type=int, default=None)
    mea.add_argument("--set", dest="vset", default=None,
                     help="comma-separated vertex ids for hitting ops")
    mea.add_argument("--t", type=int, default=100)
    mea.add_argument("--trials", type=int, default=1000)

    qi = sub.add_parser("qi", parents=[common], help="stretch label-1 edges and verify")
    qi.add_argument("--graph", type=Path, required=True)
    qi.add_argument("--stretch", type=int, default=10)
    qi.add_argument("--samples", type=int, default=10_000)
    qi.add_argument("--graph-out", type=Path, default=None)

    sub.add_parser("experiment", parents=[common], help="run the full size sweep")
    sub.add_parser("oracle", parents=[common], help="compare sparse routines with dense oracles")
    return parser


def _emit(obj, args) -> None:
    text = dumps(obj)
    if args.out is not None:
        args.out.write_text(text)
    if not args.quiet or args.out is None:
        sys.stdout.write(text)


def _cmd_generate(args) -> int:
    from .expander import generate_regular_expander
    from .gluing import build_gn
    from .qi import apply_quasi_isometry

    seed = args.seed if args.seed is not None else 0
    r = args.radius if args.radius is not None else 4
    gmin = args.girth_min if args.girth_min is not None else 2 * r + 1
    h = generate_regular_expander(args.n, args.d, gmin, seed=seed, method=args.method)
    meta = {"kind": args.kind, "seed": seed, "n_h": h.num_vertices, "girth_min": gmin,
            "method": args.method}
    g = h
    if args.kind in ("gn", "q"):
        g, gm = build_gn(h, 0, 0, r, depth_min=args.depth_min, bridge_len=args.bridge_len,
                         delta=args.delta)
        meta.update(gm.to_json())
        if args.kind == "q":
            g, qmap = apply_quasi_isometry(g, list(gm.balls), args.stretch)
            meta["stretch"] = args.stretch
            meta["qi_params"] = [qmap.a, qmap.b]
    text = g.to_text()
    if args.out is not None:
        args.out.write_text(text)
        Path(str(args.out) + ".meta.json").write_text(dumps(meta))
    else:
        sys.stdout.write(text)
    return 0


def _parse_set(text: str | None, n: int) -> VertexSet:
    if not text:
        raise MixgapError("--set is required for hitting ops")
    return VertexSet.of([int(x) for x in text.split(",") if x.strip()], num_vertices=n)


def _cmd_measure(args) -> int:
    from .montecarlo import empirical_hitting_time, hitting_time_bound
    from .spectral import spectral_gap
    from .walk import WalkConfig, mixing_time, stationary

    g = Graph.read(args.graph)
    seed = args.seed if args.seed is not None else 0
    cfg = WalkConfig(args.laziness, seed, args.t_max)
    if args.op == "girth":
        val = girth(g, args.cutoff)
        print(val if val is not None else f">{args.cutoff}" if args.cutoff is not None else "inf")
        return 0
    if args.op == "stationary":
        pi = stationary(g)
        if args.format == "csv":
            from .walk import distribution_csv
            sys.stdout.write(distribution_csv(pi))
            return 0
        _emit({"pi": pi.tolist()}, args)
        return 0
    if args.op == "mixing":
        res = mixing_time(g, args.start, args.epsilon, cfg)
        if args.format == "csv":
            sys.stdout.write("t,distance\n" + "".join(f"{t},{format_float(d)}\n" for t, d in res.profile))
            return 0
        _emit({"t_mix": res.t_mix, "epsilon": res.epsilon, "mixed": res.mixed,
               "profile": [[t, d] for t, d in res.profile]}, args)
        return 0
    if args.op == "spectral":
        sg = spectral_gap(g, args.laziness, seed=seed)
        _emit({"gap": sg.gap, "lambda2": sg.lambda2, "abs_gap": sg.abs_gap,
               "iterations": sg.iterations, "converged": sg.converged}, args)
        return 0
    s = _parse_set(args.vset, g.num_vertices)
    if args.op == "hitting-bound":
        hb = hitting_time_bound(g, s, args.t)
        _emit({"pi_s": hb.pi_s, "probability_bound": hb.probability_bound,
               "mixing_lower_scale": hb.mixing_lower_scale}, args)
        return 0
    hs = empirical_hitting_time(g, s, args.start, args.trials, cfg)
    _emit({"mean": hs.mean, "mean_stderr": hs.mean_stderr, "median": hs.median,
           "censored": hs.censored, "curve": [[int(t), float(p)] for t, p in zip(hs.curve_t, hs.curve_p)]},
          args)
    return 0


def _cmd_qi(args) -> int:
    from .qi import apply_edge_label_stretch, verify_quasi_isometry

    g = Graph.read(args.graph)
    g2, qmap = apply_edge_label_stretch(g, args.stretch)
    rep = verify_quasi_isometry(g, g2, qmap, args.samples, args.seed or 0)
    if args.graph_out is not None:
        g2.write(args.graph_out)
    _emit({"violations": rep.violations, "pairs_checked": rep.pairs_checked,
           "max_ratio": rep.max_ratio, "min_ratio": rep.min_ratio,
           "near_surjective": rep.near_surjective, "a": qmap.a, "b": qmap.b,
           "vertices": g2.num_vertices, "stretched_edges": len(qmap.subdivided)}, args)
    return 0


def _cmd_experiment(args) -> int:
    if args.config is None:
        cfg = ExperimentConfig()
    else:
        try:
            text = args.config.read_text()
        except OSError as exc:
            print(f"mixgap: cannot read config: {exc}", file=sys.stderr)
            return 1
        cfg = ExperimentConfig.from_json(text)
    if args.seed is not None:
        cfg.seed = args.seed
    report = run_experiment(cfg)
    text = emit_report(report, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return 2 if report.has_errors else 0


def _cmd_oracle(args) -> int:
    from .oracle import run_oracles

    rows = run_oracles(args.seed or 0)
    for name, got, ref, ok in rows:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: sparse={format_float(got)} dense={format_float(ref)}")
    return 0 if all(r[3] for r in rows) else 2


COMMANDS = {"generate": _cmd_generate, "measure": _cmd_measure, "qi": _cmd_qi,
            "experiment": _cmd_experiment, "oracle": _cmd_oracle}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except MixgapError as exc:
        print(f"mixgap: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"mixgap: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
