"""Command-line entry point.

Subcommands:
  transform   apply the forward (or inverse) transform to a signal file
  select      choose a sampling set and report its qualification/margin
  experiment  run a JSON-configured experiment into an output directory

Exit codes: 0 success (and all built-in assertions pass), 1 assertion
failure, 2 usage or validation error, 3 numerical failure. Every run
writes a manifest next to its outputs so it can be reproduced exactly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .errors import NumericalError, ValidationError
from .graphs import Graph, adjacency, cycle_graph, laplacian, load_graph, random_geometric_graph, read_signal, write_signal
from .localization import SpectralSet, spectral_limiter
from .operator import GlctParams, build_operator
from .runner import run_experiment, write_manifest
from .sampling import BandlimitSpec, Strategy, greedy_select, is_qualified, recoverability_margin
from . import __version__


def _add_graph_flags(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--graph", metavar="PATH", help="edge-list file")
    group.add_argument("--cycle", type=int, metavar="N", help="undirected cycle on N vertices")
    group.add_argument(
        "--geometric", metavar="N,RADIUS,SEED", help="random geometric graph in the unit square"
    )


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=1.0, help="fractional order (default 1)")
    p.add_argument("--beta", type=float, default=1.0, help="scaling parameter (default 1)")
    p.add_argument(
        "--chirp", metavar="L,F", default="0,0", help="chirp slope and offset (default 0,0)"
    )
    p.add_argument(
        "--laplacian", action="store_true", help="decompose the Laplacian instead of the adjacency"
    )


def _parse_graph(args) -> Graph:
    if args.graph:
        if not os.path.exists(args.graph):
            raise ValidationError(f"graph file not found: {args.graph}")
        return load_graph(args.graph)
    if args.cycle is not None:
        return cycle_graph(args.cycle)
    try:
        n, radius, seed = args.geometric.split(",")
        return random_geometric_graph(int(n), float(radius), int(seed))
    except ValueError:
        raise ValidationError(f"expected --geometric N,RADIUS,SEED, got {args.geometric!r}")


def _parse_params(args) -> GlctParams:
    try:
        l, f = (float(v) for v in args.chirp.split(","))
    except ValueError:
        raise ValidationError(f"expected --chirp L,F, got {args.chirp!r}")
    return GlctParams(alpha=args.alpha, beta=args.beta, chirp_l=l, chirp_f=f)


def _build(args):
    g = _parse_graph(args)
    params = _parse_params(args)
    source = laplacian(g) if args.laplacian else adjacency(g)
    return g, params, build_operator(source, params)


def _manifest_config(args, command: str) -> dict:
    cfg = {"command": command}
    for key in ("graph", "cycle", "geometric", "alpha", "beta", "chirp", "laplacian",
                "bandwidth", "samples", "strategy", "seed", "inverse"):
        if hasattr(args, key):
            cfg[key] = getattr(args, key)
    cfg.setdefault("seed", getattr(args, "seed", None))
    return cfg


def _cmd_transform(args) -> int:
    g, params, op = _build(args)
    x = read_signal(args.signal, n=g.n)
    y = op.inverse @ x if args.inverse else op.forward @ x
    write_signal(y, args.out)
    write_manifest(_manifest_config(args, "transform"), Path(args.out).parent)
    return 0


def _cmd_select(args) -> int:
    g, params, op = _build(args)
    spec = BandlimitSpec(args.bandwidth)
    strategy = Strategy(args.strategy)
    d = greedy_select(strategy, op, spec, args.samples, seed=args.seed, threads=args.threads)
    b = spectral_limiter(SpectralSet.first(args.bandwidth, op.n), op)
    payload = {
        "indices": list(d.set),
        "qualified": is_qualified(d, op, spec),
        "recoverability_margin": recoverability_margin(d, b),
        "strategy": strategy.value,
        "bandwidth": args.bandwidth,
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    write_manifest(_manifest_config(args, "select"), Path(args.out).parent)
    return 0


def _cmd_experiment(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"config file not found: {args.config}")
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON config at line {exc.lineno} column {exc.colno}: {exc.msg}")
    code, _ = run_experiment(cfg, args.out)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="glctkit", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"glctkit {__version__}")
    parser.add_argument(
        "--threads", type=int, default=int(os.environ.get("GLCTKIT_THREADS", "1")),
        help="worker threads for selection scoring (default GLCTKIT_THREADS or 1)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transform", help="apply the transform to a signal CSV")
    _add_graph_flags(t)
    _add_param_flags(t)
    t.add_argument("--signal", required=True, help="input CSV (vertex,real,imag)")
    t.add_argument("--out", required=True, help="output CSV path")
    t.add_argument("--inverse", action="store_true", help="apply the inverse transform")
    t.set_defaults(func=_cmd_transform)

    s = sub.add_parser("select", help="choose a sampling set")
    _add_graph_flags(s)
    _add_param_flags(s)
    s.add_argument("--bandwidth", type=int, required=True, help="band size |F|")
    s.add_argument("--samples", type=int, required=True, help="number of samples m")
    s.add_argument("--strategy", required=True,
                   choices=[st.value for st in Strategy if st is not Strategy.EXHAUSTIVE])
    s.add_argument("--seed", type=int, default=0, help="seed for the random strategy")
    s.add_argument("--out", required=True, help="output JSON path")
    s.set_defaults(func=_cmd_select)

    e = sub.add_parser("experiment", help="run a JSON-configured experiment")
    e.add_argument("--config", required=True, help="experiment config JSON")
    e.add_argument("--out", required=True, help="output directory")
    e.set_defaults(func=_cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
