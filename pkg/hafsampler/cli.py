"""hafsampler command line.

Subcommands::

    hafsampler hafnian k4.csv
    hafsampler encode g.edges --photons 10 --eta 0.7 --out program.json
    hafsampler dist g.edges --k 8 --kind gbs --out table.csv
    hafsampler sample g.edges --sampler qi --k 8 --count 100000 --seed 42 --out samples.csv
    hafsampler densest --n 20 --k 8 --p 0.3 --graphs 100 --samples 100 \\
        --samplers qi,uniform,gbs --seed 1 --out densest.csv
    hafsampler clique --graph g.edges --weights w.txt --alpha 1.0 --samples 1000 \\
        --iters 0,2,8 --seed 1 --out clique.csv
    hafsampler replay densest.csv --out again.csv

Failures print one line, ``error: <kind>: <detail>``, on stderr and exit
with status 1 (2 for bad arguments). ``--out -`` (the default) writes to
standard output.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from typing import Callable

from . import __version__
from ._config import get_setting
from ._encoding import build_edge_model, compensate_spec, squeeze_spec
from ._errors import HafsamplerError, UsageError
from ._experiments import (CliqueConfig, CliqueResult, DensestConfig, DensestResult,
                           clique_experiment, densest_experiment, planted_source,
                           resolve_clique_instance)
from ._graph import apply_vertex_weights
from ._hafnian import hafnian
from ._io import FORMATS, infer_format, load_graph, load_matrix, load_weights
from ._manifest import RunManifest, read_manifest, write_csv, write_json
from ._types import Graph, SamplerKind
from .samplers import create_sampler, exact_distribution

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _kinds(text: str) -> list[str]:
    try:
        return [SamplerKind.parse(t).value for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}") from None


def _planted(text: str) -> tuple[int, float, int]:
    try:
        n, p, size = text.split(",")
        return int(n), float(p), int(size)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected n,p,size, got {text!r}") from None


def _big_int(text: str) -> int:
    # budgets are often written as 1e8
    value = float(text)
    if not value.is_integer() or value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(value)


def _read_graph(path: str, fmt: str | None) -> Graph:
    return load_graph(path, format=fmt)


def _manifest(command: str, config: dict) -> RunManifest:
    return RunManifest(command=command, config=config, seed=config.get("seed"),
                       version=__version__)


# ---------------------------------------------------------------------------
# Runners: rebuild an output from its canonical config (used by replay too)
# ---------------------------------------------------------------------------

def _run_encode(config: dict, out: str, threads: int | None) -> None:
    g = _read_graph(config["graph"], config["format"])
    if config["weights"] is not None:
        g = apply_vertex_weights(g, load_weights(config["weights"], g.n), config["alpha"])
    model = build_edge_model(g)
    payload: dict = {
        "n": g.n,
        "num_edges": model.num_edges,
        "total_weight": model.total_weight,
        "trace_coeff": model.trace_coeff,
        "edges": [{"i": i, "j": j, "weight": w, "q": float(q)}
                  for (i, j, w), q in zip(model.edges, model.q)],
    }
    if config["photons"] is not None:
        spec = squeeze_spec(g, config["photons"])
        payload["squeezing"] = {"lossless": spec.to_dict()}
        if config["eta"] != 1.0:
            payload["squeezing"]["compensated"] = compensate_spec(spec, config["eta"]).to_dict()
    write_json(_manifest("encode", config), payload, out)


def _run_dist(config: dict, out: str, threads: int | None) -> None:
    g = _read_graph(config["graph"], config["format"])
    table = exact_distribution(g, config["k"], config["kind"],
                               max_enum=config["max_enum"], threads=threads)
    write_csv(_manifest("dist", config), ["vertices", "weight", "probability"],
              table.to_rows(), out, extra={"normalization": repr(table.Z)})


def _run_sample(config: dict, out: str, threads: int | None) -> None:
    g = _read_graph(config["graph"], config["format"])
    kind = SamplerKind.parse(config["sampler"])
    options: dict = {}
    if kind is SamplerKind.QI:
        options = {"max_attempts": config["max_attempts"],
                   "route_photons": config["route_photons"]}
    elif kind is SamplerKind.GBS:
        options = {"max_enum": config["max_enum"], "threads": threads}
    sampler = create_sampler(kind, g, config["k"], **options)
    rows = sampler.sample(config["count"], config["seed"], threads=threads)
    column = "counts" if kind is SamplerKind.IPS else "vertices"
    write_csv(_manifest("sample", config), [column],
              ([";".join(str(int(v)) for v in row)] for row in rows), out)


def _run_densest(config: dict, out: str, threads: int | None) -> None:
    result: DensestResult = densest_experiment(DensestConfig.from_dict(config), threads=threads)
    extra = {"skipped": ",".join(kd.value for kd in result.skipped)} if result.skipped else None
    write_csv(_manifest("densest", config), result.COLUMNS, result.rows(), out, extra=extra)


def _run_clique(config: dict, out: str, threads: int | None) -> None:
    cfg = CliqueConfig.from_dict(config)
    g, w = resolve_clique_instance(cfg)
    result: CliqueResult = clique_experiment(cfg, g, w, threads=threads)
    extra = result.metadata()
    if result.skipped:
        extra["skipped"] = ",".join(kd.value for kd in result.skipped)
    write_csv(_manifest("clique", config), result.COLUMNS, result.rows(), out, extra=extra)


_RUNNERS: dict[str, Callable[[dict, str, int | None], None]] = {
    "encode": _run_encode,
    "dist": _run_dist,
    "sample": _run_sample,
    "densest": _run_densest,
    "clique": _run_clique,
}


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def _graph_format(args) -> str:
    return args.format or infer_format(args.graph)


def _cmd_hafnian(args) -> int:
    fmt = _graph_format(args)
    matrix = load_matrix(args.graph) if fmt == "matrix-csv" else load_graph(args.graph, fmt).adj
    print(format(hafnian(matrix), ".17g"))
    return 0


def _cmd_encode(args) -> int:
    if args.eta != 1.0 and args.photons is None:
        raise UsageError("--eta needs --photons")
    if not 0.0 < args.eta <= 1.0:
        raise UsageError(f"--eta must lie in (0, 1], got {args.eta}")
    config = {"graph": args.graph, "format": _graph_format(args), "weights": args.weights,
              "alpha": get_setting("alpha", args.alpha), "photons": args.photons,
              "eta": args.eta}
    _run_encode(config, args.out, args.threads)
    return 0


def _cmd_dist(args) -> int:
    config = {"graph": args.graph, "format": _graph_format(args), "k": args.k,
              "kind": args.kind, "max_enum": get_setting("max_enum", args.max_enum)}
    _run_dist(config, args.out, args.threads)
    return 0


def _cmd_sample(args) -> int:
    if args.k is None and args.sampler != SamplerKind.IPS.value:
        raise UsageError(f"--k is required for the {args.sampler} sampler")
    if args.sampler == SamplerKind.IPS.value and args.k is not None:
        logger.warning("--k is ignored by the ips sampler; rows are full occupancy vectors")
    config = {"graph": args.graph, "format": _graph_format(args), "sampler": args.sampler,
              "k": args.k if args.sampler != SamplerKind.IPS.value else None,
              "count": args.count, "seed": args.seed,
              "max_attempts": get_setting("max_attempts", args.max_attempts),
              "max_enum": get_setting("max_enum", args.max_enum),
              "route_photons": args.route_photons}
    _run_sample(config, args.out, args.threads)
    return 0


def _cmd_densest(args) -> int:
    cfg = DensestConfig(n=args.n, p=args.p, k=args.k, graphs=args.graphs,
                        samples_per_graph=args.samples, samplers=tuple(args.samplers),
                        seed=args.seed, max_enum=get_setting("max_enum", args.max_enum),
                        strict=args.strict_budget)
    _run_densest(cfg.to_dict(), args.out, args.threads)
    return 0


def _cmd_clique(args) -> int:
    if (args.graph is None) == (args.planted is None):
        raise UsageError("give exactly one of --graph and --planted")
    graph = args.graph if args.planted is None else planted_source(*args.planted)
    cfg = CliqueConfig(graph=graph, weights=args.weights,
                       alpha=get_setting("alpha", args.alpha),
                       samples=args.samples, iterations=tuple(args.iters),
                       seed=args.seed, samplers=tuple(args.samplers), k=args.k,
                       max_enum=get_setting("max_enum", args.max_enum),
                       strict=args.strict_budget)
    _run_clique(cfg.to_dict(), args.out, args.threads)
    return 0


def _cmd_replay(args) -> int:
    manifest = read_manifest(args.file)
    runner = _RUNNERS.get(manifest.command)
    if runner is None:
        raise UsageError(f"cannot replay command {manifest.command!r}")
    if manifest.version != __version__:
        logger.warning("output was written by hafsampler %s, replaying with %s",
                       manifest.version, __version__)
    runner(manifest.config, args.out, args.threads)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS,
                        help="log progress to stderr (-vv for debug output)")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker processes (default: 1); outputs do not depend on it")

    parser = _Parser(prog="hafsampler", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter,
                     parents=[common])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def graph_args(p, out: bool = True):
        p.add_argument("graph", help="edge list (i j [w] per line) or matrix CSV")
        p.add_argument("--format", choices=FORMATS, default=None,
                       help="input format (default: matrix-csv for .csv, else edge-list)")
        if out:
            p.add_argument("--out", default="-", help="output file ('-' for stdout)")

    p = sub.add_parser("hafnian", parents=[common], help="print the hafnian of a matrix")
    graph_args(p, out=False)
    p.set_defaults(func=_cmd_hafnian)

    p = sub.add_parser("encode", parents=[common],
                       help="compile a graph into the edge model (JSON)")
    graph_args(p)
    p.add_argument("--weights", default=None, help="vertex weight file (one value per line)")
    p.add_argument("--alpha", type=float, default=None,
                   help="vertex weighting strength for Omega = 1 + alpha*w")
    p.add_argument("--photons", type=float, default=None,
                   help="also calibrate GBS squeezing to this mean photon number")
    p.add_argument("--eta", type=float, default=1.0,
                   help="transmission to compensate squeezing for (0 < eta <= 1)")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("dist", parents=[common], help="exact distribution over k-subsets")
    graph_args(p)
    p.add_argument("--k", type=int, required=True, help="subset size")
    p.add_argument("--kind", choices=[kd.value for kd in SamplerKind], required=True)
    p.add_argument("--max-enum", type=_big_int, default=None,
                   help="hafnian-product budget (default 1e8)")
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("sample", parents=[common], help="draw samples from one sampler")
    graph_args(p)
    p.add_argument("--sampler", choices=[kd.value for kd in SamplerKind], required=True)
    p.add_argument("--k", type=int, default=None, help="subset size (not used by ips)")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-attempts", type=_big_int, default=None,
                   help="qi rejection attempts per sample (default 1e6)")
    p.add_argument("--max-enum", type=_big_int, default=None)
    p.add_argument("--route-photons", action="store_true",
                   help="qi: route each photon of a circuit to either endpoint at random")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("densest", parents=[common], help="densest-k-subgraph experiment")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--graphs", type=int, required=True)
    p.add_argument("--samples", type=int, required=True, help="samples per graph")
    p.add_argument("--samplers", type=_kinds, default=["qi", "uniform", "gbs"])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-enum", type=_big_int, default=None)
    p.add_argument("--strict-budget", action="store_true",
                   help="fail instead of skipping gbs when over the enumeration budget")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_densest)

    p = sub.add_parser("clique", parents=[common], help="maximum-weight clique experiment")
    p.add_argument("--graph", default=None, help="graph file")
    p.add_argument("--planted", type=_planted, default=None, metavar="N,P,SIZE",
                   help="synthetic planted-clique instance instead of --graph")
    p.add_argument("--weights", default=None, help="vertex weight file (default: all ones)")
    p.add_argument("--alpha", type=float, default=None,
                   help="vertex weighting strength (default: the alpha setting)")
    p.add_argument("--samples", type=int, required=True, help="seeded search runs per sampler")
    p.add_argument("--iters", type=_ints, default=[0, 2, 8],
                   help="comma-separated iteration budgets T")
    p.add_argument("--samplers", type=_kinds, default=["qi", "uniform", "gbs"])
    p.add_argument("--k", type=int, default=None,
                   help="sample size (default: even size nearest the optimum clique)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-enum", type=_big_int, default=None)
    p.add_argument("--strict-budget", action="store_true")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_clique)

    p = sub.add_parser("replay", parents=[common],
                       help="re-run the command recorded in an output file")
    p.add_argument("file")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_replay)
    return parser


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING if verbose <= 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, force=True,
                        format="%(levelname)s %(name)s: %(message)s")


def parse_and_dispatch(argv: list[str] | None = None) -> int:
    """Run one command; returns the process exit status."""
    try:
        args = build_parser().parse_args(argv)
        # options shared by the main parser and every subcommand
        args.verbose = getattr(args, "verbose", 0)
        args.threads = getattr(args, "threads", None)
        _configure_logging(args.verbose)
        start = time.perf_counter()
        status = args.func(args)
        logger.info("%s finished in %.3f s", args.command, time.perf_counter() - start)
        return status
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 0
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    except HafsamplerError as exc:
        print(f"error: {exc.kind}: {exc.detail}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: invalid-argument: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(parse_and_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
