"""``pegembed`` command line.

Exit codes: 0 success, 1 validation or embedding failure, 2 usage error
(bad flags, capacity exceeded, unreadable input).
"""
from __future__ import annotations

import argparse
import json
import sys
import xml.dom.minidom
from pathlib import Path

from . import __version__
from .baseline import HeuristicConfig, HeuristicFailure, heuristic_embed
from .bench import HEADER, BenchConfig, read_csv, run_bench, to_csv
from .embedder import CapacityError, EmbedderConfig, Embedding, EmbeddingError, capacity, embed_biclique
from .hamiltonian import LogicalIsing, brute_force_ground, check_embedding
from .lattice import (HardwareGraph, LatticeParams, build_lattice,
                      disable_qubits, export_edges, import_edges)
from .render import render_svg
from .validator import chain_metrics, validate

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _read_ids(path: str) -> list[int]:
    ids = []
    for lineno, line in enumerate(_read(path).splitlines(), 1):
        for tok in line.split("#", 1)[0].split():
            try:
                ids.append(int(tok))
            except ValueError:
                raise UsageError(f"{path}:{lineno}: not a qubit id: {tok!r}") from None
    return ids


def _lattice_from_args(args) -> HardwareGraph:
    try:
        g = build_lattice(LatticeParams(args.M, args.alpha))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if getattr(args, "disable_file", None):
        try:
            g = disable_qubits(g, _read_ids(args.disable_file))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return g


def _graph_for(e: Embedding, edges_path: str | None) -> HardwareGraph:
    if edges_path:
        params = e.lattice_params() if {"M", "alpha"} <= e.params.keys() and e.params["M"] else None
        try:
            return import_edges(_read(edges_path), params)
        except ValueError as exc:  # parse errors and out-of-range labels
            raise UsageError(f"{edges_path}: {exc}") from None
    try:
        return build_lattice(e.lattice_params())
    except (KeyError, TypeError, ValueError):
        raise UsageError("embedding has no lattice parameters; pass --edges") from None


def _summary(g: HardwareGraph) -> dict:
    d = {"qubits": g.n_qubits, "couplers": g.n_couplers, "disabled": len(g.disabled),
         "max_degree": int(g.degree().max()) if g.n_qubits else 0}
    if g.params is not None:
        d = {"M": g.params.M, "alpha": g.params.alpha, **d}
    return d


# subcommands -----------------------------------------------------------------


def cmd_lattice(args) -> int:
    if args.action == "import":
        if not args.input:
            raise UsageError("lattice import needs --in")
        params = LatticeParams(args.M, args.alpha) if args.M else None
        try:
            g = import_edges(_read(args.input), params)
        except ValueError as exc:
            raise UsageError(f"{args.input}: {exc}") from None
        _emit(_summary(g))
        return EXIT_OK
    if args.M is None:
        args.M = 16
    g = _lattice_from_args(args)
    if args.action == "export":
        if not args.out:
            raise UsageError("lattice export needs --out")
        _write(args.out, export_edges(g))
        back = import_edges(_read(args.out), g.params)
        if back.coupler_set() != g.coupler_set():
            print(f"error: {args.out} does not read back to the same graph", file=sys.stderr)
            return EXIT_INVALID
    _emit(_summary(g))
    return EXIT_OK


def cmd_embed(args) -> int:
    g = _lattice_from_args(args)
    if args.algorithm == "structured":
        try:
            cfg = EmbedderConfig(g.params, args.m, args.n, args.visible_start)
            e = embed_biclique(args.visible, args.hidden, cfg, g)
        except CapacityError as exc:
            v_max, h_max = capacity(cfg)
            raise UsageError(f"{exc}; capacity is V <= {v_max}, H <= {h_max}") from None
        except EmbeddingError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        hcfg = HeuristicConfig(seed=args.seed, max_tries=args.max_tries, timeout=args.timeout)
        try:
            e = heuristic_embed(args.visible, args.hidden, g, hcfg)
        except HeuristicFailure as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID

    text = e.to_json()
    if args.out:
        _write(args.out, text)
        text = _read(args.out)
    else:
        sys.stdout.write(text)
    report = validate(Embedding.from_json(text), g, args.visible, args.hidden)
    if not report.is_valid:
        print(json.dumps(report.to_dict()), file=sys.stderr)
        return EXIT_INVALID
    if args.out:
        _emit({"out": args.out, "valid": True, **chain_metrics(e).to_dict()})
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        e = Embedding.from_json(_read(args.embedding))
    except (ValueError, AttributeError) as exc:
        _emit({"is_valid": False, "error": f"unreadable embedding: {exc}"})
        return EXIT_INVALID
    g = _graph_for(e, args.edges)
    V = e.V if args.visible is None else args.visible
    H = e.H if args.hidden is None else args.hidden
    report = validate(e, g, V, H)
    out = report.to_dict()
    out["metrics"] = chain_metrics(e).to_dict()
    _emit(out)
    return EXIT_OK if report.is_valid else EXIT_INVALID


def _parse_sizes(text: str) -> list[tuple[int, int]]:
    sizes = []
    for tok in text.split(","):
        tok = tok.strip().lower()
        try:
            v, _, h = tok.partition("x")
            sizes.append((int(v), int(h or v)))
        except ValueError:
            raise UsageError(f"bad size {tok!r}; use N or VxH, comma separated") from None
    return sizes


def cmd_bench(args) -> int:
    g = _lattice_from_args(args)
    try:
        cfg = BenchConfig(sizes=_parse_sizes(args.sizes), trials=args.trials,
                          algorithms=tuple(a.strip() for a in args.algorithms.split(",")),
                          seed=args.seed, m=args.m, n=args.n,
                          heuristic_tries=args.max_tries, heuristic_timeout=args.timeout)
        records = run_bench(cfg, g)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = to_csv(records)
    if args.csv:
        _write(args.csv, text)
        rows = read_csv(_read(args.csv))
        if len(rows) != len(records) or tuple(rows[0])[:len(HEADER)] != HEADER:
            print(f"error: {args.csv} did not read back correctly", file=sys.stderr)
            return EXIT_INVALID
    sys.stdout.write(text)
    return EXIT_OK


def cmd_render(args) -> int:
    try:
        e = Embedding.from_json(_read(args.embedding))
    except ValueError as exc:
        raise UsageError(f"unreadable embedding: {exc}") from None
    g = _graph_for(e, args.edges)
    svg = render_svg(e, g)
    _write(args.svg, svg)
    back = _read(args.svg)
    try:
        xml.dom.minidom.parseString(back)
    except Exception as exc:  # expat raises its own error type
        print(f"error: {args.svg} is not well-formed: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if back != svg:
        print(f"error: {args.svg} did not read back identically", file=sys.stderr)
        return EXIT_INVALID
    _emit({"svg": args.svg, "bytes": len(svg.encode("utf-8"))})
    return EXIT_OK


def cmd_oracle(args) -> int:
    try:
        model = LogicalIsing.from_dict(json.loads(_read(args.ising)))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad Ising file: {exc}") from None
    try:
        if not args.check_embedding:
            e_min, states = brute_force_ground(model)
            _emit({"energy": e_min, "ground_states": states.tolist()})
            return EXIT_OK
        e = Embedding.from_json(_read(args.check_embedding))
        res = check_embedding(model, e, _graph_for(e, args.edges), args.chain_strength)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res["logical_ground_states"] = [list(s) for s in res["logical_ground_states"]]
    res["unembedded_ground_states"] = [list(s) for s in res["unembedded_ground_states"]]
    _emit(res)
    return EXIT_OK if res["match"] else EXIT_INVALID


# parser ----------------------------------------------------------------------


def _add_lattice_flags(p, default_M=16):
    p.add_argument("--M", type=int, default=default_M, help="lattice size (default 16)")
    p.add_argument("--alpha", type=int, default=12, help="wires per cell (default 12)")
    p.add_argument("--disable-file", help="file of qubit ids to disable")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pegembed", description="Biclique embedding on G(M, alpha) lattices.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice", help="generate, export or import a lattice")
    p.add_argument("action", choices=("gen", "export", "import"))
    _add_lattice_flags(p, default_M=None)
    p.add_argument("--out", help="edge-list file to write (export)")
    p.add_argument("--in", dest="input", help="edge-list file to read (import)")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("embed", help="embed K(V, H)")
    p.add_argument("--visible", type=int, required=True)
    p.add_argument("--hidden", type=int, required=True)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--visible-start", type=int, default=None, help="first visible wire (default alpha)")
    p.add_argument("--algorithm", choices=("structured", "heuristic"), default="structured")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-tries", type=int, default=10)
    p.add_argument("--timeout", type=float, default=None, help="heuristic time limit in seconds")
    p.add_argument("--out", help="embedding JSON to write (default stdout)")
    _add_lattice_flags(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("validate", help="check an embedding")
    p.add_argument("--embedding", required=True)
    p.add_argument("--edges", help="hardware edge list (default: lattice named in the embedding)")
    p.add_argument("--visible", type=int, default=None)
    p.add_argument("--hidden", type=int, default=None)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="time structured vs heuristic embedding")
    p.add_argument("--sizes", default="40,60,80,100,120", help="N or VxH, comma separated")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algorithms", default="structured,heuristic")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--max-tries", type=int, default=10)
    p.add_argument("--timeout", type=float, default=None, help="per-trial heuristic time limit (s)")
    p.add_argument("--csv", help="CSV file to write (also printed)")
    _add_lattice_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("render", help="draw an embedding as SVG")
    p.add_argument("--embedding", required=True)
    p.add_argument("--svg", required=True)
    p.add_argument("--edges", help="hardware edge list")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("oracle", help="brute-force ground states, optionally through an embedding")
    p.add_argument("--ising", required=True, help='logical model JSON {"V", "H", "h", "J": [[i, j, v]]}')
    p.add_argument("--check-embedding", help="embedding JSON to verify against the logical oracle")
    p.add_argument("--chain-strength", type=float, default=None)
    p.add_argument("--edges", help="hardware edge list")
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pegembed {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
