"""Command-line entry point: decompose, duality, improve, verify, bench, generate."""

from __future__ import annotations

import argparse
import sys
from typing import Any, Sequence

import numpy as np

from .config import RunConfig
from .decomposer import RunFailure, baker_decompose
from .distance import dual_distance
from .flow import ChainOutcome, dual1_outcome, pq_structure
from .generators import generate
from .graph import InputError, validate_tree_decomposition
from .improve import EnumerationTooLarge, MinorWitness, SamplingFailure, improve_enumerate, improve_sample
from .io import RESULT_SCHEMA, GraphFile, dumps, load_graph, read_json, result_to_json, td_from_json
from .oracles import TREEWIDTH_CAP, exact_treewidth, monte_carlo_success
from .planar import balanced_node_for_weight, three_path_decomposition
from .rng import Stream

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_RUN = 2


class _Failed(Exception):
    def __init__(self, code: int, payload: dict[str, Any]) -> None:
        super().__init__(payload.get("error", ""))
        self.code = code
        self.payload = payload


def _config(args: argparse.Namespace) -> RunConfig:
    base: dict[str, Any] = {}
    if getattr(args, "config", None):
        data = read_json(args.config)
        if not isinstance(data, dict):
            raise InputError("config file must hold a JSON object")
        base.update(data)
    for name in ("k", "d", "seed", "trials", "h"):
        value = getattr(args, name, None)
        if value is not None:
            base[name] = value
    try:
        return RunConfig.from_dict(base)
    except TypeError as exc:
        raise InputError(f"bad config: {exc}") from None


def _vertex_list(gf: GraphFile, text: str | None) -> list[int]:
    if not text:
        return []
    if text in gf.sets:
        return list(gf.sets[text])
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"{text!r} is neither a set name nor a vertex list") from None
    gf.graph.check_vertices(out)
    return out


def _emit(payload: dict[str, Any], out: str | None) -> None:
    text = dumps(payload)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# subcommands


def cmd_decompose(args: argparse.Namespace) -> dict[str, Any]:
    gf = load_graph(args.graph)
    cfg = _config(args)
    if gf.graph.rotation is None:
        raise InputError("decompose needs a rotation system")
    try:
        res = baker_decompose(gf.graph, cfg.k, cfg, Stream(cfg.seed))
    except RunFailure as exc:
        raise _Failed(EXIT_RUN, {"error": "run-failure", "reason": str(exc), "seed": cfg.seed}) from None
    return result_to_json(gf, res, cfg.to_dict(), cfg.seed)


def _outcome_json(out) -> dict[str, Any]:
    if isinstance(out, ChainOutcome):
        return {"kind": "chain", "chain": [sorted(C) for C in out.separators]}
    return {
        "kind": "paths",
        "paths": [list(P) for P in out.paths],
        "retained": [None if Q is None else sorted(Q) for Q in out.Q],
    }


def cmd_duality(args: argparse.Namespace) -> dict[str, Any]:
    gf = load_graph(args.graph)
    G = gf.graph
    z0 = _vertex_list(gf, args.z0)
    if args.p is None:
        pq = pq_structure(G, args.s, args.t, args.q)
        return {
            "kind": "pq-structure",
            "p": pq.p,
            "q": pq.q,
            "chain": [sorted(C) for C in pq.chain],
            "paths": [list(P) for P in pq.paths],
        }
    if args.d == 0:
        if args.k is None:
            raise InputError("--k is required together with --p")
        out = dual1_outcome(G, args.s, args.t, z0, args.p, args.q, args.k)
    else:
        X = _vertex_list(gf, args.x)
        out = dual_distance(G, args.s, args.t, X, z0, args.p, args.q, args.d)
    return _outcome_json(out)


def _tuple_json(t) -> dict[str, Any]:
    return {
        "A": sorted(t.A),
        "B": sorted(t.B),
        "C": sorted(t.C),
        "C_tilde": sorted(t.C_tilde),
        "depth": t.depth,
        "early": t.early,
    }


def cmd_improve(args: argparse.Namespace) -> dict[str, Any]:
    gf = load_graph(args.graph)
    G = gf.graph
    cfg = _config(args)
    if G.rotation is None:
        raise InputError("improve needs a rotation system")
    z0 = _vertex_list(gf, args.z0)
    sd = three_path_decomposition(G, 0)
    cs = balanced_node_for_weight(sd, [1.0] * G.n)
    icfg = cfg.improve_config()
    try:
        if args.enumerate:
            family = improve_enumerate(G, cfg.k, z0, cs, icfg)
            tuples = sorted((_tuple_json(t) for t in family), key=dumps)
            return {"kind": "family", "size": len(tuples), "tuples": tuples}
        t = improve_sample(G, cfg.k, z0, cs, icfg, Stream(cfg.seed))
    except MinorWitness as exc:
        sets = [sorted(b) for b in exc.branch_sets]
        raise _Failed(EXIT_INPUT, {"error": "minor-witness", "branch_sets": sets}) from None
    except (SamplingFailure, EnumerationTooLarge) as exc:
        raise _Failed(EXIT_RUN, {"error": "run-failure", "reason": str(exc), "seed": cfg.seed}) from None
    return {"kind": "tuple", "tuple": _tuple_json(t), "seed": cfg.seed}


def verify_result(data: dict[str, Any]) -> dict[str, Any]:
    """Re-checks a decomposition result file; ``ok`` is False with a witness on failure."""
    if not isinstance(data, dict) or data.get("schema") != RESULT_SCHEMA:
        raise InputError("not a decomposition result")
    gf = GraphFile.from_json(data["graph"])
    G = gf.graph
    td = td_from_json(data)
    vertices = data.get("vertices", sorted(td.vertices()))
    G.check_vertices(vertices)
    checks: dict[str, Any] = {}
    rep = validate_tree_decomposition(G, td, vertices)
    checks["tree_decomposition"] = bool(rep)
    if not rep:
        w = rep.violated_condition
        return {"ok": False, "witness": list(w) if isinstance(w, tuple) else [w], "checks": checks}
    if set(td.vertices()) - set(vertices):
        return {"ok": False, "witness": ["bag-outside-vertex-set"], "checks": checks}
    cap = data.get("stats", {}).get("bag_cap")
    if isinstance(cap, (int, float)):
        checks["bag_cap"] = cap
        if rep.max_bag_size > cap:
            return {"ok": False, "witness": ["bag-too-large", rep.max_bag_size, cap], "checks": checks}
    checks["max_bag"] = rep.max_bag_size
    if G.n <= TREEWIDTH_CAP:
        tw = exact_treewidth(G.induced(vertices)[0])
        checks["treewidth"] = tw
        if tw > rep.max_bag_size - 1:
            return {"ok": False, "witness": ["treewidth-above-width", tw], "checks": checks}
    return {"ok": True, "witness": None, "checks": checks}


def cmd_verify(args: argparse.Namespace) -> dict[str, Any]:
    report = verify_result(read_json(args.result))
    if not report["ok"]:
        raise _Failed(EXIT_INPUT, {"error": "verification-failed", **report})
    return report


def cmd_bench(args: argparse.Namespace) -> dict[str, Any]:
    gf = load_graph(args.graph)
    G = gf.graph
    cfg = _config(args)
    if G.rotation is None:
        raise InputError("bench needs a rotation system")
    name = args.pattern
    if name and name in gf.clusters:
        pattern: Any = gf.family(name, 2 * cfg.d)
        shown: Any = [sorted(c) for c in pattern.clusters]
    elif name:
        pattern = _vertex_list(gf, name)
        shown = sorted(pattern)
    elif "Z" in gf.sets:
        pattern = gf.sets["Z"]
        shown = sorted(pattern)
    else:
        rng = np.random.default_rng(cfg.seed)
        pattern = sorted(int(v) for v in rng.choice(G.n, size=min(cfg.k, G.n), replace=False))
        shown = pattern
    threshold = args.threshold if args.threshold is not None else G.n
    rep = monte_carlo_success(G, cfg.k, pattern, cfg.trials, (args.missing, threshold), cfg, cfg.seed)
    out = rep.to_dict()
    out.update(config=cfg.to_dict(), pattern=shown)
    return out


def cmd_generate(args: argparse.Namespace) -> dict[str, Any]:
    params = {"rows": args.rows, "cols": args.cols, "n": args.n}
    params = {k: v for k, v in params.items() if v is not None}
    G = generate(args.kind, params, args.seed or 0)
    return GraphFile(G).to_json()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patternsparse", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, graph: bool = True) -> None:
        if graph:
            p.add_argument("graph", help="graph JSON file")
        p.add_argument("--seed", type=int)
        p.add_argument("--config", help="RunConfig JSON file")
        p.add_argument("--k", type=int)
        p.add_argument("--d", type=int)
        p.add_argument("--format", choices=["json"], default="json")
        p.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("decompose", help="randomized pattern-covering decomposition")
    common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("duality", help="(p,q)-structures and separator/path duality")
    common(p)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--p", type=int, help="ask for p separators (otherwise report the structure)")
    p.add_argument("--z0", help="set name or comma-separated vertices")
    p.add_argument("--x", help="vertices to avoid (distance version)")
    p.set_defaults(func=cmd_duality)

    p = sub.add_parser("improve", help="one separation improvement step")
    common(p)
    p.add_argument("--h", type=int)
    p.add_argument("--z0", help="set name or comma-separated vertices")
    p.add_argument("--enumerate", action="store_true", help="list the whole family")
    p.set_defaults(func=cmd_improve)

    p = sub.add_parser("verify", help="re-check a decomposition result")
    p.add_argument("result")
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="Monte-Carlo success rate for a planted pattern")
    common(p)
    p.add_argument("--trials", type=int)
    p.add_argument("--threshold", type=int, help="largest allowed bag/pattern intersection")
    p.add_argument("--missing", type=int, default=0, help="pattern vertices allowed outside V(G')")
    p.add_argument("--pattern", help="set or cluster-family name in the graph file")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("generate", help="write an embedded planar graph")
    p.add_argument("kind", choices=["grid", "cylinder", "random-maximal-planar", "path"])
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "d", None) is None and args.command == "duality":
        args.d = 0
    try:
        payload = args.func(args)
    except _Failed as exc:
        _emit(exc.payload, None)
        return exc.code
    except InputError as exc:
        _emit({"error": "input-error", "reason": str(exc)}, None)
        return EXIT_INPUT
    _emit(payload, getattr(args, "out", None))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
