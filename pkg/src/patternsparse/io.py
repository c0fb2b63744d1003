"""JSON formats for graphs, decomposition results and reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .graph import ClusterFamily, Graph, InputError, TreeDecomposition, euler_check

GRAPH_SCHEMA = "patternsparse.graph/1"
RESULT_SCHEMA = "patternsparse.result/1"


@dataclass
class GraphFile:
    """A graph with an optional rotation system and named vertex sets.

    ``sets`` maps names such as "Y0" or "Z" to vertex lists; ``clusters`` maps
    names to lists of clusters.
    """

    graph: Graph
    sets: dict[str, list[int]] = field(default_factory=dict)
    clusters: dict[str, list[list[int]]] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        G = self.graph
        out: dict[str, Any] = {
            "schema": GRAPH_SCHEMA,
            "n": G.n,
            "edges": [list(e) for e in G.edges()],
            "rotation": None if G.rotation is None else [list(r) for r in G.rotation],
        }
        if self.sets:
            out["sets"] = {k: sorted(v) for k, v in self.sets.items()}
        if self.clusters:
            out["clusters"] = {k: [sorted(c) for c in v] for k, v in self.clusters.items()}
        return out

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "GraphFile":
        if not isinstance(data, dict):
            raise InputError("graph file must hold a JSON object")
        schema = data.get("schema", GRAPH_SCHEMA)
        if schema != GRAPH_SCHEMA:
            raise InputError(f"unsupported graph schema {schema!r}")
        try:
            n = int(data["n"])
            edges = [(int(u), int(v)) for u, v in data.get("edges", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed graph file: {exc}") from None
        rot = data.get("rotation")
        if rot is not None:
            G = Graph(n, edges, [[int(w) for w in r] for r in rot])
            ok = euler_check(G)
            if not ok:
                raise InputError(f"rotation system is not planar: {ok.witness}")
        else:
            G = Graph(n, edges)
        sets = {str(k): [int(v) for v in vs] for k, vs in data.get("sets", {}).items()}
        clusters = {
            str(k): [[int(v) for v in c] for c in cs] for k, cs in data.get("clusters", {}).items()
        }
        for vs in sets.values():
            G.check_vertices(vs)
        for cs in clusters.values():
            for c in cs:
                G.check_vertices(c)
        return cls(G, sets, clusters)

    def family(self, name: str, d: int) -> ClusterFamily:
        if name not in self.clusters:
            raise InputError(f"no cluster family named {name!r}")
        return ClusterFamily.of(self.clusters[name], d)


def dumps(data: Any) -> str:
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def read_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def load_graph(path: str | Path) -> GraphFile:
    return GraphFile.from_json(read_json(path))


def save_graph(gf: GraphFile, path: str | Path) -> None:
    Path(path).write_text(dumps(gf.to_json()))


def td_to_json(td: TreeDecomposition) -> dict[str, Any]:
    out: dict[str, Any] = {
        "parent": list(td.parent),
        "bags": [sorted(b) for b in td.bags],
    }
    if td.difficult is not None:
        out["difficult"] = [sorted(b) for b in td.difficult]
    return out


def td_from_json(data: dict[str, Any]) -> TreeDecomposition:
    try:
        return TreeDecomposition.build(data["parent"], data["bags"], data.get("difficult"))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed decomposition: {exc}") from None


def _plain(x: Any) -> Any:
    """Stats values as JSON-friendly data."""
    if isinstance(x, (frozenset, set)):
        return sorted(x)
    if isinstance(x, (list, tuple)):
        return [_plain(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    return x


def result_to_json(gf: GraphFile, res, config: dict[str, Any], seed: int) -> dict[str, Any]:
    out = {
        "schema": RESULT_SCHEMA,
        "graph": gf.to_json(),
        "vertices": sorted(res.vertices),
        "stats": _plain(res.stats),
        "config": config,
        "seed": seed,
    }
    out.update(td_to_json(res.td))
    return out
