from __future__ import annotations

import networkx as nx
import numpy as np
import pytest
from hypothesis import strategies as st

from patternsparse import Graph, cylinder, grid, path, random_maximal_planar

# acceptance lines, printed once at the end of the session
RESULTS: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    RESULTS[criterion] = (ok, detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def to_nx(G: Graph) -> nx.Graph:
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges())
    return H


def random_connected_graph(rng: np.random.Generator, n: int, extra: int) -> Graph:
    """Random tree plus ``extra`` random edges."""
    edges = {(int(rng.integers(v)), v) for v in range(1, n)}
    for _ in range(extra):
        u, v = (int(x) for x in rng.choice(n, size=2, replace=False))
        edges.add((min(u, v), max(u, v)))
    return Graph(n, sorted(edges))


def check_td(G: Graph, td, vertices) -> str | None:
    """Independent tree decomposition check on G[vertices]; returns a complaint or None."""
    vertices = set(vertices)
    T = nx.Graph()
    T.add_nodes_from(range(td.size))
    T.add_edges_from((t, p) for t, p in enumerate(td.parent) if p >= 0)
    if not nx.is_tree(T):
        return "not a tree"
    used = set().union(*td.bags) if td.bags else set()
    if used - vertices:
        return "bag vertex outside the vertex set"
    if vertices - used:
        return "vertex in no bag"
    for u, v in G.edges():
        if u in vertices and v in vertices and not any(u in b and v in b for b in td.bags):
            return f"edge {u}-{v} in no bag"
    for v in vertices:
        nodes = [t for t, b in enumerate(td.bags) if v in b]
        if not nx.is_connected(T.subgraph(nodes)):
            return f"bags of {v} not connected"
    return None


def embedded_corpus(max_n: int = 1000) -> list[tuple[str, Graph]]:
    out = [
        ("path1", path(1)),
        ("path2", path(2)),
        ("path12", path(12)),
        ("grid2x2", grid(2, 2)),
        ("grid3x3", grid(3, 3)),
        ("grid3x4", grid(3, 4)),
        ("grid2x8", grid(2, 8)),
        ("grid3x5", grid(3, 5)),
        ("grid4x4", grid(4, 4)),
        ("cyl3x3", cylinder(3, 3)),
        ("cyl3x4", cylinder(3, 4)),
        ("cyl4x6", cylinder(4, 6)),
        ("grid6x6", grid(6, 6)),
        ("grid3x20", grid(3, 20)),
        ("grid10x10", grid(10, 10)),
        ("cyl5x8", cylinder(5, 8)),
    ]
    for n in (4, 5, 8, 10, 12, 14, 16, 30, 60):
        for s in (0, 1):
            out.append((f"rmp{n}_{s}", random_maximal_planar(n, s)))
    return [(name, G) for name, G in out if G.n <= max_n]


@pytest.fixture(scope="session")
def corpus():
    return embedded_corpus()


@st.composite
def connected_graphs(draw, min_n: int = 2, max_n: int = 12):
    n = draw(st.integers(min_n, max_n))
    parents = [draw(st.integers(0, v - 1)) for v in range(1, n)]
    edges = {(p, v) for v, p in zip(range(1, n), parents)}
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    extra = draw(st.lists(st.sampled_from(pairs), max_size=2 * n)) if pairs else []
    edges.update(extra)
    return Graph(n, sorted(edges))


@st.composite
def planar_graphs(draw, max_n: int = 14):
    kind = draw(st.sampled_from(["grid", "cylinder", "rmp", "path"]))
    if kind == "grid":
        return grid(draw(st.integers(1, 4)), draw(st.integers(1, 4)))
    if kind == "cylinder":
        return cylinder(draw(st.integers(1, 3)), draw(st.integers(3, 4)))
    if kind == "rmp":
        return random_maximal_planar(draw(st.integers(3, max_n)), draw(st.integers(0, 50)))
    return path(draw(st.integers(1, max_n)))
