"""Planar structure: BFS layerings, triangulation, the three-path tree decomposition,
balanced nodes, candidate separations and Voronoi re-clustering."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .graph import (
    ClusterFamily,
    Graph,
    InputError,
    Separation,
    TreeDecomposition,
    as_weights,
    euler_check,
    faces,
    validate_clusters,
)

# Bounds delivered by the three-path construction: the per-bag forest is a single
# subtree of the BFS tree (a_F is the reported bound), a branching vertex of the
# three root paths can reach degree 4, and bags hold three geodesic paths.
A_F = 3
DELTA_F = 4
C_F = 3


@dataclass(frozen=True)
class BFSLayering:
    root: int
    layer: tuple[int, ...]
    parent: tuple[int, ...]

    @property
    def depth(self) -> int:
        return max(self.layer)

    def layers(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.depth + 1)]
        for v, d in enumerate(self.layer):
            out[d].append(v)
        return out

    def root_path(self, v: int) -> list[int]:
        path = [v]
        while self.parent[path[-1]] != -1:
            path.append(self.parent[path[-1]])
        return path


def bfs_layering(G: Graph, root: int) -> BFSLayering:
    G.check_vertices([root])
    layer = [-1] * G.n
    parent = [-1] * G.n
    layer[root] = 0
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in G.adj[u]:
            if layer[w] < 0:
                layer[w] = layer[u] + 1
                parent[w] = u
                queue.append(w)
    if min(layer, default=0) < 0:
        raise InputError("graph is disconnected")
    return BFSLayering(root, tuple(layer), tuple(parent))


def triangulate(G: Graph) -> Graph:
    """Maximal planar supergraph on the same vertex set (every face a triangle).

    Each face is cut into triangles by ears; the ear at the lowest-id corner is
    tried first so that a face is fanned from its lowest vertex when that keeps
    the graph simple, and other corners are used otherwise.
    """
    if G.rotation is None:
        raise InputError("triangulate needs a rotation system")
    if G.n < 3:
        raise InputError("triangulate needs at least 3 vertices")
    if not G.is_connected():
        raise InputError("triangulate needs a connected graph")
    ok = euler_check(G)
    if not ok:
        raise InputError(f"rotation system is not planar: {ok.witness}")
    rot = [list(r) for r in G.rotation]
    nbr = [set(r) for r in rot]
    for walk in faces(G):
        poly = [a for a, _ in walk]
        while len(poly) > 3:
            m = len(poly)
            low = min(range(m), key=lambda i: (poly[i], i))
            for step in range(m):
                j = (low + step) % m
                a, b, c = poly[j], poly[(j + 1) % m], poly[(j + 2) % m]
                if a != c and c not in nbr[a]:
                    break
            else:
                raise AssertionError("no admissible chord in face")
            prev = poly[(j - 1) % m]
            ra = rot[a]
            ra.insert(ra.index(prev) + 1, c)
            rc = rot[c]
            rc.insert(rc.index(b) + 1, a)
            nbr[a].add(c)
            nbr[c].add(a)
            del poly[(j + 1) % m]
    return Graph.from_rotation(rot)


@dataclass(frozen=True)
class StructuredDecomposition:
    """Tree decomposition with a spanning forest of every bag."""

    graph: Graph
    td: TreeDecomposition
    forests: tuple[frozenset[tuple[int, int]], ...]
    root_vertex: int
    eccentricity: int
    a_F: int = A_F
    delta_F: int = DELTA_F
    c_F: int = C_F

    def constants(self) -> dict[str, int]:
        return {"a_F": self.a_F, "delta_F": self.delta_F, "c_F": self.c_F}


def three_path_decomposition(G: Graph, root: int = 0) -> StructuredDecomposition:
    """BFS-tree / dual-tree decomposition of a connected embedded planar graph.

    Every face of a triangulation gets the bag made of the three BFS paths from
    its corners to ``root``; faces are joined along edges that are not in the
    BFS tree, which spans the dual.
    """
    G.check_vertices([root])
    lay = bfs_layering(G, root)
    ecc = lay.depth
    if G.n < 3:
        edges = frozenset((min(v, p), max(v, p)) for v, p in enumerate(lay.parent) if p >= 0)
        td = TreeDecomposition.build([-1], [range(G.n)])
        return StructuredDecomposition(G, td, (edges,), root, ecc)
    if G.rotation is None:
        raise InputError("three-path decomposition needs an embedding")
    tri = triangulate(G)
    fs = faces(tri)
    face_of = {}
    for f, walk in enumerate(fs):
        if len(walk) != 3:
            raise AssertionError("triangulation left a non-triangular face")
        for dart in walk:
            face_of[dart] = f
    tree_edges = {(min(v, p), max(v, p)) for v, p in enumerate(lay.parent) if p >= 0}
    dual: list[list[int]] = [[] for _ in fs]
    for u, v in tri.edges():
        if (u, v) in tree_edges:
            continue
        f1, f2 = face_of[(u, v)], face_of[(v, u)]
        dual[f1].append(f2)
        dual[f2].append(f1)
    parent = [-2] * len(fs)
    parent[0] = -1
    order = [0]
    for x in order:
        for y in sorted(dual[x]):
            if parent[y] == -2:
                parent[y] = x
                order.append(y)
    if len(order) != len(fs):
        raise AssertionError("non-tree edges do not span the dual")
    paths = {}

    def path(v: int) -> list[int]:
        if v not in paths:
            paths[v] = lay.root_path(v)
        return paths[v]

    bags = []
    forests = []
    for walk in fs:
        bag: set[int] = set()
        forest: set[tuple[int, int]] = set()
        for a, _ in walk:
            p = path(a)
            bag.update(p)
            for x, y in zip(p, p[1:]):
                forest.add((min(x, y), max(x, y)))
        bags.append(bag)
        forests.append(frozenset(forest))
    td = TreeDecomposition.build(parent, bags)
    return StructuredDecomposition(G, td, tuple(forests), root, ecc)


def single_bag_decomposition(G: Graph) -> StructuredDecomposition:
    """One bag holding V(G), with a BFS spanning forest."""
    forest = set()
    seen = set()
    for comp in G.components():
        queue = deque([comp[0]])
        seen.add(comp[0])
        while queue:
            u = queue.popleft()
            for w in G.adj[u]:
                if w not in seen:
                    seen.add(w)
                    forest.add((min(u, w), max(u, w)))
                    queue.append(w)
    td = TreeDecomposition.build([-1], [range(G.n)])
    ecc = G.eccentricity(0) if G.n else 0
    return StructuredDecomposition(G, td, (frozenset(forest),), 0, ecc)


def forest_stats(vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> tuple[int, int, bool]:
    """(component count, max degree, acyclic) of a forest on ``vertices``."""
    vs = set(vertices)
    parent = {v: v for v in vs}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    deg = {v: 0 for v in vs}
    acyclic = True
    comps = len(vs)
    for u, w in edges:
        if u not in vs or w not in vs:
            return (-1, -1, False)
        deg[u] += 1
        deg[w] += 1
        ru, rw = find(u), find(w)
        if ru == rw:
            acyclic = False
        else:
            parent[ru] = rw
            comps -= 1
    return comps, max(deg.values(), default=0), acyclic


# balanced nodes and candidate separations


@dataclass(frozen=True)
class CandidateSeparation:
    separation: Separation
    forest: frozenset[tuple[int, int]]
    node: int
    degenerate: bool = False


class _TreeIndex:
    """Preorder intervals and topmost-bag data for a rooted decomposition."""

    def __init__(self, sd: StructuredDecomposition) -> None:
        td = sd.td
        self.td = td
        self.n = sd.graph.n
        self.children = td.children()
        root = td.root
        self.root = root
        size = td.size
        tin = [0] * size
        tout = [0] * size
        depth = [0] * size
        order = []
        stack = [(root, False)]
        clock = 0
        while stack:
            t, done = stack.pop()
            if done:
                tout[t] = clock
                continue
            tin[t] = clock
            clock += 1
            order.append(t)
            stack.append((t, True))
            for c in reversed(self.children[t]):
                depth[c] = depth[t] + 1
                stack.append((c, False))
        self.tin, self.tout, self.depth, self.order = tin, tout, depth, order
        top = [-1] * self.n
        for t in order:
            for v in td.bags[t]:
                if top[v] < 0:
                    top[v] = t
        self.top = top

    def inside(self, c: int, t: int) -> bool:
        """Whether node t lies in the subtree of c."""
        return self.tin[c] <= self.tin[t] < self.tout[c]

    def lca(self, a: int, b: int) -> int:
        parent = self.td.parent
        while a != b:
            if self.depth[a] >= self.depth[b]:
                a = parent[a]
            else:
                b = parent[b]
        return a

    def side_sets(self, t: int) -> list[frozenset[int]]:
        """Vertex sets V(S) minus β(t) for the components S of T - t.

        Children come first in order, the parent side last (if t is not the root).
        """
        bag = self.td.bags[t]
        kids = self.children[t]
        groups: list[set[int]] = [set() for _ in kids]
        rest: set[int] = set()
        for v in range(self.n):
            if v in bag:
                continue
            tv = self.top[v]
            for i, c in enumerate(kids):
                if self.inside(c, tv):
                    groups[i].add(v)
                    break
            else:
                rest.add(v)
        out = [frozenset(g) for g in groups]
        if self.td.parent[t] >= 0:
            out.append(frozenset(rest))
        elif rest:
            raise AssertionError("vertex outside every bag")
        return out


def _bipartitions(groups: Sequence[frozenset[int]]) -> list[tuple[frozenset[int], frozenset[int]]]:
    live = [g for g in groups if g]
    out = []
    m = len(live)
    for mask in range(1, 2 ** m - 1):
        if mask & 1 == 0:
            continue  # each split once: group 0 always on the A side
        a = frozenset().union(*(live[i] for i in range(m) if mask >> i & 1))
        b = frozenset().union(*(live[i] for i in range(m) if not mask >> i & 1))
        out.append((a, b))
    return out


def balanced_node_for_weight(
    sd: StructuredDecomposition, mu: Mapping[int, float] | Sequence[float]
) -> CandidateSeparation:
    """Node whose removal leaves at most half the weight per component, with a
    separation over it that keeps at most two thirds on each side."""
    n = sd.graph.n
    w = as_weights(mu, n)
    if any(x < 0 for x in w):
        raise InputError("weights must be nonnegative")
    total = sum(w)
    if total <= 0:
        raise InputError("total weight must be positive")
    ix = _TreeIndex(sd)
    td = sd.td
    topw = [0.0] * td.size
    for v in range(n):
        topw[ix.top[v]] += w[v]
    sub = topw[:]
    for t in reversed(ix.order):
        p = td.parent[t]
        if p >= 0:
            sub[p] += sub[t]
    t = ix.root
    # walk towards the heavy side; the parent side of a node we descended into
    # is lighter than half, so only children need checking
    while True:
        heavy = [c for c in ix.children[t] if sub[c] > total / 2]
        if not heavy:
            break
        t = heavy[0]
    bag = td.bags[t]
    groups = ix.side_sets(t)
    splits = _bipartitions(groups)
    everything = frozenset(range(n))
    if not splits:
        sep = Separation(everything, frozenset(bag))
        return CandidateSeparation(sep, sd.forests[t], t, degenerate=True)

    def cost(ab: tuple[frozenset[int], frozenset[int]]) -> float:
        return max(sum(w[v] for v in ab[0]), sum(w[v] for v in ab[1]))

    a, b = min(splits, key=cost)
    sep = Separation(bag | a, bag | b)
    return CandidateSeparation(sep, sd.forests[t], t)


def candidate_nodes(sd: StructuredDecomposition, U: Iterable[int]) -> list[int]:
    """Topmost nodes of U plus the lowest common ancestors closing them."""
    U = sorted(set(U))
    if not U:
        raise InputError("support set must be nonempty")
    sd.graph.check_vertices(U)
    ix = _TreeIndex(sd)
    tops = sorted({ix.top[u] for u in U}, key=lambda t: ix.tin[t])
    nodes = set(tops)
    for a, b in zip(tops, tops[1:]):
        nodes.add(ix.lca(a, b))
    return sorted(nodes, key=lambda t: ix.tin[t])


def candidate_separations(sd: StructuredDecomposition, U: Iterable[int]) -> list[CandidateSeparation]:
    """Family containing a balanced separation for every weight supported on U."""
    ix = _TreeIndex(sd)
    everything = frozenset(range(sd.graph.n))
    out = []
    for t in candidate_nodes(sd, U):
        bag = sd.td.bags[t]
        splits = _bipartitions(ix.side_sets(t))
        if not splits:
            # same fallback as balanced_node_for_weight
            sep = Separation(everything, frozenset(bag))
            out.append(CandidateSeparation(sep, sd.forests[t], t, degenerate=True))
        for a, b in splits:
            out.append(CandidateSeparation(Separation(bag | a, bag | b), sd.forests[t], t))
    return out


def is_balanced(sep: Separation, mu: Sequence[float], ratio: float = 2 / 3) -> bool:
    total = sum(mu)
    a = sum(mu[v] for v in sep.A - sep.B)
    b = sum(mu[v] for v in sep.B - sep.A)
    eps = 1e-9 * max(1.0, total)
    return a <= ratio * total + eps and b <= ratio * total + eps


def disjoint_clusters(G: Graph, fam: ClusterFamily) -> ClusterFamily:
    """Pairwise disjoint 2d-clusters with the same union (Voronoi cells)."""
    ok = validate_clusters(G, fam)
    if not ok:
        raise InputError(f"invalid cluster: {ok.witness}")
    U = fam.union()
    if not U:
        return ClusterFamily((), 2 * fam.d)
    blocked = [v for v in range(G.n) if v not in U]
    centers: list[int] = []
    reach: list[dict[int, int]] = []
    for v in sorted(U):
        if any(v in r for r in reach):
            continue
        centers.append(v)
        reach.append(G.bfs([v], blocked=blocked, limit=fam.d))
    full = [G.bfs([c], blocked=blocked) for c in centers]
    cells: list[set[int]] = [set() for _ in centers]
    for v in U:
        best = min(range(len(centers)), key=lambda i: (full[i].get(v, G.n + 1), centers[i]))
        cells[best].add(v)
    return ClusterFamily(tuple(frozenset(c) for c in cells), 2 * fam.d)
