"""Undirected simple graphs, separations, tree decompositions and their validators.

Vertices are dense integer ids ``0..n-1``.  A graph may carry a rotation system
(cyclic neighbour order per vertex); when present it encodes a planar embedding.
Graphs are immutable: every operation that changes the graph returns a new one
together with an id remap so results can be pulled back to the original ids.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence


class InputError(ValueError):
    """Malformed or out-of-contract input."""


class Verdict(NamedTuple):
    """Boolean result carrying a witness when the check fails."""

    ok: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


class Graph:
    """Immutable undirected simple graph with an optional rotation system."""

    __slots__ = ("n", "adj", "rotation", "_nbr")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]] = (),
        rotation: Sequence[Sequence[int]] | None = None,
    ) -> None:
        if n < 0:
            raise InputError("vertex count must be nonnegative")
        nbr: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"loop at vertex {u}")
            nbr[u].add(v)
            nbr[v].add(u)
        self.n = n
        self._nbr = tuple(frozenset(s) for s in nbr)
        self.adj = tuple(tuple(sorted(s)) for s in nbr)
        if rotation is not None:
            rot = tuple(tuple(r) for r in rotation)
            if len(rot) != n:
                raise InputError("rotation system must list every vertex")
            for v in range(n):
                if len(rot[v]) != len(self.adj[v]) or set(rot[v]) != self._nbr[v]:
                    raise InputError(f"rotation at {v} does not match its neighbours")
            self.rotation = rot
        else:
            self.rotation = None

    @classmethod
    def from_rotation(cls, rotation: Sequence[Sequence[int]]) -> "Graph":
        edges = [(u, v) for u, r in enumerate(rotation) for v in r if u < v]
        return cls(len(rotation), edges, rotation)

    # basic queries
    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    @property
    def embedded(self) -> bool:
        return self.rotation is not None

    def vertices(self) -> range:
        return range(self.n)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, a in enumerate(self.adj):
            for v in a:
                if u < v:
                    yield (u, v)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def neighbor_set(self, v: int) -> frozenset[int]:
        return self._nbr[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._nbr[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def check_vertices(self, S: Iterable[int]) -> None:
        for v in S:
            if not (isinstance(v, int) and 0 <= v < self.n):
                raise InputError(f"vertex {v!r} out of range for n={self.n}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj and self.rotation == other.rotation

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        tag = ", embedded" if self.embedded else ""
        return f"Graph(n={self.n}, m={self.m}{tag})"

    # traversal
    def bfs(
        self,
        sources: Iterable[int],
        blocked: Iterable[int] | None = None,
        limit: int | None = None,
    ) -> dict[int, int]:
        """Distances from ``sources`` avoiding ``blocked``; stops past ``limit``."""
        block = set(blocked) if blocked is not None else set()
        dist: dict[int, int] = {}
        queue: deque[int] = deque()
        for s in sources:
            if s not in block and s not in dist:
                dist[s] = 0
                queue.append(s)
        while queue:
            u = queue.popleft()
            du = dist[u]
            if limit is not None and du >= limit:
                continue
            for w in self.adj[u]:
                if w not in dist and w not in block:
                    dist[w] = du + 1
                    queue.append(w)
        return dist

    def components(self, within: Iterable[int] | None = None) -> list[list[int]]:
        """Connected components of the induced subgraph on ``within`` (default all)."""
        allowed = set(range(self.n)) if within is None else set(within)
        seen: set[int] = set()
        comps = []
        for s in sorted(allowed):
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self.adj[u]:
                    if w in allowed and w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self, within: Iterable[int] | None = None) -> bool:
        return len(self.components(within)) <= 1

    def eccentricity(self, v: int) -> int:
        return max(self.bfs([v]).values())

    def diameter(self) -> int:
        """Largest eccentricity over all components."""
        return max((self.eccentricity(v) for v in range(self.n)), default=0)

    # derived graphs
    def induced(self, S: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``S``; returns it with the list new id -> old id."""
        keep = sorted(set(S))
        self.check_vertices(keep)
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u in keep for v in self.adj[u] if v in index and u < v]
        rot = None
        if self.rotation is not None:
            rot = [[index[w] for w in self.rotation[u] if w in index] for u in keep]
        return Graph(len(keep), edges, rot), keep

    def delete(self, S: Iterable[int]) -> tuple["Graph", list[int]]:
        gone = set(S)
        return self.induced(v for v in range(self.n) if v not in gone)

    def add_pendant(self, anchor: int) -> "Graph":
        """Adds a new vertex ``n`` adjacent only to ``anchor``."""
        edges = list(self.edges()) + [(anchor, self.n)]
        rot = None
        if self.rotation is not None:
            rot = [list(r) for r in self.rotation] + [[anchor]]
            rot[anchor].append(self.n)
        return Graph(self.n + 1, edges, rot)

    def contract(self, S: Iterable[int]) -> tuple["Graph", list[int], int]:
        """Contracts the connected set ``S`` to one vertex.

        Returns ``(H, remap, x)`` where ``remap[v]`` is the id of ``v`` in ``H``
        and ``x`` is the id of the contracted vertex.  Rotation systems are carried
        through edge by edge, so an embedded input gives an embedded output.
        """
        S = set(S)
        if not S:
            raise InputError("cannot contract an empty set")
        self.check_vertices(S)
        if not self.is_connected(S):
            raise InputError("contracted set must induce a connected subgraph")
        rep = min(S)
        if self.rotation is not None:
            rot = _contract_rotation(self, S, rep)
        else:
            rot = None
        nbr = [set(a) for a in self.adj]
        merged = set()
        for v in S:
            for w in self.adj[v]:
                if w not in S:
                    merged.add(w)
        # relabel: drop S \ {rep}
        keep = [v for v in range(self.n) if v == rep or v not in S]
        index = {v: i for i, v in enumerate(keep)}
        remap = [index[rep] if v in S else index[v] for v in range(self.n)]
        edges = set()
        for u in keep:
            if u == rep:
                continue
            for w in nbr[u]:
                a, b = remap[u], remap[w]
                if a != b:
                    edges.add((min(a, b), max(a, b)))
        for w in merged:
            a, b = remap[rep], remap[w]
            edges.add((min(a, b), max(a, b)))
        new_rot = None
        if rot is not None:
            new_rot = [[index[w] for w in rot[u]] for u in keep]
        return Graph(len(keep), sorted(edges), new_rot), remap, index[rep]


def _contract_rotation(G: Graph, S: set[int], rep: int) -> list[list[int]]:
    """Rotation system after contracting ``S`` onto ``rep`` (old ids kept)."""
    rot = [list(r) for r in G.rotation]
    # merge along a BFS tree of G[S] rooted at rep
    order = []
    seen = {rep}
    queue = deque([rep])
    parent = {}
    while queue:
        u = queue.popleft()
        for w in G.adj[u]:
            if w in S and w not in seen:
                seen.add(w)
                parent[w] = u
                order.append(w)
                queue.append(w)
    owner = {v: v for v in S}

    def find(v: int) -> int:
        while owner[v] != v:
            v = owner[v]
        return v

    for v in order:
        u = find(parent[v])
        ru, rv = rot[u], rot[v]
        i = ru.index(v)
        j = rv.index(u)
        seg = rv[j + 1:] + rv[:j]
        current = set(ru)
        kept_seg = []
        for w in seg:
            rw = rot[w]
            pos = rw.index(v)
            if w in current:
                del rw[pos]  # parallel edge: drop the copy that came from v
            else:
                rw[pos] = u
                kept_seg.append(w)
        rot[u] = ru[:i] + kept_seg + ru[i + 1:]
        rot[v] = []
        owner[v] = u
    if find(rep) != rep:
        raise AssertionError("contraction representative lost")
    return rot


def faces(G: Graph) -> list[list[tuple[int, int]]]:
    """Face boundary walks of the rotation system, as lists of darts.

    From dart ``(u, v)`` the walk continues with ``(v, w)`` where ``w`` follows
    ``u`` in the cyclic order at ``v``.
    """
    if G.rotation is None:
        raise InputError("graph has no rotation system")
    pos = [{w: i for i, w in enumerate(r)} for r in G.rotation]
    seen: set[tuple[int, int]] = set()
    out = []
    for u in range(G.n):
        for v in G.rotation[u]:
            if (u, v) in seen:
                continue
            walk = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                walk.append((a, b))
                rb = G.rotation[b]
                a, b = b, rb[(pos[b][a] + 1) % len(rb)]
            out.append(walk)
    return out


def euler_check(G: Graph) -> Verdict:
    """V - E + F = 2 on every component (isolated vertices count one face)."""
    if G.rotation is None:
        return Verdict(False, "no rotation system")
    comp_of = {}
    comps = G.components()
    for i, c in enumerate(comps):
        for v in c:
            comp_of[v] = i
    nf = [0] * len(comps)
    for walk in faces(G):
        nf[comp_of[walk[0][0]]] += 1
    for i, c in enumerate(comps):
        e = sum(len(G.adj[v]) for v in c) // 2
        f = nf[i] if e else 1
        if len(c) - e + f != 2:
            return Verdict(False, {"component": c, "V": len(c), "E": e, "F": f})
    return Verdict(True)


def neighborhood(G: Graph, S: Iterable[int], d: int, blocked: Iterable[int] | None = None) -> frozenset[int]:
    """N^d[S]: vertices within distance ``d`` of ``S`` (optionally avoiding ``blocked``)."""
    if d < 0:
        raise InputError("radius must be nonnegative")
    S = list(S)
    G.check_vertices(S)
    return frozenset(G.bfs(S, blocked=blocked, limit=d))


def contract_set(G: Graph, S: Iterable[int]) -> tuple[Graph, int, list[int]]:
    """Contracts connected ``S``; returns (graph, new vertex id, old->new remap)."""
    H, remap, x = G.contract(S)
    return H, x, remap


@dataclass(frozen=True)
class Separation:
    A: frozenset[int]
    B: frozenset[int]

    @classmethod
    def of(cls, A: Iterable[int], B: Iterable[int]) -> "Separation":
        return cls(frozenset(A), frozenset(B))

    @property
    def separator(self) -> frozenset[int]:
        return self.A & self.B

    @property
    def order(self) -> int:
        return len(self.A & self.B)

    def swapped(self) -> "Separation":
        return Separation(self.B, self.A)


def validate_separation(G: Graph, s: Separation) -> Verdict:
    G.check_vertices(s.A)
    G.check_vertices(s.B)
    if len(s.A | s.B) != G.n:
        missing = sorted(set(range(G.n)) - (s.A | s.B))
        return Verdict(False, ("cover", missing[0]))
    a_only = s.A - s.B
    b_only = s.B - s.A
    if not a_only:
        return Verdict(False, ("empty", "A\\B"))
    if not b_only:
        return Verdict(False, ("empty", "B\\A"))
    for u in a_only:
        for w in G.adj[u]:
            if w in b_only:
                return Verdict(False, ("edge", (u, w)))
    return Verdict(True)


def separation_is_cut(G: Graph, s: Separation) -> Verdict:
    """Cover and no-edge conditions only (sides may be empty)."""
    if len(s.A | s.B) != G.n:
        return Verdict(False, ("cover", sorted(set(range(G.n)) - (s.A | s.B))[0]))
    b_only = s.B - s.A
    for u in s.A - s.B:
        for w in G.adj[u]:
            if w in b_only:
                return Verdict(False, ("edge", (u, w)))
    return Verdict(True)


@dataclass(frozen=True)
class TreeDecomposition:
    """Rooted tree decomposition: ``parent[t]`` is -1 exactly at the root."""

    parent: tuple[int, ...]
    bags: tuple[frozenset[int], ...]
    difficult: tuple[frozenset[int], ...] | None = None

    def __post_init__(self) -> None:
        if len(self.parent) != len(self.bags):
            raise InputError("parent array and bag list differ in length")
        if self.difficult is not None and len(self.difficult) != len(self.bags):
            raise InputError("difficult-set list differs in length")

    @classmethod
    def build(
        cls,
        parent: Sequence[int],
        bags: Sequence[Iterable[int]],
        difficult: Sequence[Iterable[int]] | None = None,
    ) -> "TreeDecomposition":
        diff = None if difficult is None else tuple(frozenset(x) for x in difficult)
        return cls(tuple(parent), tuple(frozenset(b) for b in bags), diff)

    @property
    def size(self) -> int:
        return len(self.bags)

    @property
    def root(self) -> int:
        roots = [t for t, p in enumerate(self.parent) if p == -1]
        if len(roots) != 1:
            raise InputError(f"expected one root, found {len(roots)}")
        return roots[0]

    def children(self) -> list[list[int]]:
        ch: list[list[int]] = [[] for _ in self.parent]
        for t, p in enumerate(self.parent):
            if p >= 0:
                ch[p].append(t)
        return ch

    def tree_adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.parent]
        for t, p in enumerate(self.parent):
            if p >= 0:
                adj[t].append(p)
                adj[p].append(t)
        return adj

    def vertices(self) -> frozenset[int]:
        return frozenset().union(*self.bags) if self.bags else frozenset()

    def max_bag_size(self) -> int:
        return max((len(b) for b in self.bags), default=0)

    def depth(self) -> int:
        """Number of nodes on the longest root-to-leaf path."""
        best = 0
        memo: dict[int, int] = {}
        for t in range(self.size):
            chain = []
            x = t
            while x != -1 and x not in memo:
                chain.append(x)
                x = self.parent[x]
            base = 0 if x == -1 else memo[x]
            for y in reversed(chain):
                base += 1
                memo[y] = base
            best = max(best, memo[t])
        return best

    def adhesion(self, t: int) -> frozenset[int]:
        p = self.parent[t]
        return frozenset() if p < 0 else self.bags[t] & self.bags[p]


class TDReport(NamedTuple):
    valid: bool
    max_bag_size: int
    violated_condition: object = None

    def __bool__(self) -> bool:
        return self.valid


def _tree_check(parent: Sequence[int]) -> str | None:
    n = len(parent)
    if n == 0:
        return "empty tree"
    roots = [t for t in range(n) if parent[t] == -1]
    if len(roots) != 1:
        return f"tree has {len(roots)} roots"
    for t in range(n):
        seen = set()
        x = t
        while x != -1:
            if x in seen or not (-1 <= parent[x] < n):
                return f"parent array is not a tree at node {t}"
            seen.add(x)
            x = parent[x]
    return None


def validate_tree_decomposition(
    G: Graph, td: TreeDecomposition, vertices: Iterable[int] | None = None
) -> TDReport:
    """Checks the axioms for G restricted to the union of bags (or ``vertices``)."""
    for b in td.bags:
        G.check_vertices(b)
    size = td.max_bag_size()
    bad = _tree_check(td.parent)
    if bad:
        return TDReport(False, size, bad)
    if td.difficult is not None:
        for t, (b, x) in enumerate(zip(td.bags, td.difficult)):
            if not x <= b:
                return TDReport(False, size, ("difficult-not-in-bag", t))
    covered = td.vertices()
    scope = covered if vertices is None else frozenset(vertices)
    missing = scope - covered
    if missing:
        return TDReport(False, size, ("vertex-uncovered", min(missing)))
    tadj = td.tree_adjacency()
    occurs: dict[int, list[int]] = {}
    for t, b in enumerate(td.bags):
        for v in b:
            occurs.setdefault(v, []).append(t)
    for v in sorted(scope):
        nodes = set(occurs[v])
        start = next(iter(nodes))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in tadj[x]:
                if y in nodes and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(nodes):
            return TDReport(False, size, ("vertex-disconnected", v))
    for u in sorted(scope):
        for w in G.adj[u]:
            if u < w and w in scope:
                if not any(w in td.bags[t] for t in occurs[u]):
                    return TDReport(False, size, ("edge-uncovered", (u, w)))
    return TDReport(True, size)


@dataclass(frozen=True)
class ClusterFamily:
    clusters: tuple[frozenset[int], ...]
    d: int

    @classmethod
    def of(cls, clusters: Iterable[Iterable[int]], d: int) -> "ClusterFamily":
        return cls(tuple(frozenset(c) for c in clusters), d)

    def union(self) -> frozenset[int]:
        return frozenset().union(*self.clusters) if self.clusters else frozenset()

    def __len__(self) -> int:
        return len(self.clusters)


def cluster_diameter(G: Graph, K: Iterable[int], host: Iterable[int] | None = None) -> int | None:
    """Diameter of K measured in G[host] (default G[K]); None if disconnected."""
    K = frozenset(K)
    allowed = K if host is None else frozenset(host)
    blocked = [v for v in range(G.n) if v not in allowed]
    best = 0
    for v in K:
        dist = G.bfs([v], blocked=blocked)
        for w in K:
            if w not in dist:
                return None
            best = max(best, dist[w])
    return best


def validate_clusters(G: Graph, fam: ClusterFamily) -> Verdict:
    for K in fam.clusters:
        if not K:
            return Verdict(False, ("empty-cluster", K))
        G.check_vertices(K)
        diam = cluster_diameter(G, K, host=range(G.n))
        if not G.is_connected(K):
            return Verdict(False, ("disconnected", sorted(K)))
        if diam is None or diam > fam.d:
            return Verdict(False, ("diameter", sorted(K), diam))
    return Verdict(True)


class PatternStats(NamedTuple):
    max_intersection: int
    contained: bool


def bag_pattern_stats(td: TreeDecomposition, G: Graph, Z: Iterable[int], d: int = 0) -> PatternStats:
    """Max over bags of |bag ∩ N^d[Z]| and whether Z lies in the union of bags."""
    Z = frozenset(Z)
    G.check_vertices(Z)
    ball = neighborhood(G, Z, d) if Z else frozenset()
    best = max((len(b & ball) for b in td.bags), default=0)
    return PatternStats(best, Z <= td.vertices())


def as_weights(mu: Mapping[int, float] | Sequence[float], n: int) -> list[float]:
    if isinstance(mu, Mapping):
        w = [0.0] * n
        for v, x in mu.items():
            w[v] = float(x)
        return w
    if len(mu) != n:
        raise InputError("weight vector length differs from vertex count")
    return [float(x) for x in mu]
