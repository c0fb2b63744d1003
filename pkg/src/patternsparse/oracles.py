"""Brute-force oracles and the Monte-Carlo success harness.

Everything here is test infrastructure: exponential algorithms behind size
guards, used to cross-check the fast code on small inputs.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .config import RunConfig
from .decomposer import RunFailure, baker_decompose
from .graph import ClusterFamily, Graph, InputError, Verdict, neighborhood, validate_clusters
from .improve import ImproveTuple
from .planar import disjoint_clusters
from .rng import Stream

TREEWIDTH_CAP = 12
MINOR_CAP = 16


# treewidth


def exact_treewidth(G: Graph, cap: int = TREEWIDTH_CAP) -> int:
    """Treewidth by the subset recurrence over elimination orderings.

    TW(S) = min over v in S of max(TW(S - v), |Q(S - v, v)|) where Q(S, v) is
    the set of vertices outside S + v reachable from v through S.
    """
    n = G.n
    if n > cap:
        raise InputError(f"exact treewidth is limited to {cap} vertices")
    if n == 0:
        return -1
    nbr = [sum(1 << w for w in G.adj[v]) for v in range(n)]

    def q(S: int, v: int) -> int:
        seen = 1 << v
        frontier = 1 << v
        out = 0
        while frontier:
            reach = 0
            f = frontier
            while f:
                low = f & -f
                reach |= nbr[low.bit_length() - 1]
                f ^= low
            reach &= ~seen
            seen |= reach
            out |= reach & ~S
            frontier = reach & S
        return bin(out).count("1")

    @lru_cache(maxsize=None)
    def tw(S: int) -> int:
        if S == 0:
            return -1
        best = n
        f = S
        while f:
            low = f & -f
            v = low.bit_length() - 1
            rest = S ^ low
            best = min(best, max(tw(rest), q(rest, v)))
            f ^= low
        return best

    return tw((1 << n) - 1)


# minors


def complete_graph(h: int) -> Graph:
    return Graph(h, [(i, j) for i in range(h) for j in range(i + 1, h)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def verify_minor_model(G: Graph, H: Graph, branch_sets: Sequence[Iterable[int]]) -> Verdict:
    """Disjoint, nonempty, connected branch sets with an edge for every edge of H."""
    sets = [frozenset(b) for b in branch_sets]
    if len(sets) != H.n:
        return Verdict(False, ("branch-set-count", len(sets), H.n))
    seen: set[int] = set()
    for i, b in enumerate(sets):
        G.check_vertices(b)
        if not b:
            return Verdict(False, ("empty-branch-set", i))
        if b & seen:
            return Verdict(False, ("overlap", i))
        seen |= b
        if not G.is_connected(b):
            return Verdict(False, ("disconnected-branch-set", i))
    for i, j in H.edges():
        if not any(w in sets[j] for v in sets[i] for w in G.adj[v]):
            return Verdict(False, ("missing-adjacency", i, j))
    return Verdict(True)


def _subgraph_map(H: Graph, adj: dict[int, set[int]]) -> list[int] | None:
    """Injective map of V(H) into the keys of ``adj`` keeping every edge of H."""
    order = sorted(range(H.n), key=lambda i: -H.degree(i))
    image: dict[int, int] = {}
    used: set[int] = set()

    def place(idx: int) -> bool:
        if idx == len(order):
            return True
        i = order[idx]
        need = [image[j] for j in H.adj[i] if j in image]
        pool = adj[need[0]] if need else adj.keys()
        for x in pool:
            if x in used or len(adj[x]) < H.degree(i):
                continue
            if all(y in adj[x] for y in need):
                image[i] = x
                used.add(x)
                if place(idx + 1):
                    return True
                del image[i]
                used.discard(x)
        return False

    if place(0):
        return [image[i] for i in range(H.n)]
    return None


def find_minor_model(G: Graph, H: Graph, cap: int = MINOR_CAP) -> list[frozenset[int]] | None:
    """An H-minor model in G, or None; exhaustive search over edge contractions.

    H must be connected.  Every model of a connected H inside a connected graph
    extends to one that uses all vertices, so it is enough to contract edges
    down to |V(H)| vertices and test for H as a spanning subgraph.  Contracted graphs are memoised.
    Vertices of degree at most one are dropped when H has minimum degree two,
    and degree-two vertices are contracted into a neighbour when H has minimum
    degree three; neither step can destroy a model.
    """
    if G.n > cap:
        raise InputError(f"minor search is limited to {cap} vertices")
    if H.n == 0:
        return []
    if not H.is_connected():
        raise InputError("pattern graph must be connected")
    mindeg = min(H.degree(i) for i in range(H.n))
    seen: set[frozenset[tuple[int, int]]] = set()

    def reduce(adj: dict[int, set[int]], sets: dict[int, frozenset[int]]) -> None:
        changed = True
        while changed:
            changed = False
            for x in list(adj):
                if x not in adj:
                    continue
                deg = len(adj[x])
                if deg <= 1 and mindeg >= 2 and len(adj) > 1:
                    for y in adj[x]:
                        adj[y].discard(x)
                    del adj[x], sets[x]
                    changed = True
                elif deg == 2 and mindeg >= 3:
                    y = min(adj[x])
                    _merge(adj, sets, min(x, y), max(x, y))
                    changed = True

    def search(adj: dict[int, set[int]], sets: dict[int, frozenset[int]]) -> list[frozenset[int]] | None:
        reduce(adj, sets)
        if len(adj) < H.n:
            return None
        edges = frozenset((u, w) for u in adj for w in adj[u] if u < w)
        # contracting down to |V(H)| vertices costs at least one edge per step
        if len(edges) - (len(adj) - H.n) < H.m or edges in seen:
            return None
        seen.add(edges)
        if len(adj) == H.n:
            # contraction can raise degrees, so this count only prunes at the end
            if sum(1 for x in adj if len(adj[x]) >= mindeg) < H.n:
                return None
            image = _subgraph_map(H, adj)
            return None if image is None else [sets[x] for x in image]
        for u, w in sorted(edges):
            a2 = {x: set(ys) for x, ys in adj.items()}
            s2 = dict(sets)
            _merge(a2, s2, u, w)
            found = search(a2, s2)
            if found is not None:
                return found
        return None

    for comp in G.components():
        adj = {v: set(G.adj[v]) for v in comp}
        sets = {v: frozenset([v]) for v in comp}
        found = search(adj, sets)
        if found is not None:
            return found
    return None


def _merge(adj: dict[int, set[int]], sets: dict[int, frozenset[int]], keep: int, gone: int) -> None:
    """Contracts the edge keep-gone onto ``keep``."""
    for y in adj.pop(gone):
        adj[y].discard(gone)
        if y != keep:
            adj[y].add(keep)
            adj[keep].add(y)
    adj[keep].discard(keep)
    sets[keep] = sets[keep] | sets.pop(gone)


# improvement checks


def verify_improve_item2(
    G: Graph,
    fam: ClusterFamily,
    tup: ImproveTuple,
    bound: float,
    k: int,
    c: int = 1,
    h: int = 6,
    start: tuple[frozenset[int], frozenset[int]] | None = None,
    W: Iterable[int] | None = None,
    theta: int | None = None,
) -> Verdict:
    """Checks the pattern guarantees of one tuple against a planted family.

    ``start`` is the initial separation, needed for the rich-case conclusion.
    """
    U = fam.union()
    A, B, C = tup.A, tup.B, tup.C
    if W is not None:
        W = frozenset(W)
        if len(A & W) < theta or len(B & W) < theta:
            return Verdict(False, ("unbalanced", len(A & W), len(B & W)))
    missed = (A & B & U) - C
    if missed:
        return Verdict(False, ("pattern-outside-C", sorted(missed)))
    if len(C & U) > bound:
        return Verdict(False, ("pattern-in-C-too-large", len(C & U), bound))
    if start is not None:
        S0 = start[0] & start[1]
        inside = sum(1 for K in fam.clusters if K & S0)
        if inside > h * (h + 1) * math.sqrt(k):
            hit = sum(1 for K in fam.clusters if K & C)
            if hit < math.sqrt(k) / c:
                return Verdict(False, ("rich-case-too-few", hit))
    return Verdict(True)


# Monte-Carlo harness


@dataclass
class SuccessReport:
    trials: int = 0
    successes: int = 0
    run_failures: int = 0
    coverage_misses: int = 0
    sparsity_misses: int = 0
    max_intersections: list[int | None] = field(default_factory=list)
    successful_seeds: list[int] = field(default_factory=list)
    thresholds: tuple[int, int] = (0, 0)

    @property
    def rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0

    def consistent(self) -> bool:
        total = self.successes + self.run_failures + self.coverage_misses + self.sparsity_misses
        return total == self.trials == len(self.max_intersections)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["rate"] = self.rate
        out["thresholds"] = list(self.thresholds)
        return out


def pattern_target(G: Graph, pattern: Iterable[int] | ClusterFamily, d: int) -> frozenset[int]:
    """The vertex set a run must keep: Z itself, or the union of the clusters."""
    if isinstance(pattern, ClusterFamily):
        if pattern.d > 2 * d and d > 0:
            raise InputError("clusters are wider than 2d")
        ok = validate_clusters(G, pattern)
        if not ok:
            raise InputError(f"invalid cluster: {ok.witness}")
        if d > 0:
            pattern = disjoint_clusters(G, pattern)
        return pattern.union()
    Z = frozenset(pattern)
    G.check_vertices(Z)
    return Z


def monte_carlo_success(
    G: Graph,
    k: int,
    pattern: Iterable[int] | ClusterFamily,
    trials: int,
    thresholds: tuple[int, int],
    cfg: RunConfig | None = None,
    seed: int = 0,
) -> SuccessReport:
    """Runs baker_decompose with seeds seed, seed+1, ... and classifies each run.

    ``thresholds = (missing, sparsity)``: a run succeeds when at most
    ``missing`` pattern vertices fall outside V(G') and every bag meets
    N^d[pattern] in at most ``sparsity`` vertices.
    """
    cfg = cfg or RunConfig(k=k)
    U = pattern_target(G, pattern, cfg.d)
    ball = neighborhood(G, U, cfg.d) if U else frozenset()
    missing, sparsity = thresholds
    rep = SuccessReport(thresholds=(missing, sparsity))
    for i in range(trials):
        s = seed + i
        rep.trials += 1
        try:
            res = baker_decompose(G, k, cfg, Stream(s))
        except RunFailure:
            rep.run_failures += 1
            rep.max_intersections.append(None)
            continue
        worst = max((len(b & ball) for b in res.td.bags), default=0)
        rep.max_intersections.append(worst)
        if len(U - res.vertices) > missing:
            rep.coverage_misses += 1
        elif worst > sparsity:
            rep.sparsity_misses += 1
        else:
            rep.successes += 1
            rep.successful_seeds.append(s)
    return rep
