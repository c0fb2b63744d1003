"""(p,q)-structures from min-cost flow and the separator/path duality for d = 0."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graph import Graph, InputError, Verdict
from .network import INF, Network


class NoPathError(InputError):
    """s and t lie in different components."""


@dataclass(frozen=True)
class PQStructure:
    """A chain C_1..C_p of (s,t)-separators and q paths threading it.

    ``labels[v] = (y_in, y_out)`` are the integral dual values on the two copies
    of a split vertex and ``z[v] = y_out - y_in`` is 0 or 1.
    """

    s: int
    t: int
    p: int
    q: int
    chain: tuple[frozenset[int], ...]
    paths: tuple[tuple[int, ...], ...]
    labels: dict[int, tuple[int, int]]
    z: dict[int, int]
    cost: int = 0

    def public(self, i: int) -> frozenset[int]:
        """Inner vertices of path i that also lie on another path."""
        mine = set(self.paths[i][1:-1])
        shared = set()
        for j, other in enumerate(self.paths):
            if j != i:
                shared.update(mine.intersection(other[1:-1]))
        return frozenset(shared)

    def private(self, i: int) -> frozenset[int]:
        return frozenset(self.paths[i][1:-1]) - self.public(i)


def _split_network(G: Graph, s: int, t: int, q: int, comp: list[int]):
    inner = [v for v in comp if v != s and v != t]
    ids = {v: i for i, v in enumerate(inner)}
    net = Network(2 + 2 * len(inner))
    S, T = 0, 1
    big = q + 1

    def vin(v: int) -> int:
        return T if v == t else 2 + 2 * ids[v]

    def vout(v: int) -> int:
        return S if v == s else 3 + 2 * ids[v]

    cheap = {}
    for v in inner:
        cheap[v] = net.add_arc(vin(v), vout(v), 1, 0)
        net.add_arc(vin(v), vout(v), big, 1)
    for u in comp:
        if u == t:
            continue
        for w in G.adj[u]:
            if w == s:
                continue
            net.add_arc(vout(u), vin(w), big, 0)
    return net, vin, vout, inner, cheap


def pq_structure(G: Graph, s: int, t: int, q: int) -> PQStructure:
    """Builds a (p,q)-structure from a min-cost flow of value q on the split network."""
    if q <= 0:
        raise InputError("q must be positive")
    G.check_vertices([s, t])
    if s == t:
        raise InputError("s and t must differ")
    reach = G.bfs([s])
    if t not in reach:
        raise NoPathError("s and t are disconnected")
    # vertices reachable only through t play no role in s-t separation
    comp = sorted(set(G.bfs([s], blocked={t})) | {t})
    net, vin, vout, inner, cheap = _split_network(G, s, t, q, comp)
    S, T = 0, 1
    flow, cost, pot = net.min_cost_flow(S, T, q)
    if flow != q:
        raise AssertionError("infinite-capacity arcs should carry any flow value")
    pi = net.residual_distances(S, pot)
    labels = {s: (0, 0)}
    z = {}
    for v in inner:
        a, b = pi[vin(v)], pi[vout(v)]
        if a == INF or b == INF:
            raise AssertionError("split copy unreachable in the residual network")
        labels[v] = (int(a), int(b))
        z[v] = int(b - a)
    p = int(pi[T])
    labels[t] = (p, p)
    chain: list[set[int]] = [set() for _ in range(p)]
    for v in inner:
        if z[v] == 1:
            chain[labels[v][1] - 1].add(v)
    node_paths = net.decompose_paths(S, T, q)
    back = {S: s, T: t}
    for v in inner:
        back[vin(v)] = v
        back[vout(v)] = v
    paths = []
    for nodes in node_paths:
        walk = [back[x] for x in nodes]
        path = [walk[0]]
        for v in walk[1:]:
            if v != path[-1]:
                path.append(v)
        paths.append(tuple(path))
    return PQStructure(
        s, t, p, q, tuple(frozenset(c) for c in chain), tuple(paths), labels, z, cost
    )


def is_separator(G: Graph, s: int, t: int, C: Iterable[int], blocked: Iterable[int] = ()) -> bool:
    """Whether removing C (and ``blocked``) separates s from t."""
    gone = set(C) | set(blocked)
    if s in gone or t in gone:
        return False
    return t not in G.bfs([s], blocked=gone)


def verify_pq_structure(G: Graph, s: int, t: int, pq: PQStructure) -> Verdict:
    """Checks the (p,q)-structure axioms and the chain property."""
    if len(pq.chain) != pq.p:
        return Verdict(False, ("chain-length", len(pq.chain), pq.p))
    if len(pq.paths) != pq.q:
        return Verdict(False, ("path-count", len(pq.paths), pq.q))
    where: dict[int, int] = {}
    for j, C in enumerate(pq.chain):
        if not C:
            return Verdict(False, ("empty-separator", j + 1))
        for v in C:
            if v in (s, t):
                return Verdict(False, ("terminal-in-separator", j + 1))
            if v in where:
                return Verdict(False, ("separators-overlap", v))
            where[v] = j
    on_path: set[int] = set()
    for i, P in enumerate(pq.paths):
        if P[0] != s or P[-1] != t:
            return Verdict(False, ("path-endpoints", i))
        if len(set(P)) != len(P):
            return Verdict(False, ("path-not-simple", i))
        for a, b in zip(P, P[1:]):
            if not G.has_edge(a, b):
                return Verdict(False, ("path-edge-missing", i, (a, b)))
        hits = [where[v] for v in P if v in where]
        if hits != list(range(pq.p)):
            return Verdict(False, ("path-separator-order", i, hits))
        on_path.update(P)
    for v in where:
        if v not in on_path:
            return Verdict(False, ("separator-vertex-off-paths", v))
    counts: dict[int, int] = {}
    for P in pq.paths:
        for v in P[1:-1]:
            counts[v] = counts.get(v, 0) + 1
    for v, c in counts.items():
        if c > 1 and v not in where:
            return Verdict(False, ("shared-vertex-off-chain", v))
    for j, C in enumerate(pq.chain):
        if not is_separator(G, s, t, C):
            return Verdict(False, ("not-a-separator", j + 1))
    for i, Ci in enumerate(pq.chain):
        reach = G.bfs([s], blocked=Ci)
        for j in range(i + 1, pq.p):
            hit = next((v for v in pq.chain[j] if v in reach), None)
            if hit is not None:
                return Verdict(False, ("chain-order", i + 1, j + 1, hit))
    return Verdict(True)


@dataclass(frozen=True)
class ChainOutcome:
    separators: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class PathsOutcome:
    """Paths with their retained sets; ``Q[i]`` is None for an ineligible path."""

    paths: tuple[tuple[int, ...], ...]
    Q: tuple[frozenset[int] | None, ...]

    def eligible(self) -> list[int]:
        return [i for i, x in enumerate(self.Q) if x is not None]


def dual1_outcome(
    G: Graph, s: int, t: int, Z0: Iterable[int], p: int, q: int, k: int
) -> ChainOutcome | PathsOutcome:
    """A chain of p disjoint separators, or q paths each with a small retained set."""
    Z0 = frozenset(Z0)
    k0 = len(Z0)
    if p <= 0 or k <= 0:
        raise InputError("p and k must be positive")
    if q < 2 or q < k + k0 / p + 1:
        raise InputError(f"q={q} below k + k0/p + 1 = {k + k0 / p + 1}")
    pq = pq_structure(G, s, t, q)
    if pq.p >= p:
        return ChainOutcome(pq.chain[:p])
    Qs: list[frozenset[int] | None] = []
    for i, P in enumerate(pq.paths):
        priv_z = pq.private(i) & Z0
        if len(priv_z) > p:
            Qs.append(None)
            continue
        Qs.append(frozenset({s, t}) | pq.public(i) | priv_z)
    return PathsOutcome(pq.paths, tuple(Qs))
