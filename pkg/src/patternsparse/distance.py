"""Distance-aware duality: shortcut paths, reweighted separator chains and the dispatcher."""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .flow import ChainOutcome, NoPathError, PathsOutcome, PQStructure, pq_structure
from .graph import Graph, InputError, neighborhood
from .network import Network


class ParameterError(InputError):
    """Configured parameters leave no room for the requested construction."""


def _lex_shortest_path(G: Graph, s: int, t: int, allowed: set[int]) -> list[int] | None:
    """Shortest s-t path inside ``allowed``; each step back picks the smallest predecessor."""
    blocked = set(range(G.n)) - allowed
    dist = G.bfs([s], blocked=blocked)
    if t not in dist:
        return None
    path = [t]
    v = t
    while v != s:
        v = min(u for u in G.adj[v] if dist.get(u) == dist[v] - 1)
        path.append(v)
    path.reverse()
    return path


def _lift(pq: PQStructure, keep: Sequence[int]) -> PQStructure:
    """Maps a structure computed on an induced subgraph back to original ids."""
    f = keep.__getitem__
    return PQStructure(
        f(pq.s),
        f(pq.t),
        pq.p,
        pq.q,
        tuple(frozenset(map(f, C)) for C in pq.chain),
        tuple(tuple(map(f, P)) for P in pq.paths),
        {f(v): y for v, y in pq.labels.items()},
        {f(v): z for v, z in pq.z.items()},
        pq.cost,
    )


def pq_structure_avoiding(G: Graph, s: int, t: int, X: Iterable[int], q: int) -> PQStructure:
    """pq_structure on G - X, reported in the ids of G."""
    X = set(X)
    if s in X or t in X:
        raise InputError("s and t must lie outside X")
    H, keep = G.delete(X)
    index = {v: i for i, v in enumerate(keep)}
    return _lift(pq_structure(H, index[s], index[t], q), keep)


def shortcut_paths(
    G: Graph,
    s: int,
    t: int,
    X: Iterable[int],
    Z0: Iterable[int],
    pq: PQStructure,
    d: int,
    r: int,
) -> PathsOutcome:
    """Reroutes each path so it meets every d-ball around its public vertices briefly.

    ``Q[i]`` is None for paths whose retained set exceeds 10dr.
    """
    X = frozenset(X)
    Z0 = frozenset(Z0) - X
    if r < pq.p:
        raise InputError("r must be at least p")
    bound = 10 * d * r
    new_paths = []
    Qs: list[frozenset[int] | None] = []
    for i in range(pq.q):
        pub = pq.public(i)
        priv = pq.private(i)
        near = G.bfs(priv, blocked=X | pub | {s, t}, limit=d)
        zi = {z for z in Z0 if z in near}
        centers = pub | zi | {s, t}
        balls = neighborhood(G, centers, d, blocked=X)
        path = _lex_shortest_path(G, s, t, set(priv) | set(balls))
        if path is None:
            raise AssertionError("shortcut graph lost its s-t path")
        on = set(path)
        for v in centers:
            ball = neighborhood(G, [v], d, blocked=X)
            if len(on & ball) > 2 * d + 1:
                raise AssertionError(f"path {i} meets the ball of {v} too often")
        Q = frozenset(on & balls)
        new_paths.append(tuple(path))
        Qs.append(Q if len(Q) <= bound else None)
    return PathsOutcome(tuple(new_paths), tuple(Qs))


def chain_spacing(q: int, d: int) -> int:
    """Gap z between consecutive reused separators, rounded up."""
    return math.ceil(2 * math.log2(2 * q + 1) + 2 * d)


def min_chain_length(q: int, d: int) -> int:
    """Smallest p for which the reweighted chain is nonempty."""
    return 3 * chain_spacing(q, d) + 2 * d + 2


def min_weight_separator(
    G: Graph, s: int, t: int, X: Iterable[int], weight: Sequence[int]
) -> tuple[frozenset[int], int]:
    """Minimum-weight s-t vertex separator in G - X, the one closest to s."""
    X = set(X)
    comp = sorted(set(G.bfs([s], blocked=X | {t})) | {t})
    inner = [v for v in comp if v != s and v != t]
    ids = {v: i for i, v in enumerate(inner)}
    net = Network(2 + 2 * len(inner))
    S, T = 0, 1
    big = sum(weight[v] for v in inner) + 1

    def vin(v: int) -> int:
        return T if v == t else 2 + 2 * ids[v]

    def vout(v: int) -> int:
        return S if v == s else 3 + 2 * ids[v]

    for v in inner:
        net.add_arc(vin(v), vout(v), weight[v])
    member = set(comp)
    for u in comp:
        if u == t:
            continue
        for w in G.adj[u]:
            if w == s or w not in member:
                continue
            if u == s and w == t:
                raise InputError("s and t are adjacent; no vertex separator exists")
            net.add_arc(vout(u), vin(w), big)
    value = net.max_flow(S, T)
    side = net.reachable(S)
    cut = frozenset(v for v in inner if vin(v) in side and vout(v) not in side)
    return cut, value


def reweighted_chain(
    G: Graph,
    s: int,
    t: int,
    X: Iterable[int],
    chain: Sequence[Iterable[int]],
    q: int,
    d: int,
) -> ChainOutcome:
    """Replaces every z-th separator by a min-weight separator under 2^distance weights."""
    X = frozenset(X)
    chain = [frozenset(C) for C in chain]
    if q < 2:
        raise InputError("q must be at least 2")
    p = len(chain)
    z = chain_spacing(q, d)
    top = (p - 2 * (d + 1)) // z - 2
    if top < 1:
        raise ParameterError(f"chain of length {p} too short; need p >= {min_chain_length(q, d)}")
    cap = 2 * q + 1
    out = []
    for j in range(1, top + 1):
        C = chain[j * z + d]  # separator number jz+d+1
        dist = G.bfs(C, blocked=X)
        weight = [0] * G.n
        for v in range(G.n):
            e = dist.get(v)
            weight[v] = cap if e is None else min(cap, 2 ** min(e, cap.bit_length()))
        cut, value = min_weight_separator(G, s, t, X, weight)
        if value > 2 * q:
            raise AssertionError("min-weight separator heavier than the reused one")
        out.append(cut)
    _check_spread(G, s, t, X, out, d)
    return ChainOutcome(tuple(out))


def _check_spread(G: Graph, s: int, t: int, X: frozenset[int], seps: list[frozenset[int]], d: int) -> None:
    owner: dict[int, int] = {}
    for j, C in enumerate(seps):
        for v in neighborhood(G, C, d, blocked=X):
            if owner.setdefault(v, j) != j:
                raise AssertionError(f"vertex {v} within distance {d} of two separators")
        if s in owner or t in owner:
            raise AssertionError("terminal within distance d of a separator")


def dual_distance(
    G: Graph,
    s: int,
    t: int,
    X: Iterable[int],
    Z0: Iterable[int],
    p: int,
    q: int,
    d: int,
    lam: int | None = None,
) -> ChainOutcome | PathsOutcome:
    """Chain of spread-out separators in G - X, or shortcut paths with small retained sets.

    The chain branch needs at least ``min_chain_length(q, d)`` separators, so a
    smaller ``p`` is raised to that value.
    """
    X = frozenset(X)
    G.check_vertices(X)
    if s in X or t in X:
        raise InputError("s and t must lie outside X")
    if lam is not None and X and len(G.components(X)) > lam:
        raise InputError("G[X] has more than lambda components")
    if q < 2 or p < 1 or d < 0:
        raise InputError("need q >= 2, p >= 1, d >= 0")
    if t not in G.bfs([s], blocked=X):
        raise NoPathError("s and t are disconnected in G - X")
    pq = pq_structure_avoiding(G, s, t, X, q)
    p_eff = max(p, min_chain_length(q, d))
    if pq.p >= p_eff:
        return reweighted_chain(G, s, t, X, pq.chain[:p_eff], q, d)
    return shortcut_paths(G, s, t, X, Z0, pq, d, r=max(p, pq.p))
