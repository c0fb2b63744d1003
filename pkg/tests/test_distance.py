import itertools

import networkx as nx
import pytest

from conftest import to_nx
from patternsparse import Graph, InputError, dual_distance, grid, path, pq_structure, reweighted_chain, shortcut_paths
from patternsparse.distance import ParameterError, chain_spacing, min_chain_length, min_weight_separator
from patternsparse.flow import ChainOutcome, NoPathError, PathsOutcome, PQStructure


def test_shortcut_two_disjoint_paths():
    # s=0, t=5, two internally disjoint paths of length 4
    G = Graph(8, [(0, 1), (1, 2), (2, 3), (3, 5), (0, 4), (4, 6), (6, 7), (7, 5)])
    pq = PQStructure(0, 5, 0, 2, (), ((0, 1, 2, 3, 5), (0, 4, 6, 7, 5)), {}, {})
    out = shortcut_paths(G, 0, 5, (), (), pq, 1, 1)
    H = to_nx(G)
    ball = set(nx.multi_source_dijkstra_path_length(H, {0, 5}, cutoff=1))
    for P, Q in zip(out.paths, out.Q):
        assert len(P) == 5 and Q is not None
        assert Q == set(P) & ball and len(Q) <= 4


def test_shortcut_single_path():
    G = path(3)
    pq = pq_structure(G, 0, 2, 1)
    out = shortcut_paths(G, 0, 2, (), (), pq, 1, max(1, pq.p))
    assert out.paths == ((0, 1, 2),) and out.Q == (frozenset({0, 1, 2}),)


def test_shortcut_takes_the_short_way_past_a_public_vertex():
    # a ladder where the structure's path wanders along the public vertex's ball
    G = grid(2, 9)
    pq = PQStructure(0, 17, 0, 2, (), ((0, 1, 2, 3, 4, 13, 14, 15, 16, 17), (0, 9, 10, 11, 12, 13, 4, 5, 6, 7, 8, 17)),
                     {}, {})
    out = shortcut_paths(G, 0, 17, (), (), pq, 1, 1)
    H = to_nx(G)
    for i, P in enumerate(out.paths):
        for u in pq.public(i) | {0, 17}:
            ball = set(nx.single_source_shortest_path_length(H, u, cutoff=1))
            assert len(ball & set(P)) <= 3


def test_chain_on_a_long_path_reuses_separators():
    G = path(60)
    q, d = 2, 1
    pq = pq_structure(G, 0, 59, q)
    need = min_chain_length(q, d)
    out = reweighted_chain(G, 0, 59, (), pq.chain[:need], q, d)
    z = chain_spacing(q, d)
    assert [C for C in out.separators] == [pq.chain[j * z + d] for j in range(1, len(out.separators) + 1)]


def test_chain_too_short():
    G = path(10)
    pq = pq_structure(G, 0, 9, 2)
    with pytest.raises(ParameterError):
        reweighted_chain(G, 0, 9, (), pq.chain, 2, 1)


def test_min_weight_separator_matches_brute_force():
    G = grid(2, 8)
    H = to_nx(G)
    weight = [1 + (v % 3) for v in range(G.n)]
    cut, value = min_weight_separator(G, 0, 15, (), weight)
    best = None
    inner = [v for v in range(G.n) if v not in (0, 15)]
    for r in range(1, 4):
        for C in itertools.combinations(inner, r):
            R = H.copy()
            R.remove_nodes_from(C)
            if not nx.has_path(R, 0, 15):
                w = sum(weight[v] for v in C)
                best = w if best is None else min(best, w)
    assert value == best == sum(weight[v] for v in cut)


def test_dual_distance_examples():
    out = dual_distance(path(2), 0, 1, (), (), 1, 2, 1)
    assert isinstance(out, PathsOutcome) and all(Q == {0, 1} for Q in out.Q)
    out = dual_distance(path(60), 0, 59, (), (), 2, 2, 1)
    assert isinstance(out, ChainOutcome) and out.separators
    theta = Graph(8, [(0, 1), (1, 7), (0, 2), (2, 3), (3, 7), (0, 4), (4, 5), (5, 6), (6, 7)])
    out = dual_distance(theta, 0, 7, {1}, (), 2, 3, 1, lam=1)
    assert isinstance(out, PathsOutcome)
    assert all(1 not in P for P in out.paths)


def test_dual_distance_errors():
    G = path(5)
    with pytest.raises(InputError):
        dual_distance(G, 0, 4, {0}, (), 2, 2, 1)
    with pytest.raises(NoPathError):
        dual_distance(G, 0, 4, {2}, (), 2, 2, 1)
    with pytest.raises(InputError):
        dual_distance(grid(3, 3), 0, 8, {1, 7}, (), 2, 2, 1, lam=1)
