import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import check_td, planar_graphs, to_nx
from patternsparse import (
    Graph,
    InputError,
    RunConfig,
    RunFailure,
    TreeDecomposition,
    baker_decompose,
    decompose_bounded_diameter,
    glue,
    grid,
    path,
    random_maximal_planar,
)
from patternsparse.decomposer import baker_slabs
from patternsparse.rng import Stream


def test_leaf_at_root_when_k_is_large():
    G = grid(3, 3)
    res = decompose_bounded_diameter(G, 16, (), RunConfig(k=16))
    assert res.td.size == 1 and res.td.bags[0] == set(range(9))
    assert res.vertices == set(range(9))


def test_small_k_grid_is_valid():
    G = grid(6, 6)
    for seed in range(5):
        res = decompose_bounded_diameter(G, 4, (), RunConfig(k=4), Stream(seed))
        assert check_td(G, res.td, res.vertices) is None
        assert res.td.max_bag_size() <= res.bag_cap


def test_recursion_keeps_y0_in_root():
    G = random_maximal_planar(60, 1)
    Y0 = [5, 17, 40]
    ok = 0
    for seed in range(10):
        for d in (0, 1):
            cfg = RunConfig(k=16, d=d)
            try:
                res = decompose_bounded_diameter(G, 16, Y0, cfg, Stream(seed))
            except RunFailure:
                continue
            ok += 1
            assert set(Y0) <= res.td.bags[res.td.root]
            ball = set(nx.multi_source_dijkstra_path_length(to_nx(G), set(Y0), cutoff=d))
            assert ball <= res.vertices
            assert check_td(G, res.td, res.vertices) is None
            assert res.td.max_bag_size() <= res.bag_cap
            assert res.stats["max_depth"] <= res.stats["depth_cap"]
    assert ok


def test_same_seed_same_result():
    G = grid(10, 10)
    a = baker_decompose(G, 9, RunConfig(k=9), Stream(3))
    b = baker_decompose(G, 9, RunConfig(k=9), Stream(3))
    assert a.td == b.td and a.vertices == b.vertices and a.stats == b.stats


def test_decompose_input_errors():
    with pytest.raises(InputError):
        decompose_bounded_diameter(Graph(3, [(0, 1)]), 9)
    with pytest.raises(InputError):
        baker_decompose(Graph(3, [(0, 1), (1, 2)]), 4)
    with pytest.raises(InputError):
        decompose_bounded_diameter(grid(2, 2), 9, [7])


def test_small_diameter_gives_one_slab_per_component():
    G = Graph.from_rotation([[1], [0], [3], [2]])
    slabs = baker_slabs(G, 4, 4)
    assert len(slabs) == 2 and {s.component for s in slabs} == {0, 1}


def test_path_slabs_drop_exactly_the_removed_layers():
    G = path(50)
    for seed in range(10):
        res = baker_decompose(G, 4, RunConfig(k=4), Stream(seed))
        width, shift = res.stats["width"], res.stats["shift"]
        assert res.stats["slabs"] > 1
        assert check_td(G, res.td, res.vertices) is None
        # the apex hangs off vertex 0, so vertex v sits in layer v + 1
        removed = {v for v in range(50) if (v + 1) % (width + 1) == shift % (width + 1)}
        assert set(range(50)) - res.vertices == removed


@given(planar_graphs(), st.integers(0, 20), st.sampled_from([4, 9]), st.integers(0, 1))
@settings(max_examples=40, deadline=None)
def test_baker_output_is_valid(G, seed, k, d):
    cfg = RunConfig(k=k, d=d)
    try:
        res = baker_decompose(G, k, cfg, Stream(seed))
    except RunFailure:
        return
    assert check_td(G, res.td, res.vertices) is None
    assert res.td.max_bag_size() <= res.bag_cap


def test_planted_z_outside_removed_layers_is_kept():
    # on grids, vertices at distance r from the corner sit in layer r + 1
    G = grid(10, 10)
    Z = [11, 45, 78]
    cfg = RunConfig(k=4)
    hits = 0
    for seed in range(40):
        res = baker_decompose(G, 4, cfg, Stream(seed))
        width, shift = res.stats["width"], res.stats["shift"]
        layers = {z: z // 10 + z % 10 + 1 for z in Z}
        if all(layers[z] % (width + 1) != shift for z in Z):
            hits += 1
            assert set(Z) <= res.vertices
    assert hits


# gluing


def _nx_td(G: Graph, vertices):
    """A tree decomposition of G[vertices] in the ids of G."""
    H = to_nx(G).subgraph(vertices)
    _, T = nx.algorithms.approximation.treewidth_min_fill_in(H)
    nodes = list(T.nodes)
    index = {b: i for i, b in enumerate(nodes)}
    parent = [-1] * len(nodes)
    for u, w in nx.bfs_edges(T, nodes[0]):
        parent[index[w]] = index[u]
    return TreeDecomposition.build(parent, [set(b) for b in nodes])


def test_glue_single_node_is_identity():
    G = grid(4, 4)
    outer = TreeDecomposition.build([-1], [set(range(16))])
    inner = _nx_td(G, range(16))
    total, td = glue(G, outer, [(range(16), inner)])
    assert total == set(range(16)) and td.bags == inner.bags and td.parent == inner.parent


def _column_td(cols, rows=6, width=6, drop=()):
    """Path decomposition of a grid piece with one bag per pair of adjacent columns."""
    bags = [{r * width + c for r in range(rows) for c in (a, b)} - set(drop) for a, b in zip(cols, cols[1:])]
    return TreeDecomposition.build([-1] + list(range(len(bags) - 1)), bags)


def test_glue_two_pieces():
    G = grid(6, 6)
    left = {v for v in range(36) if v % 6 <= 3}
    right = {v for v in range(36) if v % 6 >= 2}
    outer = TreeDecomposition.build([-1, 0], [left, right])
    sigma = left & right
    # the right piece drops one adhesion vertex; gluing restores it from the left piece
    Vr = right - {14}
    parts = [(left, _column_td([0, 1, 2, 3])), (Vr, _column_td([2, 3, 4, 5], drop=[14]))]
    total, td = glue(G, outer, parts)
    assert total == set(range(36))
    assert check_td(G, td, total) is None
    assert td.max_bag_size() <= max(p[1].max_bag_size() for p in parts) + len(sigma)


def test_glue_rejects_missing_holder():
    G = grid(2, 4)
    outer = TreeDecomposition.build([-1, 0], [{0, 1, 4, 5}, {1, 2, 3, 5, 6, 7}])
    a = TreeDecomposition.build([-1, 0], [{0, 1, 4}, {0, 4, 5}])
    b = _nx_td(G, {2, 3, 6, 7, 1, 5})
    with pytest.raises(InputError):
        glue(G, outer, [({0, 1, 4, 5}, a), ({1, 2, 3, 5, 6, 7}, b)])
    with pytest.raises(InputError):
        glue(G, outer, [({0, 1, 4, 5}, a)])
