import itertools

import networkx as nx
import pytest
from hypothesis import given, settings

from conftest import connected_graphs, to_nx
from patternsparse import ClusterFamily, Graph, InputError, RunConfig, exact_treewidth, find_minor_model, grid, path
from patternsparse import baker_decompose, monte_carlo_success
from patternsparse.rng import Stream
from patternsparse.oracles import complete_bipartite, complete_graph, verify_minor_model


def brute_treewidth(G: Graph) -> int:
    """Minimum over all elimination orderings of the largest fill-in neighbourhood."""
    best = G.n - 1
    for order in itertools.permutations(range(G.n)):
        H = to_nx(G)
        width = 0
        for v in order:
            nb = list(H[v])
            width = max(width, len(nb))
            H.add_edges_from(itertools.combinations(nb, 2))
            H.remove_node(v)
            if width >= best:
                break
        best = min(best, width)
    return best


def test_treewidth_examples():
    assert exact_treewidth(path(7)) == 1
    assert exact_treewidth(complete_graph(4)) == 3
    assert exact_treewidth(grid(3, 3)) == 3
    assert exact_treewidth(Graph(0, [])) == -1
    with pytest.raises(InputError):
        exact_treewidth(grid(4, 4))


@given(connected_graphs(max_n=7))
@settings(max_examples=40, deadline=None)
def test_treewidth_matches_brute_force(G):
    assert exact_treewidth(G) == brute_treewidth(G)


def test_minor_examples():
    K5 = complete_graph(5)
    model = find_minor_model(K5, K5)
    assert model is not None and verify_minor_model(K5, K5, model)
    assert find_minor_model(grid(3, 4), complete_bipartite(3, 3)) is None
    K4 = complete_graph(4)
    model = find_minor_model(grid(4, 4), K4)
    assert model is not None and verify_minor_model(grid(4, 4), K4, model)
    with pytest.raises(InputError):
        find_minor_model(grid(5, 5), K4)


def test_minor_model_verifier():
    G = path(4)
    H = Graph(2, [(0, 1)])
    assert verify_minor_model(G, H, [{0, 1}, {2, 3}])
    assert verify_minor_model(G, H, [{0}, {2}]).witness == ("missing-adjacency", 0, 1)
    assert verify_minor_model(G, H, [{0, 2}, {3}]).witness == ("disconnected-branch-set", 0)
    assert verify_minor_model(G, H, [{0, 1}, {1}]).witness == ("overlap", 1)


@given(connected_graphs(min_n=5, max_n=9))
@settings(max_examples=60, deadline=None)
def test_minor_search_agrees_with_planarity(G):
    k5 = find_minor_model(G, complete_graph(5))
    k33 = find_minor_model(G, complete_bipartite(3, 3))
    for H, m in ((complete_graph(5), k5), (complete_bipartite(3, 3), k33)):
        if m is not None:
            assert verify_minor_model(G, H, m)
    planar, _ = nx.check_planarity(to_nx(G))
    assert planar == (k5 is None and k33 is None)


def test_vacuous_thresholds_accept_every_run():
    G = grid(5, 5)
    rep = monte_carlo_success(G, 9, [0, 12, 24], 30, (G.n, G.n), RunConfig(k=9))
    assert rep.consistent()
    assert rep.successes == rep.trials - rep.run_failures


def test_k_equal_n_fails_only_on_removed_layers():
    # the recursion would keep everything in one leaf; only the layer shift can drop vertices
    G = grid(3, 3)
    rep = monte_carlo_success(G, 9, range(9), 30, (0, 9), RunConfig(k=9))
    assert rep.run_failures == rep.sparsity_misses == 0
    for s in range(30):
        shift = baker_decompose(G, 9, RunConfig(k=9), Stream(s)).stats["shift"]
        # real vertices occupy layers 1..5 below the apex
        assert (s in rep.successful_seeds) == (shift not in range(1, 6))


def test_report_is_reproducible():
    G = grid(6, 6)
    fam = ClusterFamily.of([[0, 1], [20, 26]], 1)
    a = monte_carlo_success(G, 4, fam, 20, (0, 10), RunConfig(k=4, d=1), seed=7)
    b = monte_carlo_success(G, 4, fam, 20, (0, 10), RunConfig(k=4, d=1), seed=7)
    assert a.to_dict() == b.to_dict()
    assert a.to_dict()["thresholds"] == [0, 10]


def test_bad_clusters_rejected():
    G = grid(4, 4)
    with pytest.raises(InputError):
        monte_carlo_success(G, 4, ClusterFamily.of([[0, 15]], 1), 1, (0, 1), RunConfig(k=4, d=1))
