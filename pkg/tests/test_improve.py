import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from patternsparse import ClusterFamily, ImproveConfig, InputError, balanced_node_for_weight, candidate_separations, grid, path
from patternsparse import improve_enumerate, improve_sample, three_path_decomposition
from patternsparse.graph import Separation
from patternsparse.improve import (
    AnnotatedForest,
    EnumerationTooLarge,
    SamplingFailure,
    SplitUnavailable,
    all_splits,
    split_options,
    z_split,
)
from patternsparse.oracles import verify_improve_item2
from patternsparse.planar import CandidateSeparation
from patternsparse.rng import ReplayChooser, Stream


def test_split_range_on_a_path():
    af = AnnotatedForest.build(range(5), [(0, 1), (1, 2), (2, 3), (3, 4)], [10], delta=2)
    J, lo, hi = split_options(af)
    assert (lo, hi) == (4, 6)
    outs = all_splits(af)
    assert len(outs) == 4 * 3
    for out in outs:
        assert len(out) == 2 and out.weight == 10
        first = next(c for c in out.components if 0 in c.vertices)
        assert first.zeta in {4, 5, 6}


def test_split_range_on_a_star():
    af = AnnotatedForest.build(range(4), [(0, 1), (0, 2), (0, 3)], [8], delta=3)
    assert split_options(af)[1:] == (2, 6)


def test_split_unavailable():
    with pytest.raises(SplitUnavailable):
        split_options(AnnotatedForest.build([0], [], [1]))
    with pytest.raises(SplitUnavailable):
        split_options(AnnotatedForest.build([0], [], [5]))


@st.composite
def trees_with_patterns(draw):
    n = draw(st.integers(2, 8))
    edges = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
    P = draw(st.sets(st.integers(0, n - 1), min_size=2))
    return n, edges, P


@given(trees_with_patterns())
@settings(max_examples=150, deadline=None)
def test_some_split_stays_consistent(case):
    n, edges, P = case
    af = AnnotatedForest.build(range(n), edges, [len(P)])
    assert af.consistent_with(P)
    assert any(out.consistent_with(P) for out in all_splits(af))


def test_z_split_replays_choices():
    af = AnnotatedForest.build(range(5), [(0, 1), (1, 2), (2, 3), (3, 4)], [10], delta=2)
    out = z_split(af, ReplayChooser([2, 1]))
    assert [sorted(c.vertices) for c in out.components] == [[0, 1, 2], [3, 4]]
    assert [c.zeta for c in out.components] == [5, 5]


def _grid_fixture():
    G = grid(8, 8)
    cs = balanced_node_for_weight(three_path_decomposition(G, 0), [1.0] * 64)
    return G, cs


def test_light_start_exits_early():
    G, cs = _grid_fixture()
    # with the default thresholds no guess is heavy at k = 2
    t = improve_sample(G, 2, [], cs, ImproveConfig(heavy_scale=100.0), Stream(0))
    assert t.early and t.separation == cs.separation
    assert t.C == cs.separation.separator and not t.C_tilde


def test_balance_for_w_is_kept():
    G, cs = _grid_fixture()
    W = list(range(64))
    cfg = ImproveConfig(heavy_scale=0.1)
    kept = 0
    for seed in range(300):
        try:
            t = improve_sample(G, 16, [], cs, cfg, Stream(seed), W=W, theta=16)
        except SamplingFailure:
            continue
        kept += 1
        assert len(t.A & set(W)) >= 16 and len(t.B & set(W)) >= 16
    assert kept


def test_input_errors():
    G, cs = _grid_fixture()
    with pytest.raises(InputError):
        improve_sample(G, 1, [], cs)
    with pytest.raises(InputError):
        improve_sample(G, 4, [], cs, W=[0, 1])
    with pytest.raises(InputError):
        improve_sample(G, 4, [], cs, W=list(range(64)), theta=40)
    bad = CandidateSeparation(cs.separation, frozenset(), cs.node)
    with pytest.raises(InputError):
        improve_sample(G, 4, [], bad, ImproveConfig(h=3))


def test_enumeration_on_k2():
    G = path(2)
    cs = CandidateSeparation(Separation.of({0, 1}, {1}), frozenset(), 0)
    fam = improve_enumerate(G, 2, [], cs, ImproveConfig(h=3))
    assert any(t.early and t.C == {1} for t in fam)


def test_enumeration_budget():
    G, cs = _grid_fixture()
    with pytest.raises(EnumerationTooLarge):
        improve_enumerate(G, 9, [], cs, ImproveConfig(heavy_scale=0.1, node_budget=50))


def test_sampled_tuples_are_enumerated():
    G = grid(2, 6)
    cs = candidate_separations(three_path_decomposition(G, 0), range(G.n))[0]
    cfg = ImproveConfig(h=5, c=1, heavy_scale=0.1)
    fam = {t.key() for t in improve_enumerate(G, 4, [], cs, cfg)}
    for seed in range(50):
        try:
            assert improve_sample(G, 4, [], cs, cfg, Stream(seed)).key() in fam
        except SamplingFailure:
            pass


def test_item2_examples():
    G, cs = _grid_fixture()
    t = improve_sample(G, 2, [], cs, ImproveConfig(heavy_scale=100.0), Stream(0))
    assert verify_improve_item2(G, ClusterFamily.of([], 0), t, 0, 2)
    S = sorted(cs.separation.separator)
    fam = ClusterFamily.of([[S[0]], [S[1]]], 0)
    assert verify_improve_item2(G, fam, t, 2, 2)
    assert not verify_improve_item2(G, fam, t, 1, 2)


def test_item2_monte_carlo_success():
    G, cs = _grid_fixture()
    S = sorted(cs.separation.separator)
    rng = np.random.default_rng(0)
    Z = sorted(set(rng.choice(S, 4, replace=False).tolist()) | set(rng.choice(64, 5, replace=False).tolist()))
    fam = ClusterFamily.of([[z] for z in Z], 0)
    k = 9
    bound = math.isqrt(k)
    cfg = ImproveConfig(heavy_scale=0.1)
    start = (cs.separation.A, cs.separation.B)
    good = []
    for seed in range(10_000):
        try:
            t = improve_sample(G, k, [], cs, cfg, Stream(seed))
        except SamplingFailure:
            continue
        if verify_improve_item2(G, fam, t, bound, k, start=start):
            good.append(seed)
    # the early exit puts all four separator pattern vertices in C, above the bound
    assert len(set(Z) & cs.separation.separator) > bound
    assert good
