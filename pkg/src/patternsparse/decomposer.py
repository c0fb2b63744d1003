"""Randomized pattern-covering tree decompositions of planar graphs.

The core recursion works on a connected embedded graph of small diameter and
keeps a vertex set M (what is still to be decomposed), an interface R and two
subsets of R: the difficult part R~ and the part R_old that has not been
balanced for a while.  It cycles through five modes that balance M - R, R, R~,
R_old and a hidden pattern in turn.  ``baker_decompose`` cuts an arbitrary
planar graph into slabs of bounded radius around an apex and runs the
recursion on each slab.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .config import RunConfig
from .graph import Graph, InputError, TreeDecomposition
from .improve import ImproveTuple, SamplingFailure, improve_sample
from .planar import (
    CandidateSeparation,
    balanced_node_for_weight,
    candidate_separations,
    three_path_decomposition,
)
from .rng import SampleChooser, Stream


class RunFailure(RuntimeError):
    """A randomized run gave up; the caller may retry with another seed."""


@dataclass(frozen=True)
class DecompositionResult:
    """Tree decomposition of G[vertices] with a difficult set per bag."""

    graph: Graph
    vertices: frozenset[int]
    td: TreeDecomposition
    stats: dict = field(default_factory=dict)

    @property
    def bag_cap(self) -> float:
        return self.stats.get("bag_cap", math.inf)


def _as_stream(rng: Stream | int) -> Stream:
    return rng if isinstance(rng, Stream) else Stream(int(rng))


class _Builder:
    """Accumulates tree nodes; children are attached as they are created."""

    def __init__(self) -> None:
        self.parent: list[int] = []
        self.bags: list[frozenset[int]] = []
        self.difficult: list[frozenset[int]] = []

    def node(self, parent: int, bag: Iterable[int], difficult: Iterable[int]) -> int:
        self.parent.append(parent)
        self.bags.append(frozenset(bag))
        self.difficult.append(frozenset(difficult))
        return len(self.bags) - 1

    def result(self) -> TreeDecomposition:
        return TreeDecomposition.build(self.parent, self.bags, self.difficult)


class _Recursion:
    def __init__(self, G: Graph, k: int, Y0: frozenset[int], cfg: RunConfig, root: int) -> None:
        self.G = G
        self.k = k
        self.cfg = cfg
        self.icfg = cfg.improve_config()
        self.sd = three_path_decomposition(G, root)
        self.diameter = G.diameter()
        self.lam_r, self.lam_c = cfg.budgets(self.diameter, k)
        self.depth_cap = cfg.depth_cap(G.n)
        self.leaf = cfg.leaf_size(k)
        self.out = _Builder()
        self.Y0 = Y0
        self.stats = {
            "calls": 0,
            "max_depth": 0,
            "max_R": 0,
            "max_R_tilde": 0,
            "rich": 0,
            "poor": 0,
            "pattern": 0,
            "pass": 0,
            "leaves": 0,
            "degenerate": 0,
        }

    def run(self, stream: Stream) -> None:
        V = frozenset(range(self.G.n))
        self.mbar = self.call(V, self.Y0, self.Y0, self.Y0, 0, stream, -1)

    def call(self, M, R, Rt, Rold, depth, stream: Stream, parent: int) -> frozenset[int]:
        st = self.stats
        st["calls"] += 1
        st["max_depth"] = max(st["max_depth"], depth)
        st["max_R"] = max(st["max_R"], len(R))
        st["max_R_tilde"] = max(st["max_R_tilde"], len(Rt))
        if depth > self.depth_cap:
            raise RunFailure(f"recursion deeper than {self.depth_cap}")
        if not (Rt <= R and Rold <= R and R <= M):
            raise AssertionError("interface sets out of order")
        if len(M - R) <= self.leaf:
            st["leaves"] += 1
            self.out.node(parent, M, Rt | (M - R))
            return M
        ch = SampleChooser(stream)
        mode = depth % 5
        tup: ImproveTuple | None = None
        if mode < 4:
            if mode == 3 and len(Rold) <= 3:
                Rold = R
            W = (M - R, R, Rt, Rold)[mode]
            if len(W) >= 4:
                tup = self.balanced(W, R, ch, stream)
                if tup is None:
                    st["degenerate"] += 1
                    st["leaves"] += 1
                    self.out.node(parent, M, Rt | (M - R))
                    return M
        elif R and ch.coin(1 / self.k, "pattern-step"):
            fam = [cs for cs in candidate_separations(self.sd, R) if not cs.degenerate]
            if fam:
                cs = fam[ch.choose(len(fam), "candidate")]
                st["pattern"] += 1
                tup = self.improve(cs, R, None, None, stream)
        if tup is None:
            st["pass"] += 1
            return self.call(M, R, Rt, Rold, depth + 1, stream.child("next"), parent)
        return self.split(M, R, Rt, Rold, depth, stream, parent, tup)

    def balanced(self, W: frozenset[int], R, ch: SampleChooser, stream: Stream) -> ImproveTuple | None:
        mu = {v: 1.0 for v in W}
        cs = balanced_node_for_weight(self.sd, mu)
        if cs.degenerate:
            return None
        theta = len(W) // 4
        if ch.coin(1 / self.k, "rich"):
            self.stats["rich"] += 1
            return self.improve(cs, R, W, theta, stream)
        self.stats["poor"] += 1
        S = cs.separation.separator
        return ImproveTuple(cs.separation, S, frozenset())

    def improve(self, cs: CandidateSeparation, R, W, theta, stream: Stream) -> ImproveTuple:
        try:
            return improve_sample(self.G, self.k, R, cs, self.icfg, stream.child("improve"), W, theta)
        except SamplingFailure as exc:
            raise RunFailure(f"improvement step failed: {exc}") from exc

    def split(self, M, R, Rt, Rold, depth, stream, parent, tup: ImproveTuple) -> frozenset[int]:
        A, B, C, Ct = tup.A, tup.B, tup.C, tup.C_tilde
        Cbar = (A & B) - (C | R)
        node = self.out.node(parent, R | (C & M), Rt | (Ct & M))
        mbar: frozenset[int] = frozenset()
        for label, side in (("A", A), ("B", B)):
            keep = side - C
            RG = (R & side) | (C & M)
            RtG = (Rt & keep) | (Ct & M)
            RoldG = Rold & keep
            MG = (M & side) - Cbar
            mbar |= self.call(MG, RG, RtG, RoldG, depth + 1, stream.child(label), node)
        return mbar


def decompose_bounded_diameter(
    G: Graph,
    k: int,
    Y0: Iterable[int] = (),
    cfg: RunConfig | None = None,
    rng: Stream | int = 0,
    root: int = 0,
) -> DecompositionResult:
    """One run of the recursion on a connected embedded graph.

    Returns a decomposition of G[M] for the set M of vertices it covered, with
    Y0 inside the root bag.  Raises RunFailure when the run gives up.
    """
    cfg = cfg or RunConfig(k=k)
    Y0 = frozenset(Y0)
    G.check_vertices(Y0)
    if G.n == 0:
        raise InputError("graph is empty")
    if not G.is_connected():
        raise InputError("graph must be connected")
    stream = _as_stream(rng)
    if k <= cfg.kappa:
        sd = three_path_decomposition(G, root)
        td = sd.td
        bags = [b | Y0 for b in td.bags]
        diff = [frozenset(Y0) for _ in td.bags]
        td = TreeDecomposition.build(td.parent, bags, diff)
        stats = {"fallback": True, "bag_cap": 3 * (sd.eccentricity + 1) + len(Y0)}
        return DecompositionResult(G, frozenset(range(G.n)), td, stats)
    rec = _Recursion(G, k, Y0, cfg, root)
    rec.run(stream)
    stats = dict(rec.stats)
    stats.update(
        fallback=False,
        lambda_R=rec.lam_r,
        lambda_C=rec.lam_c,
        bag_cap=rec.lam_r + rec.lam_c,
        depth_cap=rec.depth_cap,
        diameter=rec.diameter,
    )
    return DecompositionResult(G, rec.mbar, rec.out.result(), stats)


# slabs


@dataclass(frozen=True)
class Slab:
    """One slab: a graph whose vertex ``apex`` stands for everything inside it."""

    graph: Graph
    apex: int
    back: tuple[int, ...]  # slab id -> id in the input graph, -1 for the apex
    component: int
    index: int


def baker_slabs(G: Graph, width: int, shift: int) -> list[Slab]:
    """Cuts every component into slabs of ``width`` BFS layers around a new apex.

    Each component gets a pendant apex attached to its smallest vertex.  Layers
    ``shift + (width + 1) i`` are removed; the layers strictly between two
    removed ones form a slab, with everything closer to the apex contracted
    into it.
    """
    if width < 1 or not 0 <= shift <= width:
        raise InputError("need width >= 1 and 0 <= shift <= width")
    H = G
    apexes = []
    comps = G.components()
    for comp in comps:
        apexes.append(H.n)
        H = H.add_pendant(min(comp))
    out = []
    for c, (comp, vc) in enumerate(zip(comps, apexes)):
        layer = H.bfs([vc])
        top = max(layer.values())
        i = 0
        while shift + (width + 1) * (i - 1) < top:
            hi = shift - 1 + (width + 1) * i
            lo = shift + (width + 1) * (i - 1)  # last removed layer below the slab
            region = [v for v, j in layer.items() if j <= hi]
            inner = [v for v, j in layer.items() if j <= lo] if i > 0 else [vc]
            real = [v for v, j in layer.items() if lo < j <= hi and v != vc]
            i += 1
            if not real:
                continue
            S, keep = H.induced(region)
            index = {v: j for j, v in enumerate(keep)}
            inner_ids = [index[v] for v in inner]
            if len(inner_ids) > 1:
                S2, remap, x = S.contract(inner_ids)
                back = [-1] * S2.n
                for j, v in enumerate(keep):
                    if remap[j] != x:
                        back[remap[j]] = v
                S, apex = S2, x
            else:
                apex = inner_ids[0]
                back = [v if v < G.n else -1 for v in keep]
                back[apex] = -1
            out.append(Slab(S, apex, tuple(back), c, i - 1))
    return out


def _lift_td(td: TreeDecomposition, back: Sequence[int], offset: int, root_parent: int):
    parent = []
    bags = []
    diff = []
    for t in range(td.size):
        p = td.parent[t]
        parent.append(root_parent if p < 0 else p + offset)
        bags.append(frozenset(back[v] for v in td.bags[t] if back[v] >= 0))
        d = td.difficult[t] if td.difficult is not None else ()
        diff.append(frozenset(back[v] for v in d if back[v] >= 0))
    return parent, bags, diff


def baker_decompose(
    G: Graph,
    k: int,
    cfg: RunConfig | None = None,
    rng: Stream | int = 0,
) -> DecompositionResult:
    """One run on an arbitrary embedded planar graph.

    A random shift picks which BFS layers are dropped.  Every slab then flips a
    coin: with probability 1/k it gets a plain three-path decomposition,
    otherwise the full recursion.  Slab decompositions hang below the first
    slab's root.
    """
    cfg = cfg or RunConfig(k=k)
    if G.n == 0:
        td = TreeDecomposition.build([-1], [()], [()])
        return DecompositionResult(G, frozenset(), td, {"slabs": 0, "bag_cap": 0})
    if G.rotation is None:
        raise InputError("graph needs a rotation system")
    stream = _as_stream(rng)
    width = k if cfg.d == 0 else (cfg.d + 1) * k
    ch = SampleChooser(stream.child("shift"))
    shift = ch.choose(width + 1, "shift")
    slabs = baker_slabs(G, width, shift)
    lam_r, lam_c = cfg.budgets(2 * width, k)
    parent: list[int] = []
    bags: list[frozenset[int]] = []
    diff: list[frozenset[int]] = []
    covered: set[int] = set()
    kinds = []
    depth = 0
    max_r = 0
    for s in slabs:
        sub = stream.child(f"slab-{s.component}-{s.index}")
        if SampleChooser(sub.child("coin")).coin(1 / k, "scarce"):
            sd = three_path_decomposition(s.graph, s.apex)
            res = DecompositionResult(s.graph, frozenset(range(s.graph.n)), sd.td)
            kinds.append("scarce")
        else:
            res = decompose_bounded_diameter(s.graph, k, (), cfg, sub.child("run"), root=s.apex)
            kinds.append("plentiful")
            depth = max(depth, res.stats.get("max_depth", 0))
            max_r = max(max_r, res.stats.get("max_R", 0))
        root_parent = -1 if not parent else 0
        offset = len(parent)
        p, b, d = _lift_td(res.td, s.back, offset, root_parent)
        parent += p
        bags += b
        diff += d
        covered.update(s.back[v] for v in res.vertices if s.back[v] >= 0)
    if not parent:
        parent, bags, diff = [-1], [frozenset()], [frozenset()]
    td = TreeDecomposition.build(parent, bags, diff)
    stats = {
        "shift": shift,
        "width": width,
        "slabs": len(slabs),
        "kinds": kinds,
        "max_depth": depth,
        "max_R": max_r,
        "lambda_R": lam_r,
        "lambda_C": lam_c,
        "bag_cap": lam_r + lam_c,
    }
    return DecompositionResult(G, frozenset(covered), td, stats)


# gluing


def glue(
    G: Graph,
    outer: TreeDecomposition,
    parts: Sequence[tuple[Iterable[int], TreeDecomposition]],
) -> tuple[frozenset[int], TreeDecomposition]:
    """Combines decompositions of the pieces hanging off the nodes of ``outer``.

    ``parts[t]`` is (V(G_t), decomposition of G_t) with V(G_t) inside the bag
    of t.  Going top-down, the adhesion sigma(t) to the parent is replaced by
    what of it survives in the parent's piece, and the piece's decomposition is
    attached below a node of the parent's decomposition that holds it.  Raises
    InputError when no such node exists.
    """
    if len(parts) != outer.size:
        raise InputError("one part per outer node is required")
    children = outer.children()
    root = outer.root
    parent: list[int] = []
    bags: list[frozenset[int]] = []
    diff: list[frozenset[int]] = []
    kept: dict[int, frozenset[int]] = {}
    nodes_of: dict[int, range] = {}
    order = [root]
    for t in order:
        order.extend(children[t])
        Vt, td = parts[t]
        Vt = frozenset(Vt)
        G.check_vertices(Vt)
        p = outer.parent[t]
        sigma = outer.adhesion(t)
        if p < 0:
            Vnew = Vt
            add = frozenset()
        else:
            add = sigma & kept[p]
            Vnew = (Vt - sigma) | add
        offset = len(parent)
        attach = -1
        if p >= 0:
            attach = next((u for u in nodes_of[p] if add <= bags[u]), -2)
            if attach == -2:
                raise InputError(f"no node of the parent piece holds the adhesion of node {t}")
        for u in range(td.size):
            q = td.parent[u]
            parent.append(attach if q < 0 else q + offset)
            bags.append((td.bags[u] - sigma) | add)
            d = td.difficult[u] if td.difficult is not None else frozenset()
            diff.append((d - sigma) | (d & add))
        nodes_of[t] = range(offset, len(parent))
        kept[t] = Vnew
    total = frozenset().union(*kept.values()) if kept else frozenset()
    return total, TreeDecomposition.build(parent, bags, diff)
