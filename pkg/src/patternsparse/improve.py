"""Separator improvement: annotated forests, splits and the recursive uncrossing procedure.

The procedure takes a separation whose separator carries a low-degree spanning
forest and returns a tuple (A, B, C, C~): a separation, a part C of its separator
that is kept in bags, and a difficult part C~ of C.  Every random guess goes
through a :class:`Chooser`, so the same code samples one tuple or enumerates
the whole family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Iterable

from .distance import dual_distance, min_chain_length
from .flow import ChainOutcome, dual1_outcome
from .graph import Graph, InputError, Separation, neighborhood
from .planar import C_F, CandidateSeparation, forest_stats
from .rng import Chooser, ReplayChooser, as_chooser, next_prefix


class SamplingFailure(RuntimeError):
    """A guess sequence that cannot be completed (depth cap, no usable path, ...)."""


class SplitUnavailable(SamplingFailure):
    pass


class EnumerationTooLarge(RuntimeError):
    pass


class MinorWitness(RuntimeError):
    """Every pair of forest components was joined by a path: a K_h minor model.

    ``branch_sets[i]`` are vertex sets and ``paths[(a, b)]`` the inner vertices
    of a path joining branch sets a and b.
    """

    def __init__(self, branch_sets: list[frozenset[int]], paths: dict[tuple[int, int], tuple[int, ...]]) -> None:
        super().__init__(f"K_{len(branch_sets)} minor model found")
        self.branch_sets = branch_sets
        self.paths = paths


# annotated forests


@dataclass(frozen=True)
class ForestComponent:
    vertices: frozenset[int]
    edges: tuple[tuple[int, int], ...]
    zeta: int

    @property
    def anchor(self) -> int:
        return min(self.vertices)


def forest_components(
    vertices: Iterable[int], edges: Iterable[tuple[int, int]]
) -> list[tuple[frozenset[int], tuple[tuple[int, int], ...]]]:
    """Components of a forest as (vertex set, sorted edges), ordered by least vertex."""
    vs = sorted(set(vertices))
    adj: dict[int, list[int]] = {v: [] for v in vs}
    es = sorted((min(u, w), max(u, w)) for u, w in edges)
    for u, w in es:
        adj[u].append(w)
        adj[w].append(u)
    seen: set[int] = set()
    out = []
    for v in vs:
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        out.append((frozenset(comp), tuple(e for e in es if e[0] in comp)))
    return out


@dataclass(frozen=True)
class AnnotatedForest:
    """Forest components with weight guesses; ``delta`` is the degree bound in force."""

    components: tuple[ForestComponent, ...]
    delta: int

    @classmethod
    def build(
        cls,
        vertices: Iterable[int],
        edges: Iterable[tuple[int, int]],
        zetas: Iterable[int],
        delta: int | None = None,
    ) -> "AnnotatedForest":
        vertices = set(vertices)
        edges = list(edges)
        ncomp, maxdeg, acyclic = forest_stats(vertices, edges)
        if ncomp < 0 or not acyclic:
            raise InputError("edges do not form a forest on the given vertices")
        parts = forest_components(vertices, edges)
        zetas = list(zetas)
        if len(zetas) != len(parts):
            raise InputError("one weight guess per component is required")
        if any(z < 0 for z in zetas):
            raise InputError("weight guesses must be nonnegative")
        comps = tuple(ForestComponent(v, e, z) for (v, e), z in zip(parts, zetas))
        return cls(comps, maxdeg if delta is None else delta)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset().union(*(c.vertices for c in self.components))

    @property
    def weight(self) -> int:
        return sum(c.zeta for c in self.components)

    def __len__(self) -> int:
        return len(self.components)

    def without(self, J: frozenset[int]) -> "AnnotatedForest":
        return AnnotatedForest(tuple(c for c in self.components if c.vertices != J), self.delta)

    def consistent_with(self, pattern: Iterable[int]) -> bool:
        """Whether every guess equals the true count of ``pattern`` vertices."""
        P = set(pattern)
        return all(c.zeta == len(c.vertices & P) for c in self.components)


def split_options(af: AnnotatedForest) -> tuple[ForestComponent, int, int]:
    """(component to split, least and greatest weight for its first part)."""
    if not af.components:
        raise SplitUnavailable("empty forest")
    J = max(af.components, key=lambda c: (c.zeta, -c.anchor))
    lo = -(-J.zeta // (af.delta + 1))
    hi = J.zeta - lo
    if J.zeta <= 1 or not J.edges or lo > hi:
        raise SplitUnavailable(f"component of weight {J.zeta} cannot be split")
    return J, lo, hi


def z_split(af: AnnotatedForest, rng: Chooser | object) -> AnnotatedForest:
    """Cuts a random edge of the heaviest component and guesses how its weight divides.

    The first part is the side holding the component's least vertex.
    """
    ch = as_chooser(rng)
    J, lo, hi = split_options(af)
    e = J.edges[ch.choose(len(J.edges), "split-edge")]
    w1 = lo + ch.choose(hi - lo + 1, "split-weight")
    rest = [x for x in J.edges if x != e]
    parts = forest_components(J.vertices, rest)
    first = 0 if J.anchor in parts[0][0] else 1
    new = []
    for i, (vs, es) in enumerate(parts):
        new.append(ForestComponent(vs, es, w1 if i == first else J.zeta - w1))
    comps = [c for c in af.components if c is not J] + new
    comps.sort(key=lambda c: c.anchor)
    return AnnotatedForest(tuple(comps), af.delta)


def all_splits(af: AnnotatedForest) -> list[AnnotatedForest]:
    """Every outcome of :func:`z_split`, in choice order."""
    J, lo, hi = split_options(af)
    out = []
    for i in range(len(J.edges)):
        for j in range(hi - lo + 1):
            out.append(z_split(af, ReplayChooser([i, j])))
    return out


# configuration and results


@dataclass(frozen=True)
class ImproveConfig:
    """Knobs of the improvement procedure.

    ``c`` defaults to 1 for d = 0 and to c_F(2d+1) otherwise.  ``heavy_scale``
    multiplies both weight thresholds.  For d >= 1 the inner duality call uses
    p = ceil(sqrt k) + ceil(p_mult * log2(k + k0 + 1)) and
    q = ceil(q_mult * (k + k0 / sqrt k)) + 1.
    """

    d: int = 0
    h: int = 6
    c: int | None = None
    heavy_scale: float = 1.0
    p_mult: float = 1.0
    q_mult: float = 1.0
    xi: int | None = None
    node_budget: int = 100_000

    def __post_init__(self) -> None:
        if self.h < 3:
            raise InputError("h must be at least 3")
        if self.d < 0:
            raise InputError("d must be nonnegative")

    @property
    def c_value(self) -> int:
        if self.c is not None:
            return self.c
        return 1 if self.d == 0 else C_F * (2 * self.d + 1)

    def depth_cap(self, delta: int, k: int) -> int:
        if self.xi is not None:
            return self.xi
        return math.ceil(3 * self.h * (delta + 1) * math.log2(max(k, 2)))

    def heavy_threshold(self, delta: int, k: int) -> float:
        return self.heavy_scale * (delta + 1) * math.sqrt(k)

    def significant_threshold(self, k: int) -> float:
        return self.heavy_scale * math.sqrt(k)

    def dual_params(self, k: int, k0: int) -> tuple[int, int]:
        """(p, q) for the inner duality call."""
        rk = math.sqrt(k)
        if self.d == 0:
            return math.ceil(rk), k + math.ceil(k0 / rk) + 1
        p = math.ceil(rk) + math.ceil(self.p_mult * math.log2(k + k0 + 1))
        q = max(2, math.ceil(self.q_mult * (k + k0 / rk)) + 1)
        return p, q

    def bounds(self, k: int, k0: int, ell: int, delta: int) -> dict[str, int]:
        """Deterministic size limits for C and C~ implied by the construction."""
        p, q = self.dual_params(k, k0)
        if self.d == 0:
            qmax = 5 * p + 2
        else:
            qmax = 10 * self.d * max(p, min_chain_length(q, self.d))
        levels = self.depth_cap(delta, k) + 1
        pairs = self.h * (self.h - 1) // 2
        per_level_tilde = (pairs - 1) * qmax
        return {
            "C": ell + levels * (2 * q + per_level_tilde),
            "C_tilde": levels * per_level_tilde,
            "p": p,
            "q": q,
            "Q": qmax,
            "levels": levels,
        }


@dataclass(frozen=True)
class ImproveTuple:
    separation: Separation
    C: frozenset[int]
    C_tilde: frozenset[int]
    depth: int = 0
    early: bool = False

    @property
    def A(self) -> frozenset[int]:
        return self.separation.A

    @property
    def B(self) -> frozenset[int]:
        return self.separation.B

    @property
    def D(self) -> frozenset[int]:
        """Separator vertices left out of C."""
        return self.separation.separator - self.C

    def key(self) -> tuple:
        return (
            tuple(sorted(self.A)),
            tuple(sorted(self.B)),
            tuple(sorted(self.C)),
            tuple(sorted(self.C_tilde)),
        )

    def swapped(self) -> "ImproveTuple":
        return replace(self, separation=self.separation.swapped())


@dataclass
class ImproveTrace:
    """What one run did; filled in as the run proceeds."""

    levels: int = 0
    path_steps: int = 0
    chain_sizes: list[int] = field(default_factory=list)


# the procedure


class _Improver:
    def __init__(
        self,
        G: Graph,
        k: int,
        Z0: Iterable[int],
        sep: CandidateSeparation,
        cfg: ImproveConfig,
        W: Iterable[int] | None,
        theta: int | None,
    ) -> None:
        if k < 2:
            raise InputError("k must be at least 2")
        self.G = Graph(G.n, list(G.edges()))  # contraction is cheaper without a rotation
        self.k = k
        self.Z0 = frozenset(Z0)
        G.check_vertices(self.Z0)
        self.cfg = cfg
        self.sep = sep
        self.W = None if W is None else frozenset(W)
        self.theta = theta
        if (self.W is None) != (theta is None):
            raise InputError("W and theta go together")
        A, B = sep.separation.A, sep.separation.B
        S = A & B
        ncomp, maxdeg, acyclic = forest_stats(S, sep.forest)
        if ncomp < 0 or not acyclic:
            raise InputError("forest must span the separator")
        if ncomp >= cfg.h:
            raise InputError(f"forest has {ncomp} components, need fewer than h={cfg.h}")
        if maxdeg > cfg.h:
            raise InputError("forest degree exceeds h")
        if self.W is not None and (len(A & self.W) < theta or len(B & self.W) < theta):
            raise InputError("initial separation is not balanced for W")
        self.delta = maxdeg
        self.xi = cfg.depth_cap(maxdeg, k)
        self.heavy = cfg.heavy_threshold(maxdeg, k)
        self.p, self.q = cfg.dual_params(k, len(self.Z0))
        self.nz0 = neighborhood(self.G, self.Z0, cfg.d)
        self.V = frozenset(range(G.n))

    def is_heavy(self, af: AnnotatedForest) -> bool:
        return any(c.zeta > self.heavy for c in af.components)

    def run(self, ch: Chooser) -> ImproveTuple:
        self.trace = ImproveTrace()
        A, B = self.sep.separation.A, self.sep.separation.B
        S = A & B
        top = self.cfg.c_value * self.k
        parts = forest_components(S, self.sep.forest)
        zetas = [ch.choose(top + 1, "initial-weight") for _ in parts]
        af = AnnotatedForest.build(S, self.sep.forest, zetas, self.delta)
        while len(af) < self.cfg.h and self.is_heavy(af):
            af = z_split(af, ch)
        if not self.is_heavy(af):
            return ImproveTuple(self.sep.separation, S, frozenset(), 0, early=True)
        return self.call(A, B, frozenset(), frozenset(), frozenset(), af, 0, ch)

    def call(self, A, B, C, D, Ct, af: AnnotatedForest, depth: int, ch: Chooser) -> ImproveTuple:
        if depth > self.xi:
            raise SamplingFailure(f"depth cap {self.xi} exceeded")
        if len(af) != self.cfg.h:
            raise AssertionError("recursive call needs exactly h components")
        self.trace.levels = max(self.trace.levels, depth + 1)
        if self.W is not None:
            flip = len(A & self.W) < len(B & self.W)
        else:
            flip = ch.choose(2, "larger-side") == 1
        if flip:
            A, B = B, A
        out = self.body(A, B, C, D, Ct, af, depth, ch)
        return out.swapped() if flip else out

    def body(self, A, B, C, D, Ct, af, depth, ch) -> ImproveTuple:
        comps = af.components
        VF = af.vertices
        Ct1: set[int] = set()
        D1: set[int] = set()
        found: dict[tuple[int, int], tuple[int, ...]] = {}
        for a, b in combinations(range(len(comps)), 2):
            Ja, Jb = comps[a].vertices, comps[b].vertices
            X = frozenset(Ct1 | D1 | (VF - Ja - Jb))
            kind, data = self.dual(Ja, Jb, X)
            if kind == "paths":
                good = [
                    i
                    for i, (P, Q) in enumerate(data)
                    if Q is not None and not ((set(P) - Q) & self.nz0)
                ]
                if not good:
                    raise SamplingFailure("no path avoids the known neighbourhood")
                i = good[ch.choose(len(good), "path-index")]
                P, Q = data[i]
                Ct1 |= Q
                D1 |= set(P) - Q
                found[(a, b)] = P
                self.trace.path_steps += 1
                continue
            i = ch.choose(len(data), "chain-index")
            return self.chain_step(A, B, C, D, Ct, af, depth, ch, Ja, Jb, data[i], X, Ct1, D1)
        raise MinorWitness([c.vertices for c in comps], found)

    def dual(self, Ja: frozenset[int], Jb: frozenset[int], X: frozenset[int]):
        """Runs the duality between the two contracted components.

        Returns ("chain", separators) or ("paths", [(inner vertices, retained inner vertices or None)]),
        all in the ids of G.
        """
        G = self.G
        H1, r1, _ = G.contract(Ja)
        H, r2, sb = H1.contract({r1[v] for v in Jb})
        fwd = [r2[r1[v]] for v in range(G.n)]
        sa = fwd[min(Ja)]
        back = {fwd[v]: v for v in range(G.n) if v not in Ja and v not in Jb}
        XH = {fwd[v] for v in X}
        Z0H = {fwd[z] for z in self.Z0} - {sa, sb}
        if sb not in H.bfs([sa], blocked=XH):
            return "chain", [frozenset()] * self.p
        if self.cfg.d == 0:
            Hx, keep = H.delete(XH)
            idx = {v: i for i, v in enumerate(keep)}
            out = dual1_outcome(
                Hx, idx[sa], idx[sb], {idx[z] for z in Z0H if z in idx}, self.p, self.q, self.k
            )
            lift = lambda S: frozenset(back[keep[x]] for x in S if keep[x] in back)  # noqa: E731
        else:
            lam = (self.cfg.h + 1) * self.cfg.h // 2
            out = dual_distance(H, sa, sb, XH, Z0H, self.p, self.q, self.cfg.d, lam=lam)
            lift = lambda S: frozenset(back[x] for x in S if x in back)  # noqa: E731
        if isinstance(out, ChainOutcome):
            seps = [lift(C) for C in out.separators]
            return "chain", seps
        paths = []
        for P, Q in zip(out.paths, out.Q):
            inner = tuple(sorted(lift(P)))
            paths.append((inner, None if Q is None else lift(Q)))
        return "paths", paths

    def chain_step(self, A, B, C, D, Ct, af, depth, ch, Ja, Jb, Ci, X, Ct1, D1) -> ImproveTuple:
        G = self.G
        self.trace.chain_sizes.append(len(Ci))
        cut = Ci | X
        side = frozenset(G.bfs(Ja, blocked=cut))
        if side & Jb:
            raise AssertionError("chain separator does not separate the contracted components")
        A1 = side | cut
        B1 = self.V - side
        if self.W is not None:
            keep_alpha = len(self.W & A1 & A) >= self.theta
            if not keep_alpha and len(self.W & B1 & A) < self.theta:
                raise AssertionError("neither side of the chain separation keeps theta of W")
        else:
            keep_alpha = ch.choose(2, "chain-side") == 0
        if not keep_alpha:
            A1, B1 = B1, A1
            Ja, Jb = Jb, Ja
        VF = af.vertices
        Y = VF - Jb
        A2 = Y | (A1 & A)
        B2 = Y | B1 | B
        S2 = A2 & B2
        if not S2 <= ((A & B) | (A1 & B1)) - Jb or not Jb <= B2 - A2:
            raise AssertionError("uncrossing broke its containment guarantees")
        Ct2 = S2 & (Ct | Ct1)
        C2 = S2 & (C | Ct1 | Ci)
        D2 = (S2 & (D | D1)) - C2
        if S2 - (C2 | D2) != Y:
            raise AssertionError("uncrossed separator does not split as expected")
        if A2 | B2 != self.V:
            raise AssertionError("uncrossed sides do not cover the graph")
        if not (A2 - B2):
            raise SamplingFailure("uncrossing emptied one side")
        if self.W is not None and (len(A2 & self.W) < self.theta or len(B2 & self.W) < self.theta):
            raise AssertionError("uncrossing lost W-balance")
        rest = af.without(Jb)
        if self.is_heavy(rest):
            nxt = z_split(rest, ch)
            return self.call(A2, B2, C2, D2, Ct2, nxt, depth + 1, ch)
        return ImproveTuple(Separation(A2, B2), C2 | Y, Ct2, depth)


def improve_sample(
    G: Graph,
    k: int,
    Z0: Iterable[int],
    sep: CandidateSeparation,
    cfg: ImproveConfig | None = None,
    rng: Chooser | object = 0,
    W: Iterable[int] | None = None,
    theta: int | None = None,
    trace: list | None = None,
) -> ImproveTuple:
    """One random run; raises SamplingFailure when the guesses lead nowhere."""
    worker = _Improver(G, k, Z0, sep, cfg or ImproveConfig(), W, theta)
    try:
        return worker.run(as_chooser(rng))
    finally:
        if trace is not None:
            trace.append(worker.trace)


def improve_enumerate(
    G: Graph,
    k: int,
    Z0: Iterable[int],
    sep: CandidateSeparation,
    cfg: ImproveConfig | None = None,
    W: Iterable[int] | None = None,
    theta: int | None = None,
) -> list[ImproveTuple]:
    """Every tuple some guess sequence produces, without duplicates."""
    cfg = cfg or ImproveConfig()
    worker = _Improver(G, k, Z0, sep, cfg, W, theta)
    seen: dict[tuple, ImproveTuple] = {}
    prefix: list[int] | None = []
    runs = 0
    while prefix is not None:
        runs += 1
        if runs > cfg.node_budget:
            raise EnumerationTooLarge(f"more than {cfg.node_budget} branches")
        ch = ReplayChooser(prefix)
        try:
            t = worker.run(ch)
            seen.setdefault(t.key(), t)
        except SamplingFailure:
            pass
        prefix = next_prefix(ch.taken, ch.arity)
    return list(seen.values())
