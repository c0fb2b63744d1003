"""scikit-learn style wrapper around the randomized decomposer."""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .config import RunConfig
from .decomposer import DecompositionResult, RunFailure, baker_decompose
from .graph import Graph, InputError, neighborhood
from .rng import Stream


class PatternSparseDecomposer(BaseEstimator):
    """Fits a tree decomposition to an embedded planar graph.

    ``n_trials`` independent runs are made with seeds ``seed, seed + 1, ...``.
    Without a pattern the first run that does not fail is kept.  With a
    pattern (passed to ``fit``) the kept run is the one that covers the most
    pattern vertices and, among those, has the smallest bag intersection with
    N^d[pattern].
    """

    def __init__(self, k=4, d=0, h=6, seed=0, n_trials=1, heavy_scale=1.0, lam_c=1.0):
        self.k = k
        self.d = d
        self.h = h
        self.seed = seed
        self.n_trials = n_trials
        self.heavy_scale = heavy_scale
        self.lam_c = lam_c

    def _config(self) -> RunConfig:
        return RunConfig(
            k=self.k, d=self.d, h=self.h, seed=self.seed, heavy_scale=self.heavy_scale, lam_c=self.lam_c
        )

    def fit(self, X: Graph, y=None, pattern=None):
        if not isinstance(X, Graph):
            raise InputError("X must be a Graph")
        cfg = self._config()
        ball = None
        if pattern is not None:
            pattern = frozenset(pattern)
            X.check_vertices(pattern)
            ball = neighborhood(X, pattern, self.d)
        best = None
        best_key = None
        failures = 0
        for i in range(self.n_trials):
            s = self.seed + i
            try:
                res = baker_decompose(X, self.k, cfg, Stream(s))
            except RunFailure:
                failures += 1
                continue
            if ball is None:
                best = (s, res)
                break
            worst = max((len(b & ball) for b in res.td.bags), default=0)
            key = (len(pattern - res.vertices), worst, s)
            if best_key is None or key < best_key:
                best, best_key = (s, res), key
        if best is None:
            raise RunFailure(f"all {self.n_trials} runs failed")
        self.seed_, self.result_ = best
        self.n_failures_ = failures
        return self

    def _check(self) -> DecompositionResult:
        if not hasattr(self, "result_"):
            raise NotFittedError("call fit first")
        return self.result_

    @property
    def tree_decomposition_(self):
        return self._check().td

    @property
    def vertices_(self):
        return self._check().vertices

    def transform(self, X: Graph | None = None):
        """The fitted decomposition's bags."""
        return list(self._check().td.bags)
