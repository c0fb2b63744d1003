"""Residual networks with successive-shortest-path min-cost flow and max-flow."""

from __future__ import annotations

import heapq
from collections import deque

INF = float("inf")


class Network:
    """Directed network stored as paired arcs (arc ``e`` and its reverse ``e ^ 1``)."""

    __slots__ = ("size", "head", "cap", "cost", "out", "base")

    def __init__(self, size: int) -> None:
        self.size = size
        self.head: list[int] = []
        self.cap: list[int] = []
        self.cost: list[int] = []
        self.out: list[list[int]] = [[] for _ in range(size)]
        self.base: list[int] = []

    def add_arc(self, u: int, v: int, cap: int, cost: int = 0) -> int:
        e = len(self.head)
        self.head += [v, u]
        self.cap += [cap, 0]
        self.base += [cap, 0]
        self.cost += [cost, -cost]
        self.out[u].append(e)
        self.out[v].append(e + 1)
        return e

    def tail(self, e: int) -> int:
        return self.head[e ^ 1]

    def flow(self, e: int) -> int:
        return self.base[e] - self.cap[e]

    def _dijkstra(self, s: int, pot: list[float]) -> tuple[list[float], list[int]]:
        dist = [INF] * self.size
        prev = [-1] * self.size
        dist[s] = 0
        heap = [(0, s)]
        head, cap, cost, out = self.head, self.cap, self.cost, self.out
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            pu = pot[u]
            for e in out[u]:
                if cap[e] <= 0:
                    continue
                v = head[e]
                nd = d + cost[e] + pu - pot[v]
                if nd < dist[v]:
                    dist[v] = nd
                    prev[v] = e
                    heapq.heappush(heap, (nd, v))
        return dist, prev

    def min_cost_flow(self, s: int, t: int, amount: int) -> tuple[int, int, list[float]]:
        """Sends up to ``amount`` units from s to t along successive shortest paths.

        Costs must be nonnegative initially.  Returns (flow, cost, potentials)
        where the potentials keep every residual arc's reduced cost nonnegative.
        """
        pot = [0.0] * self.size
        flow = 0
        total = 0
        while flow < amount:
            dist, prev = self._dijkstra(s, pot)
            if dist[t] == INF:
                break
            for v in range(self.size):
                if dist[v] < INF:
                    pot[v] += dist[v]
            push = amount - flow
            v = t
            while v != s:
                e = prev[v]
                push = min(push, self.cap[e])
                v = self.head[e ^ 1]
            v = t
            while v != s:
                e = prev[v]
                self.cap[e] -= push
                self.cap[e ^ 1] += push
                total += push * self.cost[e]
                v = self.head[e ^ 1]
            flow += push
        return flow, total, pot

    def residual_distances(self, s: int, pot: list[float]) -> list[float]:
        """True shortest distances from s in the residual graph (given valid potentials)."""
        dist, _ = self._dijkstra(s, pot)
        return [d + pot[v] - pot[s] if d < INF else INF for v, d in enumerate(dist)]

    def max_flow(self, s: int, t: int, limit: float = INF) -> int:
        """Edmonds-Karp augmentation; stops once ``limit`` is exceeded."""
        flow = 0
        while flow <= limit:
            prev = [-1] * self.size
            prev[s] = -2
            queue = deque([s])
            while queue and prev[t] == -1:
                u = queue.popleft()
                for e in self.out[u]:
                    v = self.head[e]
                    if self.cap[e] > 0 and prev[v] == -1:
                        prev[v] = e
                        queue.append(v)
            if prev[t] == -1:
                break
            push = INF
            v = t
            while v != s:
                e = prev[v]
                push = min(push, self.cap[e])
                v = self.head[e ^ 1]
            v = t
            while v != s:
                e = prev[v]
                self.cap[e] -= push
                self.cap[e ^ 1] += push
                v = self.head[e ^ 1]
            flow += push
        return flow

    def reachable(self, s: int) -> set[int]:
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.out[u]:
                v = self.head[e]
                if self.cap[e] > 0 and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return seen

    def decompose_paths(self, s: int, t: int, count: int) -> list[list[int]]:
        """Splits the current flow into ``count`` simple s-t node paths.

        Flow cycles met on the way are cancelled.
        """
        left = [self.flow(e) if e % 2 == 0 else 0 for e in range(len(self.head))]
        paths = []
        for _ in range(count):
            nodes = [s]
            arcs: list[int] = []
            where = {s: 0}
            u = s
            while u != t:
                e = next((e for e in self.out[u] if e % 2 == 0 and left[e] > 0), -1)
                if e < 0:
                    raise AssertionError("flow conservation violated")
                v = self.head[e]
                if v in where:
                    i = where[v]
                    for a in arcs[i:]:
                        left[a] -= 1
                    for x in nodes[i + 1:]:
                        del where[x]
                    del nodes[i + 1:]
                    del arcs[i:]
                    u = v
                    continue
                where[v] = len(nodes)
                nodes.append(v)
                arcs.append(e)
                u = v
            for a in arcs:
                left[a] -= 1
            paths.append(nodes)
        return paths
