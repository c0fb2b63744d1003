"""Embedded planar graph generators."""

from __future__ import annotations

import numpy as np

from .graph import Graph, InputError


def grid(rows: int, cols: int) -> Graph:
    """rows x cols grid; vertex (i, j) has id i * cols + j."""
    if rows < 1 or cols < 1:
        raise InputError("grid sizes must be positive")
    rot = []
    for i in range(rows):
        for j in range(cols):
            nb = []
            for di, dj in ((0, 1), (1, 0), (0, -1), (-1, 0)):
                a, b = i + di, j + dj
                if 0 <= a < rows and 0 <= b < cols:
                    nb.append(a * cols + b)
            rot.append(nb)
    return Graph.from_rotation(rot)


def cylinder(rows: int, cols: int) -> Graph:
    """Grid whose rows are closed into cycles (cols >= 3), drawn as nested rings."""
    if rows < 1 or cols < 3:
        raise InputError("cylinder needs rows >= 1 and cols >= 3")
    rot = []
    for i in range(rows):
        for j in range(cols):
            nb = [i * cols + (j + 1) % cols]
            if i + 1 < rows:
                nb.append((i + 1) * cols + j)
            nb.append(i * cols + (j - 1) % cols)
            if i > 0:
                nb.append((i - 1) * cols + j)
            rot.append(nb)
    return Graph.from_rotation(rot)


def path(n: int) -> Graph:
    if n < 1:
        raise InputError("path needs at least one vertex")
    return Graph.from_rotation([[w for w in (v - 1, v + 1) if 0 <= w < n] for v in range(n)])


def random_maximal_planar(n: int, seed: int = 0) -> Graph:
    """Triangulation grown by inserting each new vertex into a uniformly random face."""
    if n < 3:
        raise InputError("maximal planar graphs need n >= 3")
    rng = np.random.default_rng(seed)
    # faces are face-walk triples (a, b, c): at b the successor of a is c
    rot: list[list[int]] = [[1, 2], [2, 0], [0, 1]]
    faces = [(0, 1, 2), (0, 2, 1)]
    for v in range(3, n):
        f = int(rng.integers(len(faces)))
        a, b, c = faces[f]
        rot.append([a, c, b])
        for x, y in ((b, a), (c, b), (a, c)):
            r = rot[x]
            r.insert(r.index(y) + 1, v)
        faces[f] = (a, b, v)
        faces.append((b, c, v))
        faces.append((c, a, v))
    return Graph.from_rotation(rot)


def generate(kind: str, params: dict, seed: int = 0) -> Graph:
    """Dispatches on ``kind`` in {grid, cylinder, random-maximal-planar, path}."""
    try:
        if kind == "grid":
            return grid(int(params["rows"]), int(params["cols"]))
        if kind == "cylinder":
            return cylinder(int(params["rows"]), int(params["cols"]))
        if kind == "random-maximal-planar":
            return random_maximal_planar(int(params["n"]), seed)
        if kind == "path":
            return path(int(params["n"]))
    except KeyError as exc:
        raise InputError(f"missing parameter {exc}") from None
    raise InputError(f"unknown generator {kind!r}")
