"""Named, reproducible random streams and the choice interface used by the samplers."""

from __future__ import annotations

import zlib

import numpy as np


class Stream:
    """A seed plus a path of labels; children are independent substreams."""

    def __init__(self, seed: int, path: tuple[str, ...] = ()) -> None:
        if seed < 0:
            raise ValueError("seed must be nonnegative")
        self.seed = int(seed)
        self.path = tuple(path)

    def child(self, label: object) -> "Stream":
        return Stream(self.seed, self.path + (str(label),))

    def generator(self) -> np.random.Generator:
        key = tuple(zlib.crc32(p.encode()) for p in self.path)
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=key))

    def __repr__(self) -> str:
        return f"Stream({self.seed}, {'/'.join(self.path) or '-'})"


class Chooser:
    """Source of the discrete guesses a randomized procedure makes."""

    def choose(self, n: int, label: str = "") -> int:
        raise NotImplementedError

    def coin(self, prob: float, label: str = "") -> bool:
        """True with probability ``prob``."""
        raise NotImplementedError


class SampleChooser(Chooser):
    """Uniform choices from a numpy generator."""

    def __init__(self, rng: np.random.Generator | Stream | int) -> None:
        if isinstance(rng, Stream):
            rng = rng.generator()
        elif not isinstance(rng, np.random.Generator):
            rng = np.random.default_rng(rng)
        self.rng = rng

    def choose(self, n: int, label: str = "") -> int:
        if n <= 0:
            raise ValueError(f"no options for {label or 'choice'}")
        return int(self.rng.integers(n))

    def coin(self, prob: float, label: str = "") -> bool:
        return bool(self.rng.random() < prob)


class ReplayChooser(Chooser):
    """Follows a fixed prefix of choices, then takes option 0, recording arities.

    Used to walk every branch of a randomized procedure.  Coins are recorded as
    two-way choices whose option 1 means True.
    """

    def __init__(self, prefix: list[int]) -> None:
        self.prefix = list(prefix)
        self.taken: list[int] = []
        self.arity: list[int] = []

    def choose(self, n: int, label: str = "") -> int:
        if n <= 0:
            raise ValueError(f"no options for {label or 'choice'}")
        i = len(self.taken)
        c = self.prefix[i] if i < len(self.prefix) else 0
        if c >= n:
            raise AssertionError("replayed choice out of range")
        self.taken.append(c)
        self.arity.append(n)
        return c

    def coin(self, prob: float, label: str = "") -> bool:
        if prob <= 0:
            return False
        if prob >= 1:
            return True
        return self.choose(2, label) == 1


def next_prefix(taken: list[int], arity: list[int]) -> list[int] | None:
    """The next choice sequence in depth-first order, or None when exhausted."""
    for j in range(len(taken) - 1, -1, -1):
        if taken[j] + 1 < arity[j]:
            return taken[:j] + [taken[j] + 1]
    return None


def as_chooser(rng: Chooser | np.random.Generator | Stream | int) -> Chooser:
    return rng if isinstance(rng, Chooser) else SampleChooser(rng)
