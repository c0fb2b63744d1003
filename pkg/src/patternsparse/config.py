"""Run configuration shared by the decomposer, the CLI and the estimator."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Mapping

from .graph import InputError
from .improve import ImproveConfig
from .planar import C_F


@dataclass(frozen=True)
class RunConfig:
    """Every knob of one decomposition run.

    ``lam_c`` is the constant in front of k log k in the bag-size budgets,
    ``leaf_factor`` sets the leaf test |M - R| <= leaf_factor * sqrt(k) and
    ``kappa`` is the k below which a plain three-path decomposition is returned.
    ``sparsity_c`` scales :meth:`sparsity_bound`, the per-bag pattern budget
    used by the Monte-Carlo harness.
    """

    k: int = 4
    d: int = 0
    h: int = 6
    kappa: int = 4
    lam_c: float = 1.0
    leaf_factor: float = 4.0
    heavy_scale: float = 1.0
    p_mult: float = 1.0
    q_mult: float = 1.0
    improve_c: int | None = None
    xi: int | None = None
    sparsity_c: float = 0.2
    seed: int = 0
    trials: int = 100

    def __post_init__(self) -> None:
        if self.k < 2:
            raise InputError("k must be at least 2")
        if self.d < 0:
            raise InputError("d must be nonnegative")
        if self.h < 3:
            raise InputError("h must be at least 3")
        if self.seed < 0:
            raise InputError("seed must be nonnegative")
        if self.trials < 1:
            raise InputError("trials must be positive")
        for name in ("lam_c", "leaf_factor", "heavy_scale", "p_mult", "q_mult", "sparsity_c"):
            if not getattr(self, name) > 0:
                raise InputError(f"{name} must be positive")

    def improve_config(self) -> ImproveConfig:
        return ImproveConfig(
            d=self.d,
            h=self.h,
            c=self.improve_c,
            heavy_scale=self.heavy_scale,
            p_mult=self.p_mult,
            q_mult=self.q_mult,
            xi=self.xi,
        )

    def budgets(self, diameter: int, k: int | None = None) -> tuple[float, float]:
        """(Lambda_R, Lambda_C) for a piece of the given diameter."""
        k = self.k if k is None else k
        klog = self.lam_c * k * math.log2(max(k, 2))
        lam_r = 100 * C_F * (diameter + 1) + 100 * klog
        lam_c = 2 * C_F * (diameter + 1) + 2 * klog
        return lam_r, lam_c

    def depth_cap(self, n: int) -> int:
        return math.ceil(5 * math.log(max(n, 2)) / math.log(7 / 6))

    def leaf_size(self, k: int | None = None) -> float:
        return self.leaf_factor * math.sqrt(self.k if k is None else k)

    def sparsity_bound(self, k: int | None = None, d: int | None = None) -> int:
        """floor(sparsity_c * sqrt(k) * log2(k)^2 * (2d+1)^2)."""
        k = self.k if k is None else k
        d = self.d if d is None else d
        lg = math.log2(max(k, 2))
        return math.floor(self.sparsity_c * math.sqrt(k) * lg * lg * (2 * d + 1) ** 2)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise InputError(f"unknown config keys: {sorted(extra)}")
        return cls(**dict(data))
