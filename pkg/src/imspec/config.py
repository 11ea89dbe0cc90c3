"""Run configuration: tolerances, ladder bounds, threading, output format."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace, fields

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib


@dataclass(frozen=True)
class RunConfig:
    circle_tol: float = 1e-9      # |‖w|-1| below this counts as on the unit circle
    residual_tol: float = 1e-10   # polished-root residual, relative to max |coefficient|
    cluster_tol: float = 1e-8     # roots closer than this merge into one multiple root
    gcd_tol: float = 1e-6         # num/den roots closer than this cancel in reduction
    quad_tol: float = 1e-9        # relative panel tolerance for adaptive quadrature
    k_min: int = 6                # radius ladder r_k = 1 - 2^-k starts here
    k_max: int = 16
    threads: int = 0              # 0 means use all cores
    out_format: str = "json"      # json | csv | text

    def __post_init__(self):
        for name in ("circle_tol", "residual_tol", "cluster_tol", "gcd_tol", "quad_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if not (3 <= self.k_min < self.k_max <= 24):
            raise ValueError("need 3 <= k_min < k_max <= 24")
        if self.out_format not in ("json", "csv", "text"):
            raise ValueError(f"unknown output format {self.out_format!r}")

    @property
    def worker_count(self) -> int:
        return self.threads if self.threads > 0 else (os.cpu_count() or 1)

    def with_overrides(self, **kwargs) -> "RunConfig":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})

    @classmethod
    def from_toml(cls, path: str) -> "RunConfig":
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


DEFAULT = RunConfig()
