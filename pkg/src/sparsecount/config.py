"""Pipeline knobs: treewidth target, cluster threshold, region sizes, slack."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class Config:
    t: int = 0
    r: int = 4
    b: int = 8
    d: int = 5
    c: int = 4
    problem: str = "vc"
    seed: int = 0
    verbosity: int = 0
    modulator_file: Path | None = None
    # search limits for one step of the replacement loop
    region_budget: int = 20_000
    region_attempts: int = 64

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValueError("t must be non-negative")
        for name in ("r", "b", "d", "c", "region_attempts"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.region_budget < 0:
            raise ValueError("region_budget must be non-negative")
