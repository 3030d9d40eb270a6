"""Certified-direction bound intervals.

Heuristic solvers in this package never report a bare point estimate: a
lower bound must come from an explicit feasible witness and an upper bound
from an inequality that is true by construction. ``BoundInterval`` carries
both ends plus method tags naming where each came from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import TOL


@dataclass(frozen=True)
class BoundInterval:
    lower: float
    upper: float
    lower_method: str = "unknown"
    upper_method: str = "unknown"

    def __post_init__(self):
        if math.isnan(self.lower) or math.isnan(self.upper):
            raise ValueError("interval endpoints must not be NaN")
        if self.lower > self.upper + TOL.interval * max(1.0, abs(self.lower)):
            raise ValueError(
                f"invalid interval: lower={self.lower!r} > upper={self.upper!r}"
            )

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def scale(self, t: float) -> "BoundInterval":
        if t < 0:
            raise ValueError("scale factor must be nonnegative")
        return BoundInterval(
            self.lower * t, self.upper * t, self.lower_method, self.upper_method
        )

    def combine_max_lower(self, other: "BoundInterval") -> "BoundInterval":
        """Keep the better certified end from each side."""
        lo, lo_m = max(
            (self.lower, self.lower_method), (other.lower, other.lower_method)
        )
        up, up_m = min(
            (self.upper, self.upper_method), (other.upper, other.upper_method)
        )
        return BoundInterval(lo, up, lo_m, up_m)

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper if math.isfinite(self.upper) else None,
            "lower_method": self.lower_method,
            "upper_method": self.upper_method,
        }
