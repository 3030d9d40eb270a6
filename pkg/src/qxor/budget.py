"""Restart / sweep / seed budget shared by the iterative solvers."""

from __future__ import annotations

import zlib
from dataclasses import dataclass, replace

import numpy as np

from .config import ValidationError


@dataclass(frozen=True)
class SolverBudget:
    restarts: int = 20
    max_sweeps: int = 500
    tol: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_sweeps < 1:
            raise ValidationError("budget counts must be positive")
        if self.tol <= 0:
            raise ValidationError("budget tolerance must be positive")

    def with_(self, **kw) -> "SolverBudget":
        return replace(self, **kw)

    def rng(self, *key) -> np.random.Generator:
        """Independent stream derived from (seed, key); restart batches keyed
        this way give results independent of evaluation order."""
        ints = [self.seed & 0xFFFFFFFF]
        for k in key:
            ints.append(k if isinstance(k, int) else zlib.crc32(str(k).encode()))
        return np.random.default_rng(np.random.SeedSequence(ints))


DEFAULT_BUDGET = SolverBudget()
