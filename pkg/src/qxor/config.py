"""Central numerical tolerances.

Every module pulls its thresholds from the single ``TOL`` record so that a
tightened or loosened run changes behaviour coherently instead of drifting
per call site.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # symmetry / structure violations accepted (and repaired) at construction
    construction: float = 1e-12
    # numeric identity checks (reconstruction residuals, bias formulas, ...)
    identity: float = 1e-10
    # relative convergence for iterative solvers
    convergence: float = 1e-8
    # slack allowed when ordering interval endpoints
    interval: float = 1e-9
    # eigenvalue slack for positive-semidefinite checks
    psd: float = 1e-10

    def scaled(self, factor: float) -> "Tolerances":
        return replace(
            self,
            construction=self.construction * factor,
            identity=self.identity * factor,
            convergence=self.convergence * factor,
            interval=self.interval * factor,
            psd=self.psd * factor,
        )


TOL = Tolerances()


class ValidationError(ValueError):
    """An input violates a structural invariant beyond repairable tolerance."""


class ConvergenceError(RuntimeError):
    """An iterative routine hit its cap; carries the residual diagnostic."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class MonotonicityError(AssertionError):
    """A block-coordinate sweep decreased its objective, which closed-form
    updates forbid; signals a formula bug rather than bad luck."""
