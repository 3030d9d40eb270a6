"""Concrete carriers for linear maps between small operator spaces.

A :class:`Space` is either a subspace of a matrix algebra carrying the
operator norm (``kind="matrix"``) or the dual of a matrix algebra carrying
the trace norm (``kind="dual"``). A :class:`KernelMap` stores a map
``T: M_n -> M_m`` through its coefficient kernel ``G``, an ``(n*m, n*m)``
matrix under the composite index convention of :mod:`qxor.linalg`:

    ``T(x)[k, l] = sum_ij G[(i,k), (j,l)] x[i, j]``.

Maps defined only on a subspace (for example the diagonal algebra) keep the
full kernel with zero coefficients off the subspace; their amplified norms
are evaluated with inputs restricted to the subspace pattern, which matches
the subspace norm because matrix levels of a subspace inherit the ambient
norms entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import ValidationError
from .linalg import as_matrix, partial_contract_A

__all__ = [
    "Space",
    "full_matrix_space",
    "diagonal_space",
    "dual_space",
    "matrix_subspace",
    "KernelMap",
    "VectorMap",
]


@dataclass(frozen=True)
class Space:
    kind: str              # "matrix" or "dual"
    dim: int               # ambient matrix dimension N
    pattern: str = "full"  # "full", "diag" or "general" (matrix kind only)
    basis: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in ("matrix", "dual"):
            raise ValidationError(f"unknown space kind {self.kind!r}")
        if self.dim < 1:
            raise ValidationError("space dimension must be positive")
        if self.kind == "dual" and self.pattern != "full":
            raise ValidationError("dual spaces carry no subspace pattern")
        if self.pattern == "general":
            if not self.basis:
                raise ValidationError("general subspace requires a basis")
            mats = [as_matrix(b) for b in self.basis]
            flat = np.stack([b.ravel() for b in mats])
            if np.linalg.matrix_rank(flat) != len(mats):
                raise ValidationError("subspace basis must be linearly independent")

    @property
    def coord_dim(self) -> int:
        """Number of linear coordinates of the space."""
        if self.pattern == "diag":
            return self.dim
        if self.pattern == "general":
            return len(self.basis)
        return self.dim * self.dim


def full_matrix_space(n: int) -> Space:
    return Space("matrix", n, "full")


def diagonal_space(d: int) -> Space:
    """The commutative algebra of d x d diagonal matrices (ell_infty^d)."""
    return Space("matrix", d, "diag")


def dual_space(n: int) -> Space:
    """Trace-class on C^n, the dual of the n x n matrix algebra."""
    return Space("dual", n)


def matrix_subspace(basis, ambient_dim: int) -> Space:
    mats = tuple(np.asarray(b, dtype=complex) for b in basis)
    for b in mats:
        if b.shape != (ambient_dim, ambient_dim):
            raise ValidationError("basis matrices must match the ambient dimension")
    return Space("matrix", ambient_dim, "general", mats)


@dataclass(frozen=True)
class KernelMap:
    """Linear map between matrix-carried spaces, stored by its kernel."""

    domain: Space
    codomain: Space
    kernel: np.ndarray = field(repr=False)

    def __post_init__(self):
        g = as_matrix(self.kernel)
        n, m = self.domain.dim, self.codomain.dim
        if g.shape != (n * m, n * m):
            raise ValidationError(
                f"kernel shape {g.shape} does not match spaces ({n},{m})"
            )
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "kernel", g)

    @property
    def n(self) -> int:
        return self.domain.dim

    @property
    def m(self) -> int:
        return self.codomain.dim

    def apply(self, x) -> np.ndarray:
        """Evaluate the map on a domain matrix."""
        x = as_matrix(x)
        if x.shape != (self.n, self.n):
            raise ValidationError("input shape does not match the domain")
        return partial_contract_A(self.kernel, x.T, self.n, self.m)

    def as_superoperator(self) -> np.ndarray:
        """The (m^2, n^2) matrix sending vec(x) to vec(T(x)), row-major vec."""
        n, m = self.n, self.m
        g4 = self.kernel.reshape(n, m, n, m)
        return np.ascontiguousarray(
            g4.transpose(1, 3, 0, 2).reshape(m * m, n * n)
        )

    def scale(self, t: float) -> "KernelMap":
        return KernelMap(self.domain, self.codomain, self.kernel * t)


@dataclass(frozen=True)
class VectorMap:
    """Map from the diagonal algebra ell_infty^d into a Hilbert space,
    given by the images of the diagonal units."""

    vectors: tuple

    def __post_init__(self):
        vs = tuple(np.asarray(v, dtype=complex).ravel() for v in self.vectors)
        if not vs:
            raise ValidationError("need at least one image vector")
        p = vs[0].size
        if any(v.size != p for v in vs):
            raise ValidationError("image vectors must share a dimension")
        object.__setattr__(self, "vectors", vs)

    @property
    def d(self) -> int:
        return len(self.vectors)

    @property
    def p(self) -> int:
        return self.vectors[0].size

    def gram(self) -> np.ndarray:
        """PSD matrix with z^dagger Gram z = || sum_k z_k h_k ||^2."""
        h = np.stack(self.vectors)
        return h.conj() @ h.T
