"""Vertex- and spectral-limiting projectors and perfect-localization tests.

A vertex limiter zeroes a signal outside a vertex subset; a spectral
limiter keeps only a subset of transform coefficients. Both are idempotent
Hermitian projectors with unit spectral norm (when non-empty), and their
composition carries the joint-concentration information used by the
uncertainty and sampling machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .operator import GlctOperator


def _validate_indices(indices, n: int) -> tuple[int, ...]:
    idx = tuple(int(i) for i in indices)
    if any(not 0 <= i < n for i in idx):
        raise ValidationError(f"indices out of range for n={n}: {idx}")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValidationError("indices must be strictly increasing")
    return idx


@dataclass(frozen=True)
class VertexSet:
    """Strictly increasing vertex indices inside an ambient dimension n."""

    indices: tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "indices", _validate_indices(self.indices, self.n))

    def complement(self) -> "VertexSet":
        inside = set(self.indices)
        return VertexSet(tuple(i for i in range(self.n) if i not in inside), self.n)

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls(tuple(range(n)), n)


@dataclass(frozen=True)
class SpectralSet:
    """Strictly increasing spectral indices inside an ambient dimension n."""

    indices: tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "indices", _validate_indices(self.indices, self.n))

    def complement(self) -> "SpectralSet":
        inside = set(self.indices)
        return SpectralSet(tuple(i for i in range(self.n) if i not in inside), self.n)

    @classmethod
    def first(cls, size: int, n: int) -> "SpectralSet":
        return cls(tuple(range(size)), n)


@dataclass(frozen=True)
class Limiter:
    """A limiting projector; ``kind`` is 'vertex' or 'spectral'."""

    matrix: np.ndarray
    kind: str

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def vertex_limiter(s: VertexSet) -> Limiter:
    """Diagonal 0/1 projector onto the vertex subset."""
    d = np.zeros(s.n, dtype=complex)
    if s.indices:
        d[list(s.indices)] = 1.0
    return Limiter(matrix=np.diag(d), kind="vertex")


def spectral_limiter(f: SpectralSet, op: GlctOperator) -> Limiter:
    """Projector inverse @ select(F) @ forward onto a band of coefficients."""
    if f.n != op.n:
        raise ValidationError(f"set dimension {f.n} does not match operator n={op.n}")
    idx = list(f.indices)
    matrix = op.inverse[:, idx] @ op.forward[idx, :] if idx else np.zeros((op.n, op.n), dtype=complex)
    return Limiter(matrix=matrix, kind="spectral")


def _top_eigenpair(z: np.ndarray) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and eigenvector of the Hermitian part of z."""
    herm = 0.5 * (z + z.conj().T)
    vals, vecs = np.linalg.eigh(herm)
    return float(vals[-1]), vecs[:, -1]


def _clamp_unit(value: float, tol: float = 1e-9) -> float:
    if -tol <= value < 0.0:
        return 0.0
    if 1.0 < value <= 1.0 + tol:
        return 1.0
    return value


def joint_lambda_max(b: Limiter, d: Limiter) -> float:
    """Largest eigenvalue of B D B, the joint-localization operator.

    The product is Hermitian up to round-off; the eigenvalue is computed on
    its Hermitian part and clamped to [0, 1] when within 1e-9 of the ends.
    A value of 1 certifies a signal perfectly localized on both sets.
    """
    if b.n != d.n:
        raise ValidationError("limiter dimensions differ")
    val, _ = _top_eigenpair(b.matrix @ d.matrix @ b.matrix)
    return _clamp_unit(val)


def joint_top_eigenvector(b: Limiter, d: Limiter) -> tuple[float, np.ndarray]:
    """Top eigenpair of B D B; the vector witnesses joint localization at 1."""
    val, vec = _top_eigenpair(b.matrix @ d.matrix @ b.matrix)
    return _clamp_unit(val), vec


def is_perfectly_localized(x: np.ndarray, lim: Limiter, tol: float = 1e-8) -> bool:
    """Whether the limiter leaves x unchanged to relative tolerance tol."""
    x = np.asarray(x, dtype=complex)
    norm = np.linalg.norm(x)
    if norm == 0:
        raise ValidationError("undefined for zero signal")
    return float(np.linalg.norm(lim.matrix @ x - x)) / float(norm) <= tol
