"""Weighted reference-direction model.

Builds the symmetric matrix K = sum_i k_i v_i v_i^T from the known
inertial directions, eigendecomposes it with a deterministic sign and
ordering convention, and precomputes the coefficients that express each
eigenvector as a linear combination of the raw directions. Those
coefficients let the body-frame eigenbasis be reconstructed directly
from vector measurements without a per-step eigendecomposition.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSpectrumError, RankDeficientError
from .so3 import sym3_eigvals, sym3_eigvec

GAP_TOL_REL = 1e-6


@dataclass(frozen=True)
class ReferenceDirection:
    """A known inertial-frame unit direction with a positive weight."""

    v_inertial: np.ndarray
    weight: float

    def __post_init__(self):
        v = np.asarray(self.v_inertial, dtype=float)
        if abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise ValueError(f"direction must be unit length, got norm {np.linalg.norm(v)!r}")
        if self.weight <= 0.0:
            raise ValueError("weight must be positive")
        object.__setattr__(self, "v_inertial", v)


@dataclass(frozen=True)
class ReferenceModel:
    directions: tuple[ReferenceDirection, ...]
    K: np.ndarray
    U: np.ndarray            # rotation whose columns are the eigenvectors
    lambdas: np.ndarray      # eigenvalues of K, strictly descending
    recon: np.ndarray        # (3, n): U[:, j] = sum_i recon[j, i] * v_i
    weights: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "weights",
                           np.array([d.weight for d in self.directions]))

    @property
    def n(self) -> int:
        return len(self.directions)


def direction(v, weight: float) -> ReferenceDirection:
    """Convenience constructor that normalizes a raw direction vector."""
    v = np.asarray(v, dtype=float)
    return ReferenceDirection(v / np.linalg.norm(v), weight)


def build_reference_model(dirs: list[ReferenceDirection],
                          gap_tol_rel: float = GAP_TOL_REL) -> ReferenceModel:
    """Build the model from at least three spanning directions.

    The eigenvalues are sorted descending. Each eigenvector is flipped so
    its largest-magnitude component is positive; if the resulting basis
    has determinant -1 the third column is negated, so U is always a
    rotation. Any choice of signs gives the same observer behavior.

    Raises:
        RankDeficientError: directions do not span 3-space.
        DegenerateSpectrumError: eigenvalue gaps below ``gap_tol_rel * lambda_1``.
    """
    if len(dirs) < 3:
        raise RankDeficientError(f"need at least 3 directions, got {len(dirs)}")
    vmat = np.column_stack([d.v_inertial for d in dirs])    # 3 x n
    weights = np.array([d.weight for d in dirs])
    K = (vmat * weights) @ vmat.T
    K = 0.5 * (K + K.T)

    lam = sym3_eigvals(K)
    if lam[2] < 1e-9 * lam[0]:
        raise RankDeficientError("reference directions do not span 3-space")
    gap_tol = gap_tol_rel * lam[0]
    if lam[0] - lam[1] < gap_tol or lam[1] - lam[2] < gap_tol:
        raise DegenerateSpectrumError(
            f"eigenvalues {lam} not separated by {gap_tol:.3e}")

    u1 = sym3_eigvec(K, lam[0])
    u2 = sym3_eigvec(K, lam[1])
    u2 = u2 - (u1 @ u2) * u1
    u2 /= np.linalg.norm(u2)
    u3 = np.cross(u1, u2)
    U = np.column_stack([u1, u2, u3])
    for j in range(3):
        if U[np.argmax(np.abs(U[:, j])), j] < 0.0:
            U[:, j] = -U[:, j]
    if np.linalg.det(U) < 0.0:
        U[:, 2] = -U[:, 2]

    # coefficients expressing each eigenvector in the raw directions
    recon = np.empty((3, len(dirs)))
    for j in range(3):
        recon[j], *_ = np.linalg.lstsq(vmat, U[:, j], rcond=None)

    return ReferenceModel(tuple(dirs), K, U, lam, recon)


def trace_identity_check(model: ReferenceModel) -> float:
    """|sum of weights - sum of eigenvalues|; zero for a consistent model."""
    return abs(float(model.weights.sum()) - float(model.lambdas.sum()))
