"""Primitives for 3-vectors, 3x3 matrices and the rotation group.

Vectors are numpy arrays of shape (3,), matrices of shape (3, 3), all
float64. Rotations are plain (3, 3) arrays validated with
:func:`check_rotation`; there is no wrapper class.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateError, NotSkewError

TOL_ORTH = 1e-9
TOL_SKEW = 1e-9

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


def hat(v: np.ndarray) -> np.ndarray:
    """Skew-symmetric matrix of v, so that hat(v) @ w == cross(v, w)."""
    x, y, z = v
    return np.array([[0.0, -z, y],
                     [z, 0.0, -x],
                     [-y, x, 0.0]])


def vee(m: np.ndarray, tol: float = TOL_SKEW) -> np.ndarray:
    """Inverse of :func:`hat`.

    Raises:
        NotSkewError: if ||m + m^T||_F exceeds ``tol``.
    """
    defect = np.linalg.norm(m + m.T)
    if defect > tol:
        raise NotSkewError(f"matrix is not skew-symmetric: ||M + M^T|| = {defect:.3e}")
    return 0.5 * np.array([m[2, 1] - m[1, 2],
                           m[0, 2] - m[2, 0],
                           m[1, 0] - m[0, 1]])


def exp_hat(v: np.ndarray) -> np.ndarray:
    """Rotation by angle ||v|| about axis v/||v|| (Rodrigues closed form).

    Below ||v|| < 1e-8 the second-order series I + hat(v) + hat(v)^2/2
    is used to avoid the 0/0 in the trigonometric coefficients.
    """
    theta = float(np.linalg.norm(v))
    k = hat(v)
    if theta < 1e-8:
        return np.eye(3) + k + 0.5 * (k @ k)
    return np.eye(3) + (math.sin(theta) / theta) * k \
        + ((1.0 - math.cos(theta)) / theta**2) * (k @ k)


def project_rotation(m: np.ndarray, sigma_min: float = 1e-6) -> np.ndarray:
    """Nearest rotation matrix in the Frobenius norm (polar factor).

    Raises:
        DegenerateError: if det(m) <= 0 or m is near rank-deficient.
    """
    if np.linalg.det(m) <= 0.0:
        raise DegenerateError("cannot project: det(M) <= 0")
    u, s, vt = np.linalg.svd(m)
    if s[-1] < sigma_min:
        raise DegenerateError(f"cannot project: smallest singular value {s[-1]:.3e}")
    d = np.linalg.det(u @ vt)
    return u @ np.diag([1.0, 1.0, d]) @ vt


def sym3_eigvals(a: np.ndarray) -> np.ndarray:
    """Eigenvalues of a symmetric 3x3 matrix, descending, closed form.

    Uses the trigonometric (Cardano) solution of the characteristic
    cubic; no iterative linear algebra involved.
    """
    q = a.trace() / 3.0
    b = a - q * np.eye(3)
    p2 = float((b * b).sum()) / 6.0
    if p2 <= 0.0:
        return np.array([q, q, q])
    p = math.sqrt(p2)
    detb = float(np.linalg.det(b))
    r = detb / (2.0 * p**3)
    r = min(1.0, max(-1.0, r))
    phi = math.acos(r) / 3.0
    lam1 = q + 2.0 * p * math.cos(phi)
    lam3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    lam2 = 3.0 * q - lam1 - lam3
    return np.array([lam1, lam2, lam3])


def sym3_eigvec(a: np.ndarray, lam: float) -> np.ndarray:
    """Unit eigenvector of symmetric ``a`` for an isolated eigenvalue.

    Picks the largest cross product of two rows of (a - lam*I), which is
    well conditioned when ``lam`` is separated from the other eigenvalues.
    """
    m = a - lam * np.eye(3)
    c01 = np.cross(m[0], m[1])
    c02 = np.cross(m[0], m[2])
    c12 = np.cross(m[1], m[2])
    best = max((c01, c02, c12), key=np.linalg.norm)
    n = np.linalg.norm(best)
    if n < 1e-14:
        raise DegenerateError("eigenvalue is not isolated; eigenvector undetermined")
    return best / n


def spectral_norm(m: np.ndarray) -> float:
    """Largest singular value, from the closed-form eigenvalues of M^T M."""
    lam = sym3_eigvals(m.T @ m)
    return math.sqrt(max(float(lam[0]), 0.0))


def orthogonality_defect(m: np.ndarray) -> float:
    """||M^T M - I||_F, the departure of M from the rotation group."""
    return float(np.linalg.norm(m.T @ m - np.eye(3)))


def check_rotation(m: np.ndarray, tol: float = TOL_ORTH) -> None:
    """Validate the rotation-matrix invariants.

    Raises:
        DegenerateError: if M is not orthogonal with det +1 within ``tol``.
    """
    defect = orthogonality_defect(m)
    if defect > tol:
        raise DegenerateError(f"not orthogonal: ||M^T M - I|| = {defect:.3e}")
    det = float(np.linalg.det(m))
    if abs(det - 1.0) > tol:
        raise DegenerateError(f"det(M) = {det!r}, expected +1")


def euler321(a: float, b: float, c: float) -> np.ndarray:
    """Rotation from 3-2-1 Euler angles: exp(a e3^) exp(b e2^) exp(c e1^)."""
    return exp_hat(a * E3) @ exp_hat(b * E2) @ exp_hat(c * E1)
