"""Synthetic measurements and body-frame basis reconstruction."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateError
from .reference import ReferenceModel
from .so3 import exp_hat, sym3_eigvals, sym3_eigvec


@dataclass(frozen=True)
class TruthState:
    t: float
    R: np.ndarray          # body -> inertial
    Omega: np.ndarray      # body-frame angular velocity, rad/s
    gamma: np.ndarray      # constant gyro bias, rad/s


@dataclass
class NoiseSpec:
    """Measurement noise levels; owns its own random stream.

    sigma_dir is the per-axis std-dev of a small random rotation applied
    to each direction measurement (tangent-space perturbation), sigma_gyro
    the additive per-axis std-dev on the rate measurement.
    """

    sigma_dir: float = 0.0
    sigma_gyro: float = 0.0
    seed: int = 0
    rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        if self.sigma_dir < 0 or self.sigma_gyro < 0:
            raise ValueError("noise sigmas must be >= 0")
        self.rng = np.random.default_rng(self.seed)


@dataclass(frozen=True)
class MeasurementFrame:
    t: float
    v_body: tuple[np.ndarray, ...]   # unit direction measurements
    Omega_y: np.ndarray              # biased (and possibly noisy) gyro
    B: np.ndarray                    # reconstructed body-frame eigenbasis


def measure_vectors(truth: TruthState, model: ReferenceModel,
                    noise: NoiseSpec | None = None) -> list[np.ndarray]:
    """Body-frame direction measurements v_i = R^T v_i_inertial (+ noise)."""
    out = []
    for d in model.directions:
        v = truth.R.T @ d.v_inertial
        if noise is not None and noise.sigma_dir > 0.0:
            v = exp_hat(noise.rng.normal(0.0, noise.sigma_dir, 3)) @ v
            v = v / np.linalg.norm(v)
        out.append(v)
    return out


def measure_gyro(truth: TruthState, noise: NoiseSpec | None = None) -> np.ndarray:
    """Rate measurement Omega + gamma (+ noise)."""
    w = truth.Omega + truth.gamma
    if noise is not None and noise.sigma_gyro > 0.0:
        w = w + noise.rng.normal(0.0, noise.sigma_gyro, 3)
    return w


def reconstruct_B(v_body: list[np.ndarray], model: ReferenceModel) -> np.ndarray:
    """Body-frame eigenbasis B = [b1 b2 b3] from direction measurements.

    Each column is the linear combination of the measurements given by the
    model's reconstruction coefficients, then orthonormalized with
    b3 := b1 x b2. Noise-free this equals R^T U exactly; the linear route
    has none of the column sign/order ambiguity of re-eigendecomposing the
    measured covariance.

    Raises:
        DegenerateError: reconstructed columns near-collinear.
    """
    raw = [sum(model.recon[j, i] * v_body[i] for i in range(model.n))
           for j in range(3)]
    n1 = np.linalg.norm(raw[0])
    if n1 < 1e-9:
        raise DegenerateError("reconstructed b1 vanishes")
    b1 = raw[0] / n1
    b2 = raw[1] - (b1 @ raw[1]) * b1
    n2 = np.linalg.norm(b2)
    if n2 < 1e-3 * np.linalg.norm(raw[1]):
        raise DegenerateError("reconstructed b1, b2 near-collinear")
    b2 = b2 / n2
    b3 = np.cross(b1, b2)
    return np.column_stack([b1, b2, b3])


def make_frame(truth: TruthState, model: ReferenceModel,
               noise: NoiseSpec | None = None) -> MeasurementFrame:
    """Full measurement frame at one instant."""
    v_body = measure_vectors(truth, model, noise)
    omega_y = measure_gyro(truth, noise)
    B = reconstruct_B(v_body, model)
    return MeasurementFrame(truth.t, tuple(v_body), omega_y, B)


def measured_covariance(v_body: list[np.ndarray], model: ReferenceModel) -> np.ndarray:
    """K_B = sum_i k_i v_i v_i^T built from body-frame measurements."""
    vmat = np.column_stack(v_body)
    K_B = (vmat * model.weights) @ vmat.T
    return 0.5 * (K_B + K_B.T)


def eigenbasis_from_covariance(K_B: np.ndarray, B_ref: np.ndarray
                               ) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of K_B with column signs resolved against B_ref.

    The per-column sign ambiguity corresponds exactly to half-turns about
    the eigenaxes, which is why this route is kept out of the observer
    loop and used only as a cross-check.
    """
    lam = sym3_eigvals(K_B)
    cols = []
    for j in range(3):
        u = sym3_eigvec(K_B, lam[j])
        if u @ B_ref[:, j] < 0.0:
            u = -u
        cols.append(u)
    return np.column_stack(cols), lam


def decompose_KB_check(v_body: list[np.ndarray], model: ReferenceModel,
                       B_ref: np.ndarray) -> float:
    """Cross-validation residual ||K_B - B_ref diag(lam_KB) B_ref^T||_F.

    lam_KB are the eigenvalues of the measured covariance; noise-free this
    residual vanishes because B_ref spans the same eigenspaces.
    """
    K_B = measured_covariance(v_body, model)
    _, lam = eigenbasis_from_covariance(K_B, B_ref)
    return float(np.linalg.norm(K_B - B_ref @ np.diag(lam) @ B_ref.T))
