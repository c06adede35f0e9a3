"""Smooth passive complementary filter with gyro-bias correction.

The baseline observer: almost globally asymptotically stable, with three
undesired equilibria at half-turns of the truth about the eigenaxes of
the reference matrix K.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .reference import ReferenceModel
from .sensors import MeasurementFrame
from .so3 import exp_hat


@dataclass(frozen=True)
class Gains:
    k_R: float
    k_I: float

    def __post_init__(self):
        if self.k_R <= 0.0 or self.k_I <= 0.0:
            raise ValueError("gains must be positive")


@dataclass(frozen=True)
class ObserverState:
    R_bar: np.ndarray
    gamma_bar: np.ndarray


def innovation_eR(state: ObserverState, frame: MeasurementFrame,
                  model: ReferenceModel) -> np.ndarray:
    """Innovation e_R = sum_i k_i (v_i_body x v_i_estimate)."""
    e = np.zeros(3)
    for d, v_b in zip(model.directions, frame.v_body):
        v_e = state.R_bar.T @ d.v_inertial
        e += d.weight * np.cross(v_b, v_e)
    return e


def flow(state: ObserverState, frame: MeasurementFrame, model: ReferenceModel,
         gains: Gains) -> tuple[np.ndarray, np.ndarray]:
    """Body-frame estimate rate and bias-estimate rate.

    Returns (Omega_bar, gamma_bar_dot) with
    Omega_bar = (Omega_y - gamma_bar) + k_R e_R, so that the attitude
    estimate evolves as d/dt R_bar = R_bar hat(Omega_bar), and
    gamma_bar_dot = -k_I e_R.
    """
    e_r = innovation_eR(state, frame, model)
    omega_bar = (frame.Omega_y - state.gamma_bar) + gains.k_R * e_r
    return omega_bar, -gains.k_I * e_r


def psi_value(B: np.ndarray, R_bar: np.ndarray, model: ReferenceModel) -> float:
    """Attitude error function in the eigenbasis form sum_i lam_i (1 - bbar_i . b_i)."""
    total = 0.0
    for j in range(3):
        b_bar = R_bar.T @ model.U[:, j]
        total += model.lambdas[j] * (1.0 - b_bar @ B[:, j])
    return float(total)


def psi_direct(R: np.ndarray, R_bar: np.ndarray, model: ReferenceModel) -> float:
    """Same error function from the raw weighted directions (cross-check path)."""
    total = 0.0
    for d in model.directions:
        total += d.weight * (1.0 - (R_bar.T @ d.v_inertial) @ (R.T @ d.v_inertial))
    return float(total)


def equilibria(model: ReferenceModel, truth_R: np.ndarray) -> list[np.ndarray]:
    """The four equilibrium attitudes: truth, and its half-turns about each eigenaxis."""
    out = [truth_R.copy()]
    for j in range(3):
        out.append(exp_hat(np.pi * model.U[:, j]) @ truth_R)
    return out
