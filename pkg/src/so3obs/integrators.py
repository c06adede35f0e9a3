"""Time stepping for the observer dynamics.

Two schemes: a two-stage Crouch-Grossman update whose attitude moves by
group multiplication with matrix exponentials (stays on the rotation
group to round-off), and a deliberately naive additive Runge-Kutta 4
baseline that treats the 3x3 attitude as nine scalars and drifts off the
group. The naive scheme exists only to quantify that drift.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .sensors import MeasurementFrame
from .so3 import exp_hat, hat

# flow(R_bar, gamma_bar, frame) -> (Omega_bar, gamma_bar_dot)
FlowFn = Callable[[np.ndarray, np.ndarray, MeasurementFrame],
                  tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class StepInput:
    h: float
    frame_n: MeasurementFrame
    frame_n1: MeasurementFrame

    def __post_init__(self):
        if self.h <= 0.0:
            raise ValueError("step size must be positive")


def cg2_step(R_bar: np.ndarray, gamma_bar: np.ndarray, flow: FlowFn,
             inp: StepInput) -> tuple[np.ndarray, np.ndarray]:
    """Two-stage Crouch-Grossman step.

    Stage 1 evaluates the flow at (state_n, frame_n) and advances with
    the spatial rate w1 = R_bar Omega_bar; stage 2 re-evaluates at the
    predicted state with the frame at t_{n+1}; the final attitude update
    is exp(h/2 (w1 + w2)) R_bar_n, the bias update the trapezoid of the
    two stage derivatives. Exact for constant spatial rate.
    """
    h = inp.h
    om1, gd1 = flow(R_bar, gamma_bar, inp.frame_n)
    w1 = R_bar @ om1
    R_pred = exp_hat(h * w1) @ R_bar
    g_pred = gamma_bar + h * gd1

    om2, gd2 = flow(R_pred, g_pred, inp.frame_n1)
    w2 = R_pred @ om2
    R_next = exp_hat(0.5 * h * (w1 + w2)) @ R_bar
    g_next = gamma_bar + 0.5 * h * (gd1 + gd2)
    return R_next, g_next


def naive_rk4_step(R_bar: np.ndarray, gamma_bar: np.ndarray, flow: FlowFn,
                   inp: StepInput) -> tuple[np.ndarray, np.ndarray]:
    """Classical additive RK4 on d/dt R = R hat(Omega_bar), nine scalars.

    No projection back to the rotation group; the orthogonality defect
    this accumulates is the quantity of interest. Measurement frames are
    zero-order held: stages 1-3 use frame_n, stage 4 frame_{n+1}.
    """
    h = inp.h

    def deriv(R, g, frame):
        om, gd = flow(R, g, frame)
        return R @ hat(om), gd

    k1R, k1g = deriv(R_bar, gamma_bar, inp.frame_n)
    k2R, k2g = deriv(R_bar + 0.5 * h * k1R, gamma_bar + 0.5 * h * k1g,
                     inp.frame_n)
    k3R, k3g = deriv(R_bar + 0.5 * h * k2R, gamma_bar + 0.5 * h * k2g,
                     inp.frame_n)
    k4R, k4g = deriv(R_bar + h * k3R, gamma_bar + h * k3g, inp.frame_n1)

    R_next = R_bar + (h / 6.0) * (k1R + 2.0 * k2R + 2.0 * k3R + k4R)
    g_next = gamma_bar + (h / 6.0) * (k1g + 2.0 * k2g + 2.0 * k3g + k4g)
    return R_next, g_next
