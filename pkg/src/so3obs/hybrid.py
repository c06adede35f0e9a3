"""Hybrid attitude observer with hysteresis-based mode switching.

Three candidate error functions share the nominal terms 1 - bbar_i . b_i
but swap in an "expelling" term alpha + beta bbar_i . b3 on one of the
first two axes. Whenever the active mode's error exceeds the best
alternative by the hysteresis gap delta, the discrete mode jumps to the
argmin; the continuous state is untouched by jumps. The switching
destroys the undesired equilibria of the smooth filter, giving global
instead of almost-global convergence.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .complementary import Gains
from .errors import InvalidParamsError, NotInJumpSetError
from .reference import ReferenceModel
from .sensors import MeasurementFrame


class Mode(enum.IntEnum):
    I = 1
    II = 2
    III = 3


def delta_upper_bound(model: ReferenceModel, alpha: float, beta: float) -> float:
    """Largest admissible hysteresis gap: min{lam1, lam2} min{2-a, a-|b|-1}.

    Raises:
        InvalidParamsError: alpha not in (1, 2), or |beta| >= alpha - 1.
    """
    if not 1.0 < alpha < 2.0:
        raise InvalidParamsError(f"alpha must be in (1, 2), got {alpha!r}")
    if abs(beta) >= alpha - 1.0:
        raise InvalidParamsError(
            f"|beta| = {abs(beta)!r} must be < alpha - 1 = {alpha - 1.0!r}")
    lam = model.lambdas
    return min(lam[0], lam[1]) * min(2.0 - alpha, alpha - abs(beta) - 1.0)


@dataclass(frozen=True)
class HybridParams:
    alpha: float
    beta: float
    delta: float
    gains: Gains

    def validate(self, model: ReferenceModel) -> None:
        """Raise InvalidParamsError unless all admissibility constraints hold."""
        bound = delta_upper_bound(model, self.alpha, self.beta)
        if not 0.0 < self.delta < bound:
            raise InvalidParamsError(
                f"delta = {self.delta!r} must lie in (0, {bound!r})")


@dataclass(frozen=True)
class HybridState:
    R_bar: np.ndarray
    gamma_bar: np.ndarray
    mode: Mode


def _b_bars(R_bar: np.ndarray, model: ReferenceModel) -> np.ndarray:
    """Columns bbar_i = R_bar^T u_i as a 3x3 matrix."""
    return R_bar.T @ model.U


def psi_nominal(i: int, B: np.ndarray, R_bar: np.ndarray,
                model: ReferenceModel) -> float:
    """Nominal error term 1 - bbar_i . b_i for axis i in {1, 2, 3}."""
    b_bar = R_bar.T @ model.U[:, i - 1]
    return float(1.0 - b_bar @ B[:, i - 1])


def psi_expel(i: int, B: np.ndarray, R_bar: np.ndarray,
              model: ReferenceModel, params: HybridParams) -> float:
    """Expelling error term alpha + beta bbar_i . b3 for axis i in {1, 2}."""
    b_bar = R_bar.T @ model.U[:, i - 1]
    return float(params.alpha + params.beta * (b_bar @ B[:, 2]))


def psi_mode(mode: Mode, B: np.ndarray, R_bar: np.ndarray,
             model: ReferenceModel, params: HybridParams) -> float:
    """Error function of one mode: weighted sum of nominal/expelling terms."""
    lam = model.lambdas
    b_bar = _b_bars(R_bar, model)
    terms = [1.0 - b_bar[:, j] @ B[:, j] for j in range(3)]
    if mode is Mode.II:
        terms[1] = params.alpha + params.beta * (b_bar[:, 1] @ B[:, 2])
    elif mode is Mode.III:
        terms[0] = params.alpha + params.beta * (b_bar[:, 0] @ B[:, 2])
    return float(lam @ np.asarray(terms))


def rho(B: np.ndarray, R_bar: np.ndarray, model: ReferenceModel,
        params: HybridParams) -> float:
    """Minimum of the three mode error functions."""
    return min(psi_mode(m, B, R_bar, model, params) for m in Mode)


def jump_needed(state: HybridState, B: np.ndarray, model: ReferenceModel,
                params: HybridParams) -> bool:
    """True iff the active mode trails the best one by at least delta."""
    current = psi_mode(state.mode, B, state.R_bar, model, params)
    return current - rho(B, state.R_bar, model, params) >= params.delta


def apply_jump(state: HybridState, B: np.ndarray, model: ReferenceModel,
               params: HybridParams) -> HybridState:
    """Switch to the argmin mode; ties break toward the lowest mode index.

    Raises:
        NotInJumpSetError: the hysteresis condition does not hold.
    """
    if not jump_needed(state, B, model, params):
        raise NotInJumpSetError("mode switch requested inside the flow set")
    values = [psi_mode(m, B, state.R_bar, model, params) for m in Mode]
    best = list(Mode)[int(np.argmin(values))]
    return replace(state, mode=best)


def innovation_eH(state: HybridState, B: np.ndarray, model: ReferenceModel,
                  params: HybridParams) -> np.ndarray:
    """Hybrid innovation e_H = sum_i lam_i e_Hi.

    e_H1 = b1 x bbar1 except in mode III, where it is -beta (b3 x bbar1);
    e_H2 = b2 x bbar2 except in mode II, where it is -beta (b3 x bbar2);
    e_H3 = b3 x bbar3 in every mode. In mode I this reduces exactly to
    the smooth filter's innovation.
    """
    lam = model.lambdas
    b_bar = _b_bars(state.R_bar, model)
    if state.mode is Mode.III:
        e1 = -params.beta * np.cross(B[:, 2], b_bar[:, 0])
    else:
        e1 = np.cross(B[:, 0], b_bar[:, 0])
    if state.mode is Mode.II:
        e2 = -params.beta * np.cross(B[:, 2], b_bar[:, 1])
    else:
        e2 = np.cross(B[:, 1], b_bar[:, 1])
    e3 = np.cross(B[:, 2], b_bar[:, 2])
    return lam[0] * e1 + lam[1] * e2 + lam[2] * e3


def flow(state: HybridState, frame: MeasurementFrame, model: ReferenceModel,
         params: HybridParams) -> tuple[np.ndarray, np.ndarray]:
    """Continuous dynamics: Omega_bar = (Omega_y - gamma_bar) + k_R e_H,
    gamma_bar_dot = -k_I e_H."""
    e_h = innovation_eH(state, frame.B, model, params)
    omega_bar = (frame.Omega_y - state.gamma_bar) + params.gains.k_R * e_h
    return omega_bar, -params.gains.k_I * e_h


def lyapunov(state: HybridState, B: np.ndarray, model: ReferenceModel,
             params: HybridParams, true_gamma: np.ndarray) -> float:
    """V = Psi_mode + ||gamma - gamma_bar||^2 / (2 k_I)."""
    gamma_err = np.asarray(true_gamma) - state.gamma_bar
    return psi_mode(state.mode, B, state.R_bar, model, params) \
        + float(gamma_err @ gamma_err) / (2.0 * params.gains.k_I)


# the 12 tabulated configurations: each row maps (bbar1, bbar2, bbar3)
# to signed columns of B = [b1 b2 b3]; (index, sign) pairs, 1-based
_TABLE_ROWS: list[tuple[Mode, str, tuple[tuple[int, int], ...]]] = [
    (Mode.I, "desired", ((1, +1), (2, +1), (3, +1))),
    (Mode.I, "undesired 1", ((1, -1), (2, +1), (3, -1))),
    (Mode.I, "undesired 2", ((1, +1), (2, -1), (3, -1))),
    (Mode.I, "undesired 3", ((1, -1), (2, -1), (3, +1))),
    (Mode.II, "undesired 1", ((1, +1), (3, -1), (2, +1))),
    (Mode.II, "undesired 2", ((1, -1), (3, -1), (2, -1))),
    (Mode.II, "undesired 3", ((1, +1), (3, +1), (2, -1))),
    (Mode.II, "undesired 4", ((1, -1), (3, +1), (2, +1))),
    (Mode.III, "undesired 1", ((3, -1), (2, +1), (1, +1))),
    (Mode.III, "undesired 2", ((3, -1), (2, -1), (1, -1))),
    (Mode.III, "undesired 3", ((3, +1), (2, +1), (1, -1))),
    (Mode.III, "undesired 4", ((3, +1), (2, -1), (1, +1))),
]


def critical_points(model: ReferenceModel, truth_R: np.ndarray
                    ) -> list[tuple[Mode, np.ndarray, str]]:
    """The 12 tabulated estimate attitudes, as (mode, R_bar, label).

    Each attitude realizes one signed permutation of the measured basis
    as (bbar1, bbar2, bbar3). R_bar is recovered from R_bar^T U = B_bar.
    """
    B = truth_R.T @ model.U
    out = []
    for mode, label, row in _TABLE_ROWS:
        B_bar = np.column_stack([sign * B[:, idx - 1] for idx, sign in row])
        R_bar = model.U @ B_bar.T
        out.append((mode, R_bar, label))
    return out


def stationary_points(mode: Mode, model: ReferenceModel, truth_R: np.ndarray,
                      params: HybridParams) -> list[np.ndarray]:
    """All estimate attitudes where the innovation of ``mode`` vanishes.

    The mode's error function equals const - tr(A^T S) in the relative
    rotation S = B_bar^T B, with A collecting the lambda/beta
    coefficients. Its stationary points over the rotation group are
    S = W Q Z^T for the singular decomposition A = W diag(s) Z^T and the
    four diagonal sign matrices Q with det(Q) = det(W) det(Z). Returns
    the four corresponding R_bar.
    """
    lam = model.lambdas
    a = np.diag(lam).astype(float)
    if mode is Mode.II:
        a[1, 1] = 0.0
        a[1, 2] = -lam[1] * params.beta
    elif mode is Mode.III:
        a[0, 0] = 0.0
        a[0, 2] = -lam[0] * params.beta
    w, _, zt = np.linalg.svd(a)
    d = np.linalg.det(w) * np.linalg.det(zt)
    out = []
    for q in ([1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]):
        s = (w * (d * np.asarray(q, dtype=float))) @ zt
        out.append(model.U @ s @ model.U.T @ truth_R)
    return out
