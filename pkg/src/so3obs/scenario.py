"""Scenario configuration, ground-truth synthesis, simulation loop, CSV IO.

Scenario files are flat ``key = value`` text: scalars as plain numbers,
vectors and matrices as bracketed lists (row-major for 3x3), ``#`` for
comments. See the shipped files under ``so3obs/scenarios/`` for a
commented example.
"""
from __future__ import annotations

import ast
import csv
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import complementary, hybrid
from .complementary import Gains, ObserverState
from .errors import ScenarioError
from .hybrid import HybridParams, HybridState, Mode
from .integrators import StepInput, cg2_step, naive_rk4_step
from .reference import ReferenceDirection, ReferenceModel, build_reference_model, direction
from .sensors import MeasurementFrame, NoiseSpec, TruthState, make_frame
from .so3 import E1, E2, E3, exp_hat, euler321, orthogonality_defect, \
    project_rotation, spectral_norm

OBSERVERS = ("hybrid", "complementary")
INTEGRATORS = ("cg2", "naive_rk4")

CSV_HEADER = ["t", "att_err", "mode", "e_h_norm", "gamma_err_x",
              "gamma_err_y", "gamma_err_z", "psi", "lyapunov",
              "ortho_defect", "jump_flag"]


def truth_state(t: float, gamma: np.ndarray) -> TruthState:
    """Analytic truth at time t: a nontrivial three-axis maneuver.

    Euler 3-2-1 angles a = sin(t/2), b = 2 sin t, c = cos 2t - 3, with
    the exact body rate of the chain.
    """
    a, b, c = math.sin(0.5 * t), 2.0 * math.sin(t), math.cos(2.0 * t) - 3.0
    ad, bd, cd = 0.5 * math.cos(0.5 * t), 2.0 * math.cos(t), -2.0 * math.sin(2.0 * t)
    R = euler321(a, b, c)
    omega = cd * E1 \
        + bd * (exp_hat(-c * E1) @ E2) \
        + ad * (exp_hat(-c * E1) @ exp_hat(-b * E2) @ E3)
    return TruthState(t, R, omega, np.asarray(gamma, dtype=float))


@dataclass(frozen=True)
class TimeSeriesRecord:
    t: float
    att_err: float
    mode: int
    e_h_norm: float
    gamma_err: np.ndarray
    psi: float
    lyapunov: float
    ortho_defect: float
    jump_flag: bool


@dataclass
class Scenario:
    duration: float
    h: float
    directions: list[ReferenceDirection]
    gains: Gains
    alpha: float
    beta: float
    gamma: np.ndarray
    R_bar0_raw: np.ndarray
    gamma_bar0: np.ndarray
    observer: str = "hybrid"
    integrator: str = "cg2"
    delta: float | None = None
    sigma_dir: float = 0.0
    sigma_gyro: float = 0.0
    seed: int = 0
    model: ReferenceModel = field(init=False, repr=False)

    def __post_init__(self):
        if self.duration <= 0.0:
            raise ScenarioError("duration must be positive")
        if self.h <= 0.0:
            raise ScenarioError("step size h must be positive")
        if self.observer not in OBSERVERS:
            raise ScenarioError(f"observer must be one of {OBSERVERS}, "
                                f"got {self.observer!r}")
        if self.integrator not in INTEGRATORS:
            raise ScenarioError(f"integrator must be one of {INTEGRATORS}, "
                                f"got {self.integrator!r}")
        try:
            self.model = build_reference_model(self.directions)
        except Exception as exc:
            raise ScenarioError(f"bad reference directions: {exc}") from exc

    def hybrid_params(self) -> HybridParams:
        """Resolved switching parameters; delta defaults to half its bound."""
        try:
            bound = hybrid.delta_upper_bound(self.model, self.alpha, self.beta)
            delta = 0.5 * bound if self.delta is None else self.delta
            params = HybridParams(self.alpha, self.beta, delta, self.gains)
            params.validate(self.model)
        except Exception as exc:
            raise ScenarioError(str(exc)) from exc
        return params

    def effective_seed(self) -> int:
        env = os.environ.get("SO3_OBS_SEED")
        return int(env) if env else self.seed


def _parse_value(text: str, key: str, path: str):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError) as exc:
        raise ScenarioError(f"{path}: bad value for {key!r}: {text!r}") from exc


def load_scenario(path: str) -> Scenario:
    """Parse a flat key = value scenario file.

    Raises:
        ScenarioError: unreadable file, malformed line, missing or
            inconsistent keys.
    """
    raw: dict[str, object] = {}
    try:
        with open(path) as f:
            lines = f.readlines()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    pending_key = None
    pending_text = ""
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if pending_key is None:
            if "=" not in line:
                raise ScenarioError(f"{path}:{lineno}: expected 'key = value'")
            key, text = (s.strip() for s in line.split("=", 1))
        else:
            key, text = pending_key, pending_text + " " + line
        if text.count("[") > text.count("]"):
            # bracketed value continues on the next line
            pending_key, pending_text = key, text
            continue
        pending_key = None
        if key in ("observer", "integrator"):
            raw[key] = text
        else:
            raw[key] = _parse_value(text, key, path)
    if pending_key is not None:
        raise ScenarioError(f"{path}: unterminated list for {pending_key!r}")

    def need(key):
        if key not in raw:
            raise ScenarioError(f"{path}: missing key {key!r}")
        return raw.pop(key)

    dirs = []
    i = 1
    while f"dir_{i}" in raw:
        v = np.asarray(raw.pop(f"dir_{i}"), dtype=float)
        w = float(need(f"weight_{i}"))
        dirs.append(direction(v, w))
        i += 1
    if len(dirs) < 3:
        raise ScenarioError(f"{path}: need dir_1..dir_n (n >= 3), found {len(dirs)}")

    r0 = np.asarray(need("R_bar0"), dtype=float)
    if r0.size != 9:
        raise ScenarioError(f"{path}: R_bar0 must have 9 entries")

    try:
        scn = Scenario(
            duration=float(need("duration")),
            h=float(need("h")),
            directions=dirs,
            gains=Gains(float(need("k_R")), float(need("k_I"))),
            alpha=float(need("alpha")),
            beta=float(need("beta")),
            gamma=np.asarray(need("gamma"), dtype=float),
            R_bar0_raw=r0.reshape(3, 3),
            gamma_bar0=np.asarray(need("gamma_bar0"), dtype=float),
            observer=str(raw.pop("observer", "hybrid")),
            integrator=str(raw.pop("integrator", "cg2")),
            delta=float(raw.pop("delta")) if "delta" in raw else None,
            sigma_dir=float(raw.pop("sigma_dir", 0.0)),
            sigma_gyro=float(raw.pop("sigma_gyro", 0.0)),
            seed=int(raw.pop("seed", 0)),
        )
    except ScenarioError:
        raise
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{path}: {exc}") from exc
    if raw:
        raise ScenarioError(f"{path}: unknown keys {sorted(raw)}")
    return scn


def _frames(scn: Scenario) -> list[MeasurementFrame]:
    noise = None
    if scn.sigma_dir > 0.0 or scn.sigma_gyro > 0.0:
        noise = NoiseSpec(scn.sigma_dir, scn.sigma_gyro, scn.effective_seed())
    n_steps = round(scn.duration / scn.h)
    return [make_frame(truth_state(k * scn.h, scn.gamma), scn.model, noise)
            for k in range(n_steps + 1)]


def run(scn: Scenario, frames: list[MeasurementFrame] | None = None
        ) -> list[TimeSeriesRecord]:
    """Simulate one scenario; deterministic for a fixed seed.

    Jumps are resolved at step boundaries before logging; within a step
    the mode is frozen. ``frames`` may be passed in to share one
    measurement stream between paired runs.
    """
    model = scn.model
    if frames is None:
        frames = _frames(scn)
    n_steps = len(frames) - 1
    is_hybrid = scn.observer == "hybrid"
    params = scn.hybrid_params() if is_hybrid else None
    step = cg2_step if scn.integrator == "cg2" else naive_rk4_step

    R_bar = project_rotation(scn.R_bar0_raw)
    gamma_bar = np.asarray(scn.gamma_bar0, dtype=float).copy()
    mode = Mode.I

    records = []
    for k in range(n_steps + 1):
        frame = frames[k]
        truth = truth_state(frame.t, scn.gamma)

        jump_flag = False
        if is_hybrid:
            st = HybridState(R_bar, gamma_bar, mode)
            for _ in range(len(Mode) - 1):
                if not hybrid.jump_needed(st, frame.B, model, params):
                    break
                st = hybrid.apply_jump(st, frame.B, model, params)
                jump_flag = True
            mode = st.mode
            e_h = hybrid.innovation_eH(st, frame.B, model, params)
            psi = hybrid.psi_mode(mode, frame.B, R_bar, model, params)
        else:
            obs = ObserverState(R_bar, gamma_bar)
            e_h = complementary.innovation_eR(obs, frame, model)
            psi = complementary.psi_value(frame.B, R_bar, model)

        gamma_err = truth.gamma - gamma_bar
        records.append(TimeSeriesRecord(
            t=frame.t,
            att_err=spectral_norm(R_bar - truth.R),
            mode=int(mode) if is_hybrid else 1,
            e_h_norm=float(np.linalg.norm(e_h)),
            gamma_err=gamma_err,
            psi=psi,
            lyapunov=psi + float(gamma_err @ gamma_err) / (2.0 * scn.gains.k_I),
            ortho_defect=orthogonality_defect(R_bar),
            jump_flag=jump_flag,
        ))

        if k == n_steps:
            break
        if is_hybrid:
            frozen = mode

            def flow_fn(R, g, fr):
                st = HybridState(R, g, frozen)
                return hybrid.flow(st, fr, model, params)
        else:
            def flow_fn(R, g, fr):
                return complementary.flow(ObserverState(R, g), fr, model,
                                          scn.gains)
        R_bar, gamma_bar = step(R_bar, gamma_bar, flow_fn,
                                StepInput(scn.h, frame, frames[k + 1]))
    return records


def switch_times(records: list[TimeSeriesRecord]) -> list[tuple[float, int, int]]:
    """(t, mode_from, mode_to) for every mode change in a run."""
    out = []
    for prev, cur in zip(records, records[1:]):
        if cur.mode != prev.mode:
            out.append((cur.t, prev.mode, cur.mode))
    return out


def write_csv(records: list[TimeSeriesRecord], path: str) -> None:
    """One row per record, 17-significant-digit decimal text."""
    def fmt(x: float) -> str:
        return format(float(x), ".17g")

    try:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(CSV_HEADER)
            for r in records:
                w.writerow([fmt(r.t), fmt(r.att_err), str(r.mode),
                            fmt(r.e_h_norm), fmt(r.gamma_err[0]),
                            fmt(r.gamma_err[1]), fmt(r.gamma_err[2]),
                            fmt(r.psi), fmt(r.lyapunov), fmt(r.ortho_defect),
                            str(int(r.jump_flag))])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def read_csv(path: str) -> list[TimeSeriesRecord]:
    try:
        with open(path, newline="") as f:
            reader = csv.reader(f)
            header = next(reader)
            if header != CSV_HEADER:
                raise ValueError(f"{path}: unexpected header {header}")
            out = []
            for row in reader:
                out.append(TimeSeriesRecord(
                    t=float(row[0]), att_err=float(row[1]), mode=int(row[2]),
                    e_h_norm=float(row[3]),
                    gamma_err=np.array([float(row[4]), float(row[5]),
                                        float(row[6])]),
                    psi=float(row[7]), lyapunov=float(row[8]),
                    ortho_defect=float(row[9]), jump_flag=bool(int(row[10])),
                ))
            return out
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
