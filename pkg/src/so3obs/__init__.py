"""Hybrid attitude observer on the rotation group.

A smooth complementary filter, a globally convergent hybrid variant
with hysteresis-based mode switching, a group-preserving two-stage
integrator, and a deterministic simulation harness.
"""
from .complementary import Gains, ObserverState
from .errors import (DegenerateError, DegenerateSpectrumError,
                     InvalidParamsError, NotInJumpSetError, NotSkewError,
                     RankDeficientError, ScenarioError, So3ObsError)
from .hybrid import HybridParams, HybridState, Mode, delta_upper_bound
from .reference import ReferenceDirection, ReferenceModel, \
    build_reference_model, direction
from .scenario import Scenario, TimeSeriesRecord, load_scenario, read_csv, \
    run, switch_times, truth_state, write_csv
from .sensors import MeasurementFrame, NoiseSpec, TruthState, make_frame
from .so3 import exp_hat, hat, project_rotation, spectral_norm, vee

__all__ = [
    "DegenerateError", "DegenerateSpectrumError", "Gains", "HybridParams",
    "HybridState", "InvalidParamsError", "MeasurementFrame", "Mode",
    "NoiseSpec", "NotInJumpSetError", "NotSkewError", "ObserverState",
    "RankDeficientError", "ReferenceDirection", "ReferenceModel",
    "Scenario", "ScenarioError", "So3ObsError", "TimeSeriesRecord",
    "TruthState", "build_reference_model", "delta_upper_bound", "direction",
    "exp_hat", "hat", "load_scenario", "make_frame", "project_rotation",
    "read_csv", "run", "spectral_norm", "switch_times", "truth_state",
    "vee", "write_csv",
]

__version__ = "0.1.0"
