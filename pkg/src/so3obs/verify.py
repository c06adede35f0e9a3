"""Self-contained property battery behind the ``verify`` CLI command.

Each check returns (name, passed, detail); the battery is deliberately
independent of the test suite so a deployed install can be validated
without pytest.
"""
from __future__ import annotations

import math

import numpy as np

from . import complementary, hybrid
from .complementary import Gains
from .hybrid import HybridParams, HybridState, Mode
from .reference import build_reference_model, direction
from .scenario import Scenario, truth_state
from .so3 import exp_hat, hat, vee

PAPER_DIRS = [([-2.0, 5.0, 2.0], 1.211),
              ([10.0, -1.0, 0.0], 1.21),
              ([0.0, 1.0, -2.0], 1.209)]
ALPHA, BETA = 1.9, 0.899


def _model():
    return build_reference_model([direction(v, w) for v, w in PAPER_DIRS])


def _params(model):
    delta = 0.5 * hybrid.delta_upper_bound(model, ALPHA, BETA)
    return HybridParams(ALPHA, BETA, delta, Gains(1.0, 0.25))


def _random_rotation(rng):
    return exp_hat(rng.uniform(-np.pi, np.pi) * _unit(rng))


def _unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def check_hat_identities(n=1000, tol=1e-10, seed=0):
    """Cross-product commutator, conjugation and trace identities of hat."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        x, y = rng.normal(size=3), rng.normal(size=3)
        a = rng.normal(size=(3, 3))
        R = _random_rotation(rng)
        worst = max(
            worst,
            np.abs(hat(np.cross(x, y)) - (hat(x) @ hat(y) - hat(y) @ hat(x))).max(),
            np.abs(hat(np.cross(x, y)) - (np.outer(y, x) - np.outer(x, y))).max(),
            abs(np.trace(a @ hat(x)) - np.trace(hat(x) @ a)),
            abs(np.trace(a @ hat(x)) + x @ vee(a - a.T, tol=np.inf)),
            np.abs(R @ hat(x) @ R.T - hat(R @ x)).max(),
            np.abs(hat(x) @ a + a.T @ hat(x)
                   - hat((np.trace(a) * np.eye(3) - a) @ x)).max(),
            np.abs(R @ exp_hat(x) @ R.T - exp_hat(R @ x)).max(),
        )
    return "hat-map identities", worst <= tol, f"max residual {worst:.3e}"


def check_psi_equivalence(n=1000, tol=1e-10, seed=1):
    """Weighted-direction and eigenbasis forms of the error function agree."""
    model = _model()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        R, R_bar = _random_rotation(rng), _random_rotation(rng)
        B = R.T @ model.U
        worst = max(worst, abs(complementary.psi_value(B, R_bar, model)
                               - complementary.psi_direct(R, R_bar, model)))
    return "error-function equivalence", worst <= tol, f"max residual {worst:.3e}"


def check_jump_set_membership():
    """All 11 undesired tabulated points are in the jump set, the desired
    point in the flow set, at the default hysteresis gap."""
    model = _model()
    params = _params(model)
    R = truth_state(0.0, np.zeros(3)).R
    B = R.T @ model.U
    bad = []
    for mode, R_bar, label in hybrid.critical_points(model, R):
        st = HybridState(R_bar, np.zeros(3), mode)
        needed = hybrid.jump_needed(st, B, model, params)
        want = label != "desired"
        if needed != want:
            bad.append(f"{mode.name} {label}")
    return ("critical-point jump-set membership", not bad,
            "all 12 as expected" if not bad else f"wrong: {bad}")


def check_derivative_identity(n=100, rtol=1e-6, seed=2):
    """d/dt Psi_m along the flow matches -gamma_err . e_H - k_R ||e_H||^2."""
    model = _model()
    params = _params(model)
    rng = np.random.default_rng(seed)
    h = 1e-6
    worst = 0.0
    for mode in Mode:
        for _ in range(n):
            R = _random_rotation(rng)
            R_bar = _random_rotation(rng)
            omega = rng.normal(size=3)
            gamma = rng.normal(size=3) * 0.3
            gamma_bar = rng.normal(size=3) * 0.3
            st = HybridState(R_bar, gamma_bar, mode)
            B = R.T @ model.U
            e_h = hybrid.innovation_eH(st, B, model, params)
            om_bar = (omega + gamma - gamma_bar) + params.gains.k_R * e_h
            expected = -float((gamma - gamma_bar) @ e_h) \
                - params.gains.k_R * float(e_h @ e_h)

            def psi_at(s):
                Rs = R @ exp_hat(s * omega)
                Rbs = R_bar @ exp_hat(s * om_bar)
                return hybrid.psi_mode(mode, Rs.T @ model.U, Rbs, model, params)

            fd = (psi_at(h) - psi_at(-h)) / (2.0 * h)
            denom = max(abs(expected), 1e-12)
            worst = max(worst, abs(fd - expected) / denom)
    return ("flow derivative identity", worst <= rtol,
            f"max relative error {worst:.3e}")


def _case2_scenario(duration, h, integrator="cg2", observer="hybrid"):
    return Scenario(
        duration=duration, h=h,
        directions=[direction(v, w) for v, w in PAPER_DIRS],
        gains=Gains(1.0, 0.25), alpha=ALPHA, beta=BETA,
        gamma=np.array([0.1, -0.1, 0.2]),
        R_bar0_raw=np.array([[0.2527, -0.8907, -0.3779],
                             [0.6381, 0.4470, -0.6270],
                             [0.7273, -0.0827, -0.6813]]),
        gamma_bar0=np.array([0.0997, -0.1042, 0.2027]),
        observer=observer, integrator=integrator,
    )


def check_integrator_order(T=5.0, hs=(0.1, 0.05, 0.025), band=(1.7, 2.3)):
    """Observed global convergence order of the group integrator is ~2."""
    from .scenario import _frames  # shared frame synthesis

    def final_R(h):
        scn = _case2_scenario(T, h)
        model = scn.model
        params = scn.hybrid_params()
        frames = _frames(scn)
        from .integrators import StepInput, cg2_step
        from .so3 import project_rotation
        R_bar = project_rotation(scn.R_bar0_raw)
        g_bar = scn.gamma_bar0.copy()
        mode = Mode.I
        for k in range(len(frames) - 1):
            st = HybridState(R_bar, g_bar, mode)
            for _ in range(2):
                if not hybrid.jump_needed(st, frames[k].B, model, params):
                    break
                st = hybrid.apply_jump(st, frames[k].B, model, params)
            mode = st.mode

            def flow_fn(R, g, fr, m=mode):
                return hybrid.flow(HybridState(R, g, m), fr, model, params)

            R_bar, g_bar = cg2_step(R_bar, g_bar, flow_fn,
                                    StepInput(h, frames[k], frames[k + 1]))
        return R_bar

    ref = final_R(hs[-1] / 64.0)
    errs = [np.linalg.norm(final_R(h) - ref) for h in hs]
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)]
    ok = all(band[0] <= p <= band[1] for p in orders)
    return ("integrator order", ok,
            "observed orders " + ", ".join(f"{p:.3f}" for p in orders))


CHECKS = [check_hat_identities, check_psi_equivalence,
          check_jump_set_membership, check_derivative_identity,
          check_integrator_order]


def run_battery(print_fn=print) -> bool:
    """Run every check, print one line each; True iff all passed."""
    all_ok = True
    for check in CHECKS:
        name, ok, detail = check()
        all_ok = all_ok and ok
        print_fn(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
