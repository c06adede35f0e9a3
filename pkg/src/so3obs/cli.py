"""Command-line interface: simulation, comparisons, verification.

Exit codes: 0 success, 1 invalid scenario or parameters, 2 IO failure,
3 verification failure. Each command ends with one machine-readable
``key=value`` summary line for scripting.
"""
from __future__ import annotations

import argparse
import sys
from importlib import resources

import numpy as np

from .errors import So3ObsError, ScenarioError
from .hybrid import delta_upper_bound
from .scenario import (Scenario, _frames, load_scenario, run, switch_times,
                       write_csv)
from .verify import run_battery


def _load(path: str) -> Scenario:
    try:
        return load_scenario(path)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(1)


def _write(records, path: str) -> None:
    try:
        write_csv(records, path)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(2)


def _run(scn: Scenario, frames=None):
    try:
        return run(scn, frames)
    except So3ObsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(1)


def _summarize(records, label: str) -> str:
    final = records[-1]
    jumps = sum(r.jump_flag for r in records)
    switches = switch_times(records)
    parts = [f"label={label}",
             f"rows={len(records)}",
             f"final_att_err={final.att_err:.6g}",
             f"final_gamma_err={np.linalg.norm(final.gamma_err):.6g}",
             f"jump_count={jumps}"]
    if switches:
        parts.append("switch_times=" +
                     ";".join(f"{t:.6g}:{a}->{b}" for t, a, b in switches))
    return " ".join(parts)


def cmd_simulate(args) -> int:
    scn = _load(args.scenario)
    records = _run(scn)
    _write(records, args.out)
    switches = switch_times(records)
    print(f"simulated {scn.observer} observer ({scn.integrator}), "
          f"{records[-1].t:g} s at h = {scn.h:g} s -> {args.out}")
    print(f"  final attitude error {records[-1].att_err:.4g}, "
          f"final bias error {np.linalg.norm(records[-1].gamma_err):.4g}")
    if switches:
        pretty = ", ".join(f"{a}->{b} at t={t:g} s" for t, a, b in switches)
        print(f"  mode switches: {pretty}")
    if scn.observer == "hybrid" and scn.delta is None:
        bound = delta_upper_bound(scn.model, scn.alpha, scn.beta)
        print(f"  hysteresis gap defaulted to {0.5 * bound:.6g} "
              f"(half the admissible bound {bound:.6g})")
    print("summary " + _summarize(records, scn.observer))
    return 0


def cmd_compare_observers(args) -> int:
    scn = _load(args.scenario)
    frames = _frames(scn)
    for kind in ("hybrid", "complementary"):
        variant = _load(args.scenario)
        variant.observer = kind
        records = _run(variant, frames)
        path = f"{args.out_prefix}_{kind}.csv"
        _write(records, path)
        print(f"{kind}: {path}")
        print("summary " + _summarize(records, kind))
    return 0


def cmd_compare_integrators(args) -> int:
    scn = _load(args.scenario)
    frames = _frames(scn)
    for kind in ("cg2", "naive_rk4"):
        variant = _load(args.scenario)
        variant.integrator = kind
        records = _run(variant, frames)
        path = f"{args.out_prefix}_{kind}.csv"
        _write(records, path)
        print(f"{kind}: {path} "
              f"(final orthogonality defect {records[-1].ortho_defect:.4g})")
        print("summary " + _summarize(records, kind))
    return 0


def cmd_verify(args) -> int:
    ok = run_battery()
    print(f"summary verify={'pass' if ok else 'fail'}")
    return 0 if ok else 3


def cmd_print_model(args) -> int:
    scn = _load(args.scenario)
    m = scn.model
    np.set_printoptions(precision=10, suppress=False)
    print("reference directions (inertial, unit) and weights:")
    for d in m.directions:
        print(f"  {d.v_inertial}  weight {d.weight:g}")
    print(f"K =\n{m.K}")
    print(f"eigenvalues (descending): {m.lambdas}")
    print(f"U =\n{m.U}")
    bound = delta_upper_bound(m, scn.alpha, scn.beta)
    print(f"delta bound for alpha={scn.alpha:g}, beta={scn.beta:g}: {bound:.10g}")
    print(f"summary lambda1={m.lambdas[0]:.10g} lambda2={m.lambdas[1]:.10g} "
          f"lambda3={m.lambdas[2]:.10g} delta_bound={bound:.10g}")
    return 0


def shipped_scenario(name: str) -> str:
    """Filesystem path of a scenario bundled with the package."""
    return str(resources.files("so3obs").joinpath(f"scenarios/{name}.scn"))


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="so3obs",
        description="Hybrid attitude observer simulations on the rotation group")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one scenario, write a CSV")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("compare-observers",
                       help="run hybrid and smooth observers on one "
                            "measurement stream")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(fn=cmd_compare_observers)

    p = sub.add_parser("compare-integrators",
                       help="run group-preserving and naive integrators")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(fn=cmd_compare_integrators)

    p = sub.add_parser("verify", help="run the property battery")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("print-model",
                       help="show the reference model of a scenario")
    p.add_argument("--scenario", required=True)
    p.set_defaults(fn=cmd_print_model)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
