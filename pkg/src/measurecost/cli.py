"""Command-line front end: sweeps, verification and one-off cost tables.

Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 property failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .energetics import REPORT_FIELDS, bound_general, cost_projective, faist_compare
from .instruments import apply_instrument, density_from_dict, instrument_from_dict, is_projective
from .linalg import projector
from .protocols.qec5 import gap_decomposition, logical_state, sweep
from .protocols.workext import workext_pair
from .protocols.zeno import ZenoConfig, zeno_device_crosscheck, zeno_run
from .reporting import format_value, render_qec5_figure, render_zeno_figure, unit_scale, write_csv
from .verify import run_property_suite

DEFAULT_SEED = 271828  # overridden by MEASURECOST_SEED, then by --seed

QEC5_FIELDS = ("gamma", "E_proj", "E_sep", "E_SU", "E_Lan", "fidelity", "I12", "I12_3", "I123_4")
ZENO_FIELDS = ("n", "eps_n", "step_cost", "cum_cost")


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("MEASURECOST_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ValueError(f"MEASURECOST_SEED must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


def _parse_gammas(spec: str) -> np.ndarray:
    try:
        start, stop, count = spec.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError as exc:
        raise ValueError(f"--gammas expects a:b:n, got {spec!r}") from exc
    if count < 1 or not (0.0 <= start <= 1.0 and 0.0 <= stop <= 1.0):
        raise ValueError(f"gamma grid {spec!r} outside [0, 1] or empty")
    return np.linspace(start, stop, count)


def _alphas(args) -> tuple[complex, complex]:
    return (
        complex(args.alpha0_re, args.alpha0_im),
        complex(args.alpha1_re, args.alpha1_im),
    )


def _qec5_chunk(payload) -> list:
    psi, gammas = payload
    return sweep(psi, gammas)


def cmd_qec5(args) -> int:
    psi = logical_state(*_alphas(args))
    gammas = _parse_gammas(args.gammas)
    if args.jobs > 1:
        chunks = [
            (psi, part) for part in np.array_split(gammas, min(args.jobs, len(gammas))) if len(part)
        ]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = [row for chunk in pool.map(_qec5_chunk, chunks) for row in chunk]
    else:
        rows = sweep(psi, gammas)

    scale = unit_scale(args.units)
    records = []
    for row in rows:
        gaps = gap_decomposition(row)
        records.append({
            "gamma": row.gamma,
            "E_proj": row.e_proj / scale,
            "E_sep": row.e_sep / scale,
            "E_SU": row.e_su / scale,
            "E_Lan": row.e_lan / scale,
            "fidelity": row.recovered_fidelity,
            "I12": gaps.i_12 / scale,
            "I12_3": gaps.i_12_3 / scale,
            "I123_4": gaps.i_123_4 / scale,
        })
    write_csv(args.out, QEC5_FIELDS, records)
    print(f"wrote {len(records)} rows to {args.out}")
    if args.svg:
        render_qec5_figure(rows, args.svg, args.units)
        print(f"wrote figure to {args.svg}")
    return 0


def cmd_zeno(args) -> int:
    cfg = ZenoConfig(theta_total=args.theta, steps=args.steps)
    result = zeno_run(cfg)
    scale = unit_scale(args.units)
    cum = np.cumsum(result.per_step_cost)
    records = [
        {
            "n": n + 1,
            "eps_n": result.errors[n],
            "step_cost": result.per_step_cost[n] / scale,
            "cum_cost": cum[n] / scale,
        }
        for n in range(cfg.steps)
    ]
    write_csv(args.out, ZENO_FIELDS, records)
    deviation = abs(result.total_cost - result.asymptotic_cost) / max(result.asymptotic_cost, 1e-300)
    print(f"wrote {cfg.steps} rows to {args.out}")
    print(
        f"total={format_value(result.total_cost / scale)} "
        f"asymptotic={format_value(result.asymptotic_cost / scale)} "
        f"relative_deviation={format_value(deviation)} "
        f"fidelity={format_value(result.fidelity)}"
    )
    if args.svg:
        render_zeno_figure(result, args.svg, args.units)
        print(f"wrote figure to {args.svg}")
    return 0


def cmd_workext(args) -> int:
    alpha0, alpha1 = _alphas(args)
    norm = abs(alpha0) ** 2 + abs(alpha1) ** 2
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"|alpha0|^2 + |alpha1|^2 = {norm!r}, expected 1")
    rho = projector(np.array([alpha0, alpha1]))
    pair = workext_pair(rho)
    scale = unit_scale(args.units)

    print(f"{'quantity':>14}  {'efficient':>16}  {'inefficient':>16}")
    for name in REPORT_FIELDS:
        eff, ineff = getattr(pair.efficient, name), getattr(pair.inefficient, name)
        if name not in ("E_proj_exact",):
            eff = None if eff is None else eff / scale
            ineff = None if ineff is None else ineff / scale
        print(f"{name:>14}  {format_value(eff):>16}  {format_value(ineff):>16}")
    return 0


def cmd_verify(args) -> int:
    checks = run_property_suite(_resolve_seed(args), include_broken_device=args.break_device)
    width = max(len(c.name) for c in checks)
    failures = 0
    for check in checks:
        status = "pass" if check.passed else "FAIL"
        failures += 0 if check.passed else 1
        print(f"{check.name:<{width}}  residual={check.residual:.3e}  tol={check.tolerance:.0e}  {status}")
    print(f"{len(checks) - failures}/{len(checks)} properties hold")
    return 0 if failures == 0 else 3


def cmd_faist(args) -> int:
    with open(args.instrument, encoding="utf-8") as handle:
        instr = instrument_from_dict(json.load(handle))
    with open(args.state, encoding="utf-8") as handle:
        rho = density_from_dict(json.load(handle))
    scale = unit_scale(args.units)
    comparison = faist_compare(instr, rho)
    rows = [("bound_general", bound_general(instr, rho))]
    if is_projective(instr):
        rows.insert(0, ("E_proj", cost_projective(instr, rho)))
    rows += [("faist_E0", comparison.e0), ("faist_iid", comparison.e_iid)]
    probs = apply_instrument(instr, rho).probs
    for name, value in rows:
        print(f"{name:>14}  {format_value(value / scale):>16}")
    print(f"{'p_k':>14}  {' '.join(format_value(p) for p in probs)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="measurecost",
        description="Energy cost of quantum measurements: sweeps, tables and verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, out_default=None):
        p.add_argument("--seed", type=int, default=None, help="master seed (default: MEASURECOST_SEED or built-in)")
        p.add_argument("--units", choices=("nats", "bits"), default="nats", help="energy unit for outputs")
        if out_default is not None:
            p.add_argument("--out", default=out_default, help="output CSV path")
            p.add_argument("--svg", default=None, help="optional figure path (.svg or any matplotlib format)")

    def add_alphas(p):
        p.add_argument("--alpha0-re", type=float, default=1.0)
        p.add_argument("--alpha0-im", type=float, default=0.0)
        p.add_argument("--alpha1-re", type=float, default=0.0)
        p.add_argument("--alpha1-im", type=float, default=0.0)

    p = sub.add_parser("qec5", help="five-qubit code syndrome-cost sweep over noise strength")
    add_common(p, out_default="qec5.csv")
    add_alphas(p)
    p.add_argument("--gammas", default="0:1:101", help="noise grid as a:b:n (default 0:1:101)")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for the sweep")
    p.set_defaults(func=cmd_qec5)

    p = sub.add_parser("zeno", help="stabilisation-by-measurement cost per step")
    add_common(p, out_default="zeno.csv")
    p.add_argument("--theta", type=float, default=1.0, help="total drive angle E*t/hbar")
    p.add_argument("--steps", type=int, default=1000, help="number of measurement steps")
    p.set_defaults(func=cmd_zeno)

    p = sub.add_parser("workext", help="energy reports of the efficient/inefficient device pair")
    add_common(p)
    add_alphas(p)
    p.set_defaults(func=cmd_workext)

    p = sub.add_parser("verify", help="run the seeded property suite")
    add_common(p)
    p.add_argument("--break-device", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("faist", help="single-shot / i.i.d. cost comparison for an instrument file")
    add_common(p)
    p.add_argument("instrument", help="instrument JSON path")
    p.add_argument("state", help="density-matrix JSON path")
    p.set_defaults(func=cmd_faist)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
