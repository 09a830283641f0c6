"""Command line interface.

Subcommands:

* ``run SPECFILE``      - execute a sweep experiment and write CSV.
* ``single``            - one channel realization, full allocation report.
* ``selftest``          - optimizer-versus-reference property checks.

Exit codes: 0 on success, 1 on validation errors, 2 when the optimizer
failed to converge on more than the allowed fraction of trials (or a
selftest check failed).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from ehrelay.auglag import ReducedProblem, optimize
from ehrelay.channel import Scenario, effective_subchannels, generate, scenario_from_file
from ehrelay.experiment import (
    SOLVER_ORDER,
    emit_csv,
    run,
    run_trial,
    spec_from_file,
    trial_rng,
)
from ehrelay.system import (
    achievable_rate,
    benchmark_allocation,
    optimal_energy_plan,
    snr_coefficients,
)
from ehrelay.waterfill import solve as oracle_solve

MAX_NONCONVERGED_FRACTION = 0.05


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "single":
            return _cmd_single(args)
        if args.command == "selftest":
            return _cmd_selftest(args)
        parser.print_help()
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ehrelay",
        description="Monte Carlo rate experiments for a wireless-powered MIMO-OFDM relay.",
    )
    sub = parser.add_subparsers(dest="command")

    p_run = sub.add_parser("run", help="run a sweep experiment from a spec file")
    p_run.add_argument("spec_file", help="key=value experiment spec file")
    p_run.add_argument("--output", help="CSV output path (overrides the spec file)")

    p_single = sub.add_parser("single", help="solve a single channel realization")
    p_single.add_argument("--scenario-file", help="key=value scenario file")
    p_single.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p_single.add_argument(
        "--solvers",
        default="alpf,oracle,benchmark",
        help="comma-separated subset of alpf,oracle,benchmark",
    )

    p_self = sub.add_parser("selftest", help="run optimizer-vs-reference property checks")
    p_self.add_argument("--trials", type=int, default=12, help="number of random instances")
    p_self.add_argument("--seed", type=int, default=2024, help="master seed")
    return parser


def _cmd_run(args) -> int:
    spec = spec_from_file(args.spec_file)
    output = args.output or spec.output_path
    if output is None:
        raise ValueError("no output path: pass --output or set output_path in the spec file")
    result = run(spec)
    emit_csv(result, output)
    print(f"wrote {len(result.rows)} rows to {output}")

    if "alpf" in spec.solvers:
        fractions = [row.convergence_fraction for row in result.rows_for("alpf")]
        worst = min(fractions)
        if 1.0 - worst > MAX_NONCONVERGED_FRACTION:
            print(
                f"warning: optimizer convergence fraction {worst:.3f} below "
                f"{1.0 - MAX_NONCONVERGED_FRACTION:.2f}",
                file=sys.stderr,
            )
            return 2
    return 0


def _cmd_single(args) -> int:
    scenario = scenario_from_file(args.scenario_file) if args.scenario_file else Scenario()
    if args.seed is not None:
        from dataclasses import replace

        scenario = replace(scenario, seed=args.seed)
    solvers = tuple(s.strip() for s in args.solvers.split(",") if s.strip())
    for s in solvers:
        if s not in SOLVER_ORDER:
            raise ValueError(f"unknown solver '{s}'")

    real = generate(scenario)
    eff = effective_subchannels(real)
    plan = optimal_energy_plan(real, scenario)
    a, b = snr_coefficients(eff.gains1, eff.gains2, plan, scenario)
    problem = ReducedProblem(a, b, scenario.bandwidth_hz, scenario.k_subcarriers)

    print(f"scenario: {scenario}")
    print(f"energy beam subcarrier: {plan.chosen_subcarrier}, harvest gain {plan.harvest_coeff!r}")
    print(f"sorted hop-1 gains: {np.array2string(eff.gains1, precision=6)}")
    print(f"sorted hop-2 gains: {np.array2string(eff.gains2, precision=6)}")

    if "benchmark" in solvers:
        alloc = benchmark_allocation(eff.gains1, eff.gains2)
        rate = achievable_rate(alloc, eff.gains1, eff.gains2, plan, scenario)
        print(f"\nbenchmark rate: {rate!r} bit/s (alpha = 0.5)")
    if "oracle" in solvers:
        sol = oracle_solve(problem)
        print(f"\noracle rate: {sol.rate_star!r} bit/s at alpha = {sol.alpha_star!r}")
        print(f"oracle mu: {np.array2string(sol.mu_star, precision=6)}")
        print(f"oracle mu_bar: {np.array2string(sol.mu_bar_star, precision=6)}")
    if "alpf" in solvers:
        res = optimize(problem)
        print(f"\noptimizer rate: {res.rate_bps!r} bit/s")
        print(f"optimizer mu: {np.array2string(res.allocation.mu, precision=6)}")
        print(f"optimizer mu_bar: {np.array2string(res.allocation.mu_bar, precision=6)}")
        print(res.report_text())
        if not res.converged:
            return 2
    return 0


def _cmd_selftest(args) -> int:
    rng = np.random.default_rng(args.seed)
    failures = []
    for i in range(args.trials):
        scenario = Scenario(
            n_s=int(rng.integers(1, 4)),
            n_r=int(rng.integers(1, 4)),
            n_d=int(rng.integers(1, 4)),
            k_subcarriers=int(rng.integers(1, 3)),
            p_source=float(rng.choice([0.1, 1.0, 10.0])),
            phi=float(rng.uniform(0.15, 0.85)),
            seed=int(rng.integers(0, 2**31)),
        )
        outcome = run_trial(scenario, trial_rng(args.seed, 0, i), ("alpf", "oracle", "benchmark"))
        alpf, oracle, bench = outcome["alpf"], outcome["oracle"], outcome["benchmark"]

        checks = {
            "converged": alpf.converged,
            "rate>=benchmark": alpf.rate_bps >= bench.rate_bps - 1e-9,
            "oracle>=rate-1%": oracle.rate_bps >= alpf.rate_bps * (1.0 - 0.01) - 1e-9,
            "rate-within-1%-of-oracle": abs(alpf.rate_bps - oracle.rate_bps)
            <= 0.01 * max(oracle.rate_bps, 1e-12),
        }
        bad = [name for name, ok in checks.items() if not ok]
        status = "PASS" if not bad else "FAIL(" + ",".join(bad) + ")"
        print(
            f"[{i + 1:02d}/{args.trials}] {status} "
            f"K={scenario.k_subcarriers} N={scenario.n_streams} "
            f"P={scenario.p_source} phi={scenario.phi:.2f} "
            f"alpf={alpf.rate_bps:.6g} oracle={oracle.rate_bps:.6g} bench={bench.rate_bps:.6g}"
        )
        if bad:
            failures.append((i, bad))
    if failures:
        print(f"selftest FAILED on {len(failures)}/{args.trials} instances")
        return 2
    print(f"selftest passed on all {args.trials} instances")
    return 0


if __name__ == "__main__":
    sys.exit(main())
