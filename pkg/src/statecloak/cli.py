"""Command-line front end.

Four subcommands cover the workflow end to end:

    design    solve for the critical noise probability and secrecy range
    sweep     tabulate long-run variances over a mu grid as CSV
    simulate  write one full trajectory as CSV
    verify    cross-check closed forms, chain oracle, and Monte Carlo

Exit codes are scriptable: 0 success, 2 bad config or usage, 3 infeasible
design, 4 output I/O failure, 5 verification failure. Every file-producing
command writes a `<output>.manifest.json` beside its output echoing the
exact config (seed override applied), tool version, duration, and paths,
so any artifact can be reproduced from its manifest alone.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
import time
from pathlib import Path

from . import __version__, analysis, montecarlo
from .config import ExperimentConfig, load_config, to_sim_config
from .errors import ConfigError, InfeasibleDesignError, ParameterError, TruncationError
from .estimators import noise_use_variance
from .model import open_loop_variance, riccati_fixed_point
from .montecarlo import SimConfig
from .secrecy import EncodingPolicy

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4
EXIT_VERIFY = 5


def _manifest(
    cfg: ExperimentConfig,
    command: str,
    seed_override: int | None,
    outputs: list[Path],
    duration: float,
) -> dict:
    raw = copy.deepcopy(cfg.raw)
    if seed_override is not None and "simulation" in raw:
        raw["simulation"]["master_seed"] = seed_override
    master_seed = None
    if cfg.simulation is not None:
        master_seed = cfg.simulation.master_seed if seed_override is None else seed_override
    return {
        "tool": "statecloak",
        "version": __version__,
        "command": command,
        "config_path": cfg.path,
        "config": raw,
        "master_seed": master_seed,
        "seed_override": seed_override,
        "duration_s": round(duration, 6),
        "outputs": [str(p) for p in outputs],
    }


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _write_manifest(out: Path, manifest: dict) -> Path:
    man_path = Path(str(out) + ".manifest.json")
    _write_text(man_path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return man_path


def cmd_design(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    sys_ = cfg.system
    p_bar = riccati_fixed_point(sys_)
    p_op = open_loop_variance(sys_)
    p_n = noise_use_variance(sys_)
    try:
        result = analysis.design_mu_op(sys_, cfg.channels.gamma_eaves)
    except InfeasibleDesignError as err:
        print(f"infeasible: {err}")
        return EXIT_INFEASIBLE

    print(f"p_bar = {p_bar!r}")
    print(f"p_op = {p_op!r}")
    print(f"p_n = {p_n!r}")
    print(f"mu_op = {result.mu_op!r}")
    print(f"range = ({result.mu_lo!r}, {result.mu_hi:g})")
    print(f"feasible = {'true' if result.feasible else 'false'}")

    if args.out is not None:
        started = time.perf_counter()
        payload = {
            "p_bar": p_bar,
            "p_op": p_op,
            "p_n": p_n,
            "mu_op": result.mu_op,
            "mu_lo": result.mu_lo,
            "mu_hi": result.mu_hi,
            "feasible": result.feasible,
        }
        out = Path(args.out)
        try:
            _write_text(out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
            _write_manifest(
                out, _manifest(cfg, "design", None, [out], time.perf_counter() - started)
            )
        except OSError as err:
            print(f"error: cannot write {out}: {err}", file=sys.stderr)
            return EXIT_IO

    if not result.feasible:
        print(f"infeasible: mu_op = {result.mu_op!r} lies outside [0, 1)")
        return EXIT_INFEASIBLE
    return EXIT_OK


def _sweep_carrier(cfg: ExperimentConfig, seed_override: int | None) -> SimConfig:
    """SimConfig for sweep_mu; placeholder budgets when nothing will simulate."""
    if cfg.policy is not None and cfg.simulation is not None:
        return to_sim_config(cfg, seed_override)
    return SimConfig(
        system=cfg.system,
        channels=cfg.channels,
        policy=EncodingPolicy(mu=0.0, seed=0),
        horizon=2,
        burn_in=0,
        trials=1,
        master_seed=0,
    )


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    if args.grid < 2:
        raise ConfigError(f"--grid must be at least 2, got {args.grid}")
    if args.mc and (cfg.policy is None or cfg.simulation is None):
        raise ConfigError(f"{cfg.path}: --mc needs [encoding] and [simulation] tables")
    sim_config = _sweep_carrier(cfg, args.seed)
    grid = [i / args.grid for i in range(args.grid)]

    started = time.perf_counter()
    rows = montecarlo.sweep_mu(sim_config, grid, with_mc=args.mc, workers=args.workers)

    header = "mu,expected_legit,expected_eaves,p_bar,p_op,p_n,mu_op"
    if args.mc:
        header += ",mc_legit,mc_legit_ci,mc_eaves,mc_eaves_ci"
    lines = [header]
    for row in rows:
        cells = [
            f"{row.mu:.12g}",
            f"{row.expected_legit:.12g}",
            f"{row.expected_eaves:.12g}",
            f"{row.p_bar:.12g}",
            f"{row.p_op:.12g}",
            f"{row.p_n:.12g}",
            f"{row.mu_op:.12g}",
        ]
        if args.mc:
            cells += [
                f"{row.mc_legit:.12g}",
                f"{row.mc_legit_ci:.12g}",
                f"{row.mc_eaves:.12g}",
                f"{row.mc_eaves_ci:.12g}",
            ]
        lines.append(",".join(cells))

    out = Path(args.out)
    try:
        _write_text(out, "\n".join(lines) + "\n")
        seed_override = args.seed if args.mc else None
        _write_manifest(
            out, _manifest(cfg, "sweep", seed_override, [out], time.perf_counter() - started)
        )
    except OSError as err:
        print(f"error: cannot write {out}: {err}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(rows)} rows to {out}")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    sim_config = to_sim_config(cfg, args.seed)

    started = time.perf_counter()
    rec = montecarlo.run_trial(sim_config, trial_index=0)

    lines = ["k,x,y,u,z,lambda,lambda_e,xhat_s,xhat,xhat_e,p,p_e,sqerr,sqerr_e"]
    for i in range(sim_config.horizon):
        lines.append(
            f"{rec.k[i]},{float(rec.x[i])!r},{float(rec.y[i])!r},{rec.u[i]},"
            f"{float(rec.z[i])!r},{rec.lambda_user[i]},{rec.lambda_eaves[i]},"
            f"{float(rec.x_hat_s[i])!r},{float(rec.x_hat[i])!r},{float(rec.x_hat_e[i])!r},"
            f"{float(rec.p[i])!r},{float(rec.p_e[i])!r},"
            f"{float(rec.sq_err_user[i])!r},{float(rec.sq_err_eaves[i])!r}"
        )

    out = Path(args.out)
    try:
        _write_text(out, "\n".join(lines) + "\n")
        _write_manifest(
            out, _manifest(cfg, "simulate", args.seed, [out], time.perf_counter() - started)
        )
    except OSError as err:
        print(f"error: cannot write {out}: {err}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {sim_config.horizon} steps to {out}")
    return EXIT_OK


def _depth_for_tail(ratio: float, states_per_step: int) -> int:
    """Truncation depth putting the geometric tail below 1e-11."""
    if ratio <= 0.0:
        return 200
    depth = states_per_step * (int(math.ceil(math.log(1e-11) / math.log(ratio))) + 1)
    return max(200, min(depth, 5_000_000))


class _Check:
    def __init__(self, name: str, a: float, b: float, tol: float):
        self.name = name
        self.a = a
        self.b = b
        self.tol = tol
        self.diff = abs(a - b)
        self.ok = self.diff <= tol

    def line(self) -> str:
        verdict = "ok  " if self.ok else "FAIL"
        return (
            f"{verdict} {self.name}: {self.a:.10g} vs {self.b:.10g} "
            f"(diff {self.diff:.3e}, tol {self.tol:.3e})"
        )


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    sim_config = to_sim_config(cfg, args.seed)
    sys_ = sim_config.system
    gamma_user = sim_config.channels.gamma_user
    gamma_eaves = sim_config.channels.gamma_eaves
    mu = sim_config.policy.mu
    t = args.tolerance

    # all closed forms go through the module attribute so a corrupted
    # formula (negative-control fixture) is caught, not bypassed
    closed_legit = analysis.expected_legit_variance(sys_, gamma_user, mu)
    closed_eaves = analysis.expected_eaves_variance(sys_, gamma_eaves, mu)

    checks: list[_Check] = []
    skips: list[str] = []

    if gamma_user == 1.0 or mu == 1.0:
        skips.append(
            "skip legit closed form vs chain oracle: boundary branch "
            "(no stationary chain when nothing is ever adopted)"
        )
    else:
        rho = gamma_user + (1.0 - gamma_user) * mu
        trunc = analysis.ChainTruncation(max_states=_depth_for_tail(rho, 1), tail_tol=1e-8)
        try:
            chain = analysis.chain_oracle_legit(sys_, gamma_user, mu, trunc)
            checks.append(
                _Check(
                    "legit closed form vs chain oracle",
                    closed_legit,
                    chain,
                    trunc.tail_bound + 1e-10,
                )
            )
        except TruncationError as err:
            skips.append(f"skip legit closed form vs chain oracle: {err}")

    if gamma_eaves == 1.0:
        skips.append(
            "skip eaves closed form vs chain oracle: boundary branch "
            "(eavesdropper never receives, already open loop)"
        )
    else:
        trunc_e = analysis.ChainTruncation(
            max_states=_depth_for_tail(gamma_eaves, 2), tail_tol=1e-8
        )
        try:
            chain_e = analysis.chain_oracle_eaves(sys_, gamma_eaves, mu, trunc_e)
            checks.append(
                _Check(
                    "eaves closed form vs chain oracle",
                    closed_eaves,
                    chain_e,
                    trunc_e.tail_bound + 1e-10,
                )
            )
        except TruncationError as err:
            skips.append(f"skip eaves closed form vs chain oracle: {err}")

    est = montecarlo.estimate_long_run(sim_config, workers=args.workers)
    checks.append(
        _Check(
            "legit closed form vs Monte Carlo",
            closed_legit,
            est.legit.mean,
            t * abs(closed_legit) + est.legit.ci_half_width,
        )
    )
    checks.append(
        _Check(
            "eaves closed form vs Monte Carlo",
            closed_eaves,
            est.eaves.mean,
            t * abs(closed_eaves) + est.eaves.ci_half_width,
        )
    )
    if sim_config.trials < 2:
        skips.append("skip variance recursion vs squared error: needs at least 2 trials for CIs")
    else:
        checks.append(
            _Check(
                "legit variance recursion vs squared error (CI overlap)",
                est.legit.mean,
                est.legit_sq_err.mean,
                est.legit.ci_half_width + est.legit_sq_err.ci_half_width,
            )
        )
        checks.append(
            _Check(
                "eaves variance recursion vs squared error (CI overlap)",
                est.eaves.mean,
                est.eaves_sq_err.mean,
                est.eaves.ci_half_width + est.eaves_sq_err.ci_half_width,
            )
        )

    for check in checks:
        print(check.line())
    for skip in skips:
        print(skip)

    failing = [c for c in checks if not c.ok]
    if failing:
        worst = max(failing, key=lambda c: c.diff / c.tol if c.tol > 0 else math.inf)
        print(f"verification FAILED; worst offender: {worst.name}")
        return EXIT_VERIFY
    print(f"all {len(checks)} checks passed")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="statecloak",
        description=(
            "Design and verify noise-injection transmission schedules for "
            "remote state estimation with an eavesdropper."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_design = sub.add_parser("design", help="solve for the critical noise probability")
    p_design.add_argument("config", help="TOML experiment config")
    p_design.add_argument("--out", default=None, help="optional JSON output path")
    p_design.set_defaults(func=cmd_design)

    p_sweep = sub.add_parser("sweep", help="tabulate long-run variances over a mu grid")
    p_sweep.add_argument("config", help="TOML experiment config")
    p_sweep.add_argument("--grid", type=int, default=99, help="grid size N; points i/N (default 99)")
    p_sweep.add_argument("--mc", action="store_true", help="add Monte Carlo columns")
    p_sweep.add_argument("--out", default="sweep.csv", help="CSV output path")
    p_sweep.add_argument("--seed", type=int, default=None, help="override master_seed")
    p_sweep.add_argument("--workers", type=int, default=1, help="parallel trial workers")
    p_sweep.set_defaults(func=cmd_sweep)

    p_sim = sub.add_parser("simulate", help="write one trajectory as CSV")
    p_sim.add_argument("config", help="TOML experiment config")
    p_sim.add_argument("--out", default="trajectory.csv", help="CSV output path")
    p_sim.add_argument("--seed", type=int, default=None, help="override master_seed")
    p_sim.set_defaults(func=cmd_simulate)

    p_verify = sub.add_parser(
        "verify", help="cross-check closed forms, chain oracle, and Monte Carlo"
    )
    p_verify.add_argument("config", help="TOML experiment config")
    p_verify.add_argument(
        "--tolerance", type=float, default=0.02, help="relative tolerance for MC comparisons"
    )
    p_verify.add_argument("--seed", type=int, default=None, help="override master_seed")
    p_verify.add_argument("--workers", type=int, default=1, help="parallel trial workers")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParameterError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleDesignError as err:
        print(f"infeasible: {err}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
