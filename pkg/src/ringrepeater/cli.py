"""Command-line surface: sweeps, simulations, optimization, resources.

Outputs are machine-readable (CSV with '.' decimals and LF endings, or
JSON) and fully reproducible: seeds default to a fixed constant and no
timestamps are embedded. Exit codes: 0 success, 2 usage error, 3 resource
bound exceeded, 1 other runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Optional

import numpy as np

from ringrepeater.analytics import (
    concat_fusion_distribution,
    ft_fusion_stats,
    pauli_meas_stats,
)
from ringrepeater.montecarlo import (
    TrialConfig,
    enumerate_small,
    simulate_logical_fusion,
    simulate_pauli_measurement,
)
from ringrepeater.optimizer import CSV_COLUMNS, SearchBounds, sweep
from ringrepeater.paulis import Pauli
from ringrepeater.rates import TimingParams
from ringrepeater.ringcodes import RingCodeSpec, generation_sequence, resource_counts

CONFIG_VERSION = 1
DEFAULT_SEED = 2024


class UsageError(ValueError):
    pass


def _out_path(path: Optional[str], default_name: str) -> Optional[str]:
    if path == "-":
        return None
    if path:
        return path
    outdir = os.environ.get("RINGREPEATER_OUTDIR")
    if outdir:
        return os.path.join(outdir, default_name)
    return None


def _write_rows(rows: list[dict], columns: list[str], path: Optional[str],
                fmt: str) -> None:
    if fmt == "json":
        text = json.dumps(rows, indent=2, sort_keys=True) + "\n"
    else:
        import io

        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in columns})
        text = buf.getvalue()
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser,
                  known: set[str]) -> argparse.Namespace:
    """Merge a versioned JSON config file; explicit CLI flags win."""
    if not getattr(args, "config", None):
        return args
    with open(args.config) as fh:
        payload = json.load(fh)
    version = payload.pop("version", CONFIG_VERSION)
    if version != CONFIG_VERSION:
        raise UsageError(f"unsupported config version {version}")
    unknown = set(payload) - known
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    given = {a.split("=")[0].lstrip("-").replace("-", "_")
             for a in sys.argv if a.startswith("--")}
    for key, value in payload.items():
        if key not in given:
            setattr(args, key, value)
    return args


def _eta_grid(args) -> np.ndarray:
    if args.eta_steps < 1:
        raise UsageError("need at least one eta step")
    if not (0 <= args.eta_min <= args.eta_max <= 1):
        raise UsageError("eta range must satisfy 0 <= min <= max <= 1")
    if args.eta_steps == 1:
        return np.array([args.eta_min])
    return np.linspace(args.eta_min, args.eta_max, args.eta_steps)


def cmd_fusion_success(args) -> int:
    rows = []
    for depth in range(1, args.depth + 1):
        for eta in _eta_grid(args):
            dist = concat_fusion_distribution(float(eta), depth + 1)
            rows.append(
                {
                    "depth": depth,
                    "eta": float(eta),
                    "loss": 1.0 - float(eta),
                    "p_success": dist.p_s,
                    "p_standard_fusion": float(eta) ** 2 / 2.0,
                }
            )
    columns = ["depth", "eta", "loss", "p_success", "p_standard_fusion"]
    _write_rows(rows, columns, _out_path(args.out, "fusion_success.csv"), args.format)
    return 0


def cmd_pauli_stats(args) -> int:
    rows = []
    for lam in args.lambda_grid:
        if not 0 <= lam <= 0.75:
            raise UsageError("lambda must lie in [0, 3/4]")
        for eta in _eta_grid(args):
            s = pauli_meas_stats(float(eta), float(lam), args.depth)
            rows.append(
                {
                    "depth": args.depth,
                    "eta": float(eta),
                    "lambda": float(lam),
                    "eta_bar": s.eta_bar,
                    "eps": s.eps,
                    "eps_d": s.eps_d,
                    "zeta": s.zeta,
                }
            )
    columns = ["depth", "eta", "lambda", "eta_bar", "eps", "eps_d", "zeta"]
    _write_rows(rows, columns, _out_path(args.out, "pauli_stats.csv"), args.format)
    return 0


def cmd_ft_fusion(args) -> int:
    if not 1 <= args.switch_layer <= args.depth:
        raise UsageError("switch layer must satisfy 1 <= switch <= depth")
    if args.depth > args.switch_layer and args.switch_layer < 2:
        raise UsageError("fuse-all layers need switch layer >= 2")
    rows = []
    for lam in args.lambda_grid:
        if not 0 <= lam <= 0.75:
            raise UsageError("lambda must lie in [0, 3/4]")
        for eta in _eta_grid(args):
            s = ft_fusion_stats(float(eta), float(lam), args.depth, args.switch_layer)
            rows.append(
                {
                    "depth": args.depth,
                    "switch_layer": args.switch_layer,
                    "eta": float(eta),
                    "lambda": float(lam),
                    "p_s": s.p_s,
                    "eps": s.eps,
                    "eps_cond": s.conditional_error,
                    "eps_d": s.eps_d,
                    "zeta": s.zeta,
                }
            )
    columns = ["depth", "switch_layer", "eta", "lambda", "p_s", "eps", "eps_cond",
               "eps_d", "zeta"]
    _write_rows(rows, columns, _out_path(args.out, "ft_fusion.csv"), args.format)
    return 0


def cmd_simulate(args) -> int:
    if args.trials < 1:
        raise UsageError("need at least one trial")
    spec = RingCodeSpec(4, args.depth, switch_layer=args.switch_layer)
    cfg = TrialConfig(spec, args.eta, getattr(args, "lam"), trials=args.trials,
                      seed=args.seed)
    threads = max(1, getattr(args, "threads", 1))
    if args.mode == "fusion":
        stats = simulate_logical_fusion(cfg, threads=threads)
        reference = {
            "p_success": concat_fusion_distribution(args.eta, args.depth + 1).p_s
        }
        sigma = stats.stderr("success")
        distances = {
            "p_success": (abs(stats.rate("success") - reference["p_success"]) / sigma
                          if sigma > 0 else 0.0)
        }
    else:
        stats = simulate_pauli_measurement(cfg, Pauli.X, threads=threads)
        ana = pauli_meas_stats(args.eta, getattr(args, "lam"), args.depth)
        transmitted = cfg.trials - stats.counts["loss"]
        reference = {"eta_bar": ana.eta_bar, "eps": ana.eps, "eps_d": ana.eps_d}
        distances = {}
        sigma_t = stats.stderr("loss")
        distances["eta_bar"] = (abs((1 - stats.rate("loss")) - ana.eta_bar) / sigma_t
                                if sigma_t > 0 else 0.0)
        for cls, key in (("error", "eps"), ("detected", "eps_d")):
            s = stats.stderr(cls, transmitted)
            distances[key] = (abs(stats.rate(cls, transmitted) - reference[key]) / s
                              if s > 0 else 0.0)
    payload = {
        "config": {
            "depth": args.depth,
            "switch_layer": spec.switch_layer,
            "eta": args.eta,
            "lambda": getattr(args, "lam"),
            "trials": args.trials,
            "seed": args.seed,
            "mode": args.mode,
        },
        "stats": json.loads(stats.to_json()),
        "analytic_reference": reference,
        "sigma_distance": distances,
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    path = _out_path(args.out, "simulate.json")
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
    return 0


def cmd_rates(args) -> int:
    timing = TimingParams(tau_gen=args.tau_gen, tau_cz=args.tau_cz, tau_m=args.tau_m)
    bounds = SearchBounds(N_max=args.n_max, L0_min=args.l0_min, m_max=args.m_max)
    results = sweep(args.L_grid, args.lambda_list, timing, bounds,
                    eta_d=args.eta_d, L_att=args.l_att)
    rows = [r.csv_row() for r in results]
    _write_rows(rows, CSV_COLUMNS, _out_path(args.out, "rates.csv"), args.format)
    return 0


def cmd_resources(args) -> int:
    spec = RingCodeSpec(args.n, args.depth)
    f_cz, f_m, f_p = resource_counts(spec)
    seq = generation_sequence(spec)
    payload = {
        "n": args.n,
        "depth": args.depth,
        "f_CZ": f_cz,
        "f_M": f_m,
        "f_P": f_p,
        "sequence": {
            "cz": seq.cz_count,
            "measure": seq.measure_count,
            "emit": seq.emit_count,
            "hadamard": seq.hadamard_count,
            "spins": seq.spins,
            "ops_total": len(seq.ops),
        },
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    path = _out_path(args.out, "resources.json")
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringrepeater",
        description="Concatenated ring-code repeater: analytics, simulation, optimization",
    )
    parser.add_argument("--threads", type=int, default=1,
                        help="worker cap for parallel modules (results are scheduling-independent)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="output path ('-' for stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--config", default=None, help="versioned JSON config file")

    p = sub.add_parser("fusion-success", help="logical fusion success vs loss")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--depth", type=int, default=5, help="max ring depth (rows for 1..depth)")
    p.add_argument("--eta-min", type=float, default=0.0)
    p.add_argument("--eta-max", type=float, default=1.0)
    p.add_argument("--eta-steps", type=int, default=100)
    common(p)
    p.set_defaults(func=cmd_fusion_success)

    p = sub.add_parser("pauli-stats", help="logical Pauli measurement statistics")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--eta-min", type=float, default=0.5)
    p.add_argument("--eta-max", type=float, default=1.0)
    p.add_argument("--eta-steps", type=int, default=51)
    p.add_argument("--lambda-grid", type=float, nargs="+", default=[0.0, 0.01, 0.05],
                   dest="lambda_grid")
    common(p)
    p.set_defaults(func=cmd_pauli_stats)

    p = sub.add_parser("ft-fusion", help="fault-tolerant fusion statistics")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--switch-layer", type=int, default=3)
    p.add_argument("--eta-min", type=float, default=0.7)
    p.add_argument("--eta-max", type=float, default=1.0)
    p.add_argument("--eta-steps", type=int, default=31)
    p.add_argument("--lambda-grid", type=float, nargs="+", default=[0.0, 0.005, 0.01],
                   dest="lambda_grid")
    common(p)
    p.set_defaults(func=cmd_ft_fusion)

    p = sub.add_parser("simulate", help="Monte Carlo with analytic reference")
    p.add_argument("--mode", choices=("fusion", "pauli"), default="fusion")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--switch-layer", type=int, default=None)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--lambda", type=float, default=0.0, dest="lam")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("rates", aliases=["optimize"],
                       help="optimized secret key rates vs distance")
    p.add_argument("--L-grid", type=float, nargs="+", required=True, dest="L_grid")
    p.add_argument("--lambda-list", type=float, nargs="+", default=[1e-3],
                   dest="lambda_list")
    p.add_argument("--tau-gen", type=float, default=1.0)
    p.add_argument("--tau-cz", type=float, default=10.0)
    p.add_argument("--tau-m", type=float, default=10.0)
    p.add_argument("--eta-d", type=float, default=0.95)
    p.add_argument("--l-att", type=float, default=20.0)
    p.add_argument("--n-max", type=int, default=7)
    p.add_argument("--l0-min", type=float, default=1.0)
    p.add_argument("--m-max", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("resources", help="emitter resource counts")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_resources, format="json")

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        known = {k for k in vars(args) if k not in ("func", "command", "config")}
        args = _apply_config(args, parser, known)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceWarning as exc:
        print(f"resource bound exceeded: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
