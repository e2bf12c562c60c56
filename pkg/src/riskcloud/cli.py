"""Command-line interface: config-driven experiment runs and oracle utilities."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, parse_config
from .presets import preset_descriptions
from .runner import run_comonotone, run_rates, run_solve, write_quantizer

__all__ = ["main"]


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError("$", f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")


def _load_run_config(args) -> tuple:
    cfg = _load_json(args.config)
    run = parse_config(cfg)
    if getattr(args, "seed", None) is not None:
        run.seed = args.seed
    if getattr(args, "threads", None) is not None:
        run.threads = args.threads
    if getattr(args, "kkt_tol", None) is not None:
        run.kkt_tol = args.kkt_tol
    if getattr(args, "gtol", None) is not None:
        run.gtol = args.gtol
    out = getattr(args, "out", None) or run.out or "out"
    return run, out


def _add_run_flags(parser):
    parser.add_argument("config", help="path to a JSON experiment config")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--threads", type=int, default=None, help="parallel penalty evaluation")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--kkt-tol", dest="kkt_tol", type=float, default=None,
                        help="mass-balance tolerance of the partial transport solver")
    parser.add_argument("--gtol", type=float, default=None,
                        help="relative gradient tolerance of the optimizer")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskcloud",
        description="Particle solver for worst-case spectral-risk couplings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run one experiment config")
    _add_run_flags(p_solve)

    p_rates = sub.add_parser("rates", help="run an N-sweep rate study")
    _add_run_flags(p_rates)

    p_quant = sub.add_parser("quantize", help="uniform quantizer of a density")
    p_quant.add_argument("density", help="path to a density JSON object")
    p_quant.add_argument("--n", type=int, required=True, help="number of atoms")
    p_quant.add_argument("--out", default=None, help="output JSON file (default: stdout)")

    p_como = sub.add_parser("comonotone", help="monotone-coupling cloud and reference value")
    _add_run_flags(p_como)
    p_como.add_argument("--n", type=int, default=None, help="override the point count")

    p_presets = sub.add_parser("presets", help="list available experiment presets")
    p_presets.add_argument("--json", action="store_true", help="machine-readable listing")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "presets":
            if args.json:
                print(json.dumps([{"name": n, "description": d} for n, d in preset_descriptions()], indent=1))
            else:
                for name, desc in preset_descriptions():
                    print(f"{name}: {desc}")
            return 0
        if args.command == "quantize":
            payload = write_quantizer(_load_json(args.density), args.n, args.out)
            if args.out is None:
                print(json.dumps(payload, indent=1))
            return 0
        if args.command == "solve":
            run, out = _load_run_config(args)
            metrics = run_solve(run, out)
            print(json.dumps({k: metrics[k] for k in ("risk_value", "marginal_w2sq")}, indent=1))
            print(f"artifacts written to {Path(out).resolve()}", file=sys.stderr)
            return 0
        if args.command == "rates":
            run, out = _load_run_config(args)
            metrics = run_rates(run, out)
            print(json.dumps({k: metrics[k] for k in ("slope", "mean_abs_errors")}, indent=1))
            return 0
        if args.command == "comonotone":
            run, out = _load_run_config(args)
            if args.n is not None:
                run.n = args.n
            metrics = run_comonotone(run, out)
            print(json.dumps(metrics, indent=1))
            return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # solver and IO failures: keep partial artifacts
        print(f"error: {exc}", file=sys.stderr)
        return 3
    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
