"""Experiment runner: builds problems from configs, runs them, writes artifacts.

Artifacts per solve run (all machine-readable, schemas documented in the
README): points.csv (particle coordinates, cost value, rank weight channel),
trace.jsonl (one record per continuation stage and iteration), metrics.json,
cells.json (final per-marginal tessellations) and marginals.json (sampled
marginal densities for plotting).
"""

from __future__ import annotations

import csv
import json
import time
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, build_problem, build_schedule
from .measures import density_from_config
from .oracles import fit_rate, quantize_1d, reference_value
from .presets import overlap_mass, preset_config
from .solver import (
    MinimizeResult,
    ParticleCloud,
    ProblemSpec,
    Schedule,
    init_cloud,
    marginal_penalties,
    minimize,
    objective_value_grad,
)

__all__ = ["prepare", "run_solve", "run_rates", "run_comonotone", "write_quantizer"]


def prepare(run: RunConfig) -> dict:
    """Expand presets and apply overrides; returns the effective config dict."""
    if run.preset is not None:
        expanded = preset_config(run)
    else:
        expanded = {"problem": run.problem, "schedule": {"decades": [-2, 2]}, "n": 1000}
    if run.schedule is not None:
        expanded["schedule"] = run.schedule
    if run.n is not None:
        expanded["n"] = run.n
    expanded.setdefault("n", 1000)
    return expanded


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_points_csv(path: Path, y: np.ndarray, cost_values: np.ndarray, omega: np.ndarray, axis_names):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)  # RFC-4180 line endings
        writer.writerow(["index", *axis_names, "cost", "omega"])
        for i in range(y.shape[0]):
            writer.writerow([i, *[_fmt(v) for v in y[i]], _fmt(cost_values[i]), _fmt(omega[i])])


def _write_trace_jsonl(path: Path, result: MinimizeResult):
    with open(path, "w") as fh:
        for stage in result.trace:
            for rec in stage.iterations:
                fh.write(
                    json.dumps(
                        {
                            "lambda": stage.lam,
                            "iteration": rec.iteration,
                            "value": rec.value,
                            "grad_norm": rec.grad_norm,
                            "marginal_w2sq": rec.marginal_w2sq,
                        }
                    )
                    + "\n"
                )
            fh.write(
                json.dumps(
                    {
                        "lambda": stage.lam,
                        "summary": True,
                        "value": stage.value,
                        "risk": stage.risk_term,
                        "grad_norm": stage.grad_norm,
                        "marginal_w2sq": stage.marginal_w2sq,
                        "iterations": len(stage.iterations),
                        "status": stage.status,
                    }
                )
                + "\n"
            )


def _write_cells_json(path: Path, spec: ProblemSpec, cloud: ParticleCloud, axis_names, kkt_tol):
    _, cells = marginal_penalties(spec, cloud, kkt_tol=kkt_tol)
    payload = {
        "mode": spec.mode,
        "mass": spec.mass if spec.mode == "partial" else 1.0,
        "marginals": [
            {"axis": j, "name": axis_names[j], "cells": cells[j].to_records()}
            for j in range(spec.dim)
        ],
    }
    path.write_text(json.dumps(payload, indent=1))


def _write_marginals_json(path: Path, spec: ProblemSpec, problem_cfg: dict, axis_names):
    records = []
    for j, rho in enumerate(spec.marginals):
        xs = np.linspace(rho.lo, rho.hi, 257)
        records.append(
            {
                "axis": j,
                "name": axis_names[j],
                "support": [rho.lo, rho.hi],
                "x": [float(v) for v in xs],
                "pdf": [float(v) for v in np.asarray(rho.pdf(xs))],
                "config": problem_cfg["marginals"][j],
            }
        )
    path.write_text(json.dumps({"marginals": records}, indent=1))


def _axis_names(expanded: dict, dim: int) -> list[str]:
    names = expanded.get("axis_names")
    if names and len(names) == dim:
        return list(names)
    return [f"x{j + 1}" for j in range(dim)]


def _preset_metrics(expanded: dict, run: RunConfig, spec: ProblemSpec, cloud: ParticleCloud, diag) -> dict:
    extras: dict = {}
    preset = run.preset
    y = cloud.positions
    if preset == "squared_sum":
        target = float(sum(rho.mean() for rho in spec.marginals))
        sums = y.sum(axis=1)
        extras["sum_of_means"] = target
        extras["plane_concentration"] = float(np.mean((sums - target) ** 2))
    elif preset == "river":
        flips = np.asarray(expanded["flips"], dtype=bool)
        ref = reference_value(spec.cost, spec.spectral, spec.marginals, flips)
        extras["reference_value"] = ref
        extras["relative_gap"] = abs(diag.risk_term - ref) / abs(ref)
        ranks_q = np.argsort(np.argsort(y[:, 0]))
        ranks_c = np.argsort(np.argsort(diag.cost_values))
        extras["rank_correlation_q_cost"] = float(np.corrcoef(ranks_q, ranks_c)[0, 1])
    elif preset == "partial_barycenter":
        extras["variant"] = expanded.get("variant")
        extras["overlap_mass"] = overlap_mass(spec.marginals[0], spec.marginals[1])
        extras["partial_cost_mean"] = float(np.mean(diag.cost_values))
        extras["marginal_w2max"] = [float(np.sqrt(v)) for v in diag.penalties]
    return extras


def run_solve(run: RunConfig, out_dir: str | Path) -> dict:
    expanded = prepare(run)
    if run.preset == "rates":
        raise ConfigError("$.preset", "use the 'rates' subcommand for the rate-study preset")
    n = expanded["n"]
    spec = build_problem(expanded["problem"], n)
    schedule = build_schedule(expanded["schedule"], n, spec.marginals)
    axis_names = _axis_names(expanded, spec.dim)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    t0 = time.perf_counter()
    init = init_cloud(spec, run.seed)
    result = minimize(
        spec,
        schedule,
        init,
        gtol_rel=run.gtol,
        max_iters=run.max_iters,
        kkt_tol=run.kkt_tol,
        threads=run.threads,
    )
    runtime = time.perf_counter() - t0

    cloud = result.cloud
    _, _, diag = objective_value_grad(
        spec, schedule.lambdas[-1], cloud, kkt_tol=run.kkt_tol
    )

    _write_points_csv(out / "points.csv", cloud.positions, diag.cost_values, diag.omega, axis_names)
    _write_trace_jsonl(out / "trace.jsonl", result)
    _write_cells_json(out / "cells.json", spec, cloud, axis_names, run.kkt_tol)
    _write_marginals_json(out / "marginals.json", spec, expanded["problem"], axis_names)

    metrics = {
        "preset": run.preset,
        "mode": spec.mode,
        "n": n,
        "seed": run.seed,
        "lambda_final": schedule.lambdas[-1],
        "risk_value": diag.risk_term,
        "reference_value": None,
        "marginal_w2sq": [float(v) for v in diag.penalties],
        "runtime_seconds": runtime,
        "stages": [
            {
                "lambda": st.lam,
                "value": st.value,
                "risk": st.risk_term,
                "iterations": len(st.iterations),
                "status": st.status,
            }
            for st in result.trace
        ],
    }
    metrics.update(_preset_metrics(expanded, run, spec, cloud, diag))
    (out / "metrics.json").write_text(json.dumps(metrics, indent=1))
    return metrics


def _theory_capped_schedule(schedule_cfg: dict, n: int, marginals) -> Schedule:
    """Decade ladder capped by the quantization-rate rung lam_N = h_N^-(p-beta)."""
    lam_n = max(quantize_1d(rho, n).error for rho in marginals) ** -1.0
    if "decades" in schedule_cfg:
        k_min, k_max = schedule_cfg["decades"]
        rungs = [10.0**k for k in range(int(k_min), int(k_max) + 1) if 10.0**k < lam_n]
    else:
        rungs = [v for v in schedule_cfg.get("lambdas", []) if v < lam_n]
    return Schedule(rungs + [lam_n])


def run_rates(run: RunConfig, out_dir: str | Path) -> dict:
    if run.preset != "rates":
        raise ConfigError("$.preset", "the rates runner needs preset 'rates'")
    expanded = prepare(run)
    opts = expanded["rates"]
    reference = float(opts["reference"])
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    rows = []
    mean_errors = []
    for n in opts["ns"]:
        spec = build_problem(expanded["problem"], n)
        if opts["theory_rung"]:
            schedule = _theory_capped_schedule(expanded["schedule"], n, spec.marginals)
        else:
            schedule = build_schedule(expanded["schedule"], n, spec.marginals)
        errs = []
        for seed in opts["seeds"]:
            result = minimize(
                spec,
                schedule,
                init_cloud(spec, seed),
                gtol_rel=run.gtol,
                max_iters=run.max_iters,
                kkt_tol=run.kkt_tol,
                threads=run.threads,
            )
            final = result.final
            errs.append(abs(final.risk_term - reference))
            rows.append(
                {
                    "N": n,
                    "lambda_final": schedule.lambdas[-1],
                    "risk_value": final.risk_term,
                    "reference": reference,
                    "abs_error": errs[-1],
                    "marginal_w2_max": float(np.sqrt(max(final.marginal_w2sq))),
                }
            )
        mean_errors.append(float(np.mean(errs)))

    with open(out / "rates.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["N", "lambda_final", "risk_value", "reference", "abs_error", "marginal_w2_max"])
        for row in rows:
            writer.writerow(
                [
                    row["N"],
                    _fmt(row["lambda_final"]),
                    _fmt(row["risk_value"]),
                    _fmt(row["reference"]),
                    _fmt(row["abs_error"]),
                    _fmt(row["marginal_w2_max"]),
                ]
            )

    fit = fit_rate(opts["ns"], mean_errors)
    metrics = {
        "preset": "rates",
        "ns": opts["ns"],
        "seeds": opts["seeds"],
        "mean_abs_errors": mean_errors,
        "slope": fit.slope,
        "r_squared": fit.r_squared,
        "reference": reference,
    }
    (out / "metrics.json").write_text(json.dumps(metrics, indent=1))
    return metrics


def run_comonotone(run: RunConfig, out_dir: str | Path) -> dict:
    """Quantized monotone coupling of the configured marginals plus reference value."""
    from .oracles import comonotone_points
    from .spectral import risk_value_and_weights

    expanded = prepare(run)
    n = expanded["n"]
    spec = build_problem(expanded["problem"], n)
    flips = expanded.get("flips")
    axis_names = _axis_names(expanded, spec.dim)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    cloud = comonotone_points(spec.marginals, n, flips=flips)
    c_vals = spec.cost.eval_many(cloud.positions)
    risk, weights = risk_value_and_weights(spec.spectral, c_vals)
    ref = reference_value(spec.cost, spec.spectral, spec.marginals, flips)
    _write_points_csv(out / "points.csv", cloud.positions, c_vals, n * weights, axis_names)
    metrics = {
        "preset": run.preset,
        "n": n,
        "risk_value": risk,
        "reference_value": ref,
        "flips": [bool(v) for v in (flips or [False] * spec.dim)],
    }
    (out / "metrics.json").write_text(json.dumps(metrics, indent=1))
    return metrics


def write_quantizer(density_cfg: dict, n: int, out_path: str | Path | None) -> dict:
    rho = density_from_config(density_cfg)
    q = quantize_1d(rho, n)
    payload = {
        "density": density_cfg,
        "n": n,
        "atoms": [float(v) for v in q.atoms],
        "error": q.error,
        "blocks": [[float(a), float(b)] for a, b in q.blocks],
    }
    if out_path is not None:
        Path(out_path).write_text(json.dumps(payload, indent=1))
    return payload
