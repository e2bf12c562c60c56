"""Strict validation of experiment configs and construction of problem objects.

Configs are plain JSON objects; unknown keys are rejected and every error
message carries the JSON path of the offending entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .costs import CostFunction, cost_from_config
from .measures import Density1D, density_from_config
from .solver import ProblemSpec, RateModel, Schedule
from .spectral import SpectralFunction, spectral_from_config

__all__ = ["ConfigError", "RunConfig", "parse_config", "build_schedule"]


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


_TOP_KEYS = {
    "preset", "n", "seed", "out", "threads", "gtol", "kkt_tol", "max_iters",
    "problem", "schedule", "options",
}
_PROBLEM_KEYS = {"marginals", "cost", "spectral", "mode", "mass", "sense"}
_SCHEDULE_KEYS = {"decades", "lambdas", "rate_model"}
_RATE_MODEL_KEYS = {"beta", "p", "d", "proxy", "rungs"}

PRESET_NAMES = (
    "squared_sum",
    "partial_barycenter",
    "coulomb_cvar",
    "coulomb_quadratic",
    "river",
    "rates",
)


@dataclass
class RunConfig:
    preset: str | None
    n: int | None
    seed: int
    out: str | None
    threads: int
    gtol: float
    kkt_tol: float
    max_iters: int
    problem: dict | None
    schedule: dict | None
    options: dict = field(default_factory=dict)


def _expect(cond: bool, path: str, message: str):
    if not cond:
        raise ConfigError(path, message)


def _check_keys(obj: dict, allowed: set, path: str):
    unknown = set(obj) - allowed
    _expect(not unknown, path, f"unknown keys {sorted(unknown)}; allowed: {sorted(allowed)}")


def _number(obj, path, lo=None, hi=None):
    _expect(isinstance(obj, (int, float)) and not isinstance(obj, bool), path, "must be a number")
    if lo is not None:
        _expect(obj >= lo, path, f"must be >= {lo}")
    if hi is not None:
        _expect(obj <= hi, path, f"must be <= {hi}")
    return float(obj)


def _integer(obj, path, lo=None):
    _expect(isinstance(obj, int) and not isinstance(obj, bool), path, "must be an integer")
    if lo is not None:
        _expect(obj >= lo, path, f"must be >= {lo}")
    return int(obj)


def parse_config(cfg: dict) -> RunConfig:
    _expect(isinstance(cfg, dict), "$", "config must be a JSON object")
    _check_keys(cfg, _TOP_KEYS, "$")

    preset = cfg.get("preset")
    if preset is not None:
        _expect(isinstance(preset, str), "$.preset", "must be a string")
        _expect(preset in PRESET_NAMES, "$.preset", f"must be one of {list(PRESET_NAMES)}")
    problem = cfg.get("problem")
    _expect(
        (preset is None) != (problem is None),
        "$",
        "provide exactly one of 'preset' or 'problem'",
    )
    if problem is not None:
        _expect(isinstance(problem, dict), "$.problem", "must be an object")
        _check_keys(problem, _PROBLEM_KEYS, "$.problem")
        for key in ("marginals", "cost", "spectral"):
            _expect(key in problem, "$.problem", f"missing required key {key!r}")
        _expect(
            isinstance(problem["marginals"], list) and len(problem["marginals"]) >= 2,
            "$.problem.marginals",
            "must be a list of at least two densities",
        )
        mode = problem.get("mode", "full")
        _expect(mode in ("full", "partial"), "$.problem.mode", "must be 'full' or 'partial'")
        sense = problem.get("sense", "maximize")
        _expect(sense in ("maximize", "minimize"), "$.problem.sense", "must be 'maximize' or 'minimize'")
        if "mass" in problem:
            _number(problem["mass"], "$.problem.mass", lo=0.0, hi=1.0)

    schedule = cfg.get("schedule")
    if schedule is not None:
        _validate_schedule(schedule)

    options = cfg.get("options", {})
    _expect(isinstance(options, dict), "$.options", "must be an object")

    n = cfg.get("n")
    if n is not None:
        n = _integer(n, "$.n", lo=1)
    seed = _integer(cfg.get("seed", 0), "$.seed", lo=0)
    threads = _integer(cfg.get("threads", 1), "$.threads", lo=1)
    gtol = _number(cfg.get("gtol", 1e-8), "$.gtol", lo=0.0)
    kkt_tol = _number(cfg.get("kkt_tol", 1e-9), "$.kkt_tol", lo=0.0)
    max_iters = _integer(cfg.get("max_iters", 2000), "$.max_iters", lo=1)
    out = cfg.get("out")
    if out is not None:
        _expect(isinstance(out, str), "$.out", "must be a string path")

    return RunConfig(
        preset=preset,
        n=n,
        seed=seed,
        out=out,
        threads=threads,
        gtol=gtol,
        kkt_tol=kkt_tol,
        max_iters=max_iters,
        problem=problem,
        schedule=schedule,
        options=dict(options),
    )


def _validate_schedule(schedule, path="$.schedule"):
    _expect(isinstance(schedule, dict), path, "must be an object")
    _check_keys(schedule, _SCHEDULE_KEYS, path)
    given = [k for k in _SCHEDULE_KEYS if k in schedule]
    _expect(len(given) == 1, path, "provide exactly one of 'decades', 'lambdas', 'rate_model'")
    if "decades" in schedule:
        dec = schedule["decades"]
        _expect(
            isinstance(dec, list) and len(dec) == 2,
            f"{path}.decades",
            "must be [k_min, k_max]",
        )
        _integer(dec[0], f"{path}.decades[0]")
        _integer(dec[1], f"{path}.decades[1]")
        _expect(dec[1] >= dec[0], f"{path}.decades", "k_max must be >= k_min")
    elif "lambdas" in schedule:
        lams = schedule["lambdas"]
        _expect(isinstance(lams, list) and lams, f"{path}.lambdas", "must be a nonempty list")
        for i, v in enumerate(lams):
            _number(v, f"{path}.lambdas[{i}]", lo=0.0)
    else:
        rm = schedule["rate_model"]
        _expect(isinstance(rm, dict), f"{path}.rate_model", "must be an object")
        _check_keys(rm, _RATE_MODEL_KEYS, f"{path}.rate_model")
        _expect("beta" in rm, f"{path}.rate_model", "missing required key 'beta'")
        _number(rm["beta"], f"{path}.rate_model.beta", lo=0.0, hi=1.0)
        if "proxy" in rm:
            _expect(
                rm["proxy"] in ("marginal", "covering"),
                f"{path}.rate_model.proxy",
                "must be 'marginal' or 'covering'",
            )


def build_problem(problem_cfg: dict, n: int) -> ProblemSpec:
    marginals = [density_from_config(m) for m in problem_cfg["marginals"]]
    cost = cost_from_config(problem_cfg["cost"])
    spectral = spectral_from_config(problem_cfg["spectral"])
    return ProblemSpec(
        marginals=marginals,
        cost=cost,
        spectral=spectral,
        n_particles=n,
        mode=problem_cfg.get("mode", "full"),
        mass=float(problem_cfg.get("mass", 1.0)),
        sense=1 if problem_cfg.get("sense", "maximize") == "maximize" else -1,
    )


def build_schedule(schedule_cfg: dict, n: int, marginals: list[Density1D]) -> Schedule:
    if "decades" in schedule_cfg:
        k_min, k_max = schedule_cfg["decades"]
        return Schedule.decades(int(k_min), int(k_max))
    if "lambdas" in schedule_cfg:
        return Schedule([float(v) for v in schedule_cfg["lambdas"]])
    rm_cfg = schedule_cfg["rate_model"]
    model = RateModel(
        beta=float(rm_cfg["beta"]),
        p=float(rm_cfg.get("p", 2.0)),
        d=rm_cfg.get("d"),
        proxy=rm_cfg.get("proxy", "marginal"),
    )
    return Schedule.from_rate_model(model, n, marginals, rungs=int(rm_cfg.get("rungs", 5)))
