"""Penalized particle objectives and the continuation driver.

The discretized problem places N uniformly weighted particles in the product
of the marginal supports and minimizes

    -sense * (rank-weighted risk of the cost values)
    + lambda * sum_j (per-marginal squared transport penalty),

where the penalty is the balanced squared Wasserstein distance in full mode
and the partial transport cost in partial mode (particle mass m/N).  The
penalty coefficient follows an increasing schedule, warm-starting each stage
from the previous solution.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .costs import CostDomainError, CostFunction
from .lbfgs import minimize_lbfgs
from .measures import Density1D
from .sdot import CellDecomposition, balanced_value_grad, partial_value_grad
from .spectral import Constant, CVaR, SpectralFunction, risk_value_and_weights

__all__ = [
    "ProblemSpec",
    "ParticleCloud",
    "Schedule",
    "RateModel",
    "ObjectiveDiagnostics",
    "IterationRecord",
    "StageTrace",
    "MinimizeResult",
    "tau_pd",
    "objective_value_grad",
    "init_cloud",
    "minimize",
    "marginal_penalties",
]


@dataclass
class ProblemSpec:
    """Marginals, cost, spectral weight and transport mode of one problem."""

    marginals: list[Density1D]
    cost: CostFunction
    spectral: SpectralFunction
    n_particles: int
    mode: str = "full"  # "full" | "partial"
    mass: float = 1.0   # transported mass in partial mode
    sense: int = 1      # +1 maximize the risk, -1 minimize the integral

    def __post_init__(self):
        if len(self.marginals) < 2:
            raise ValueError("need at least two marginals")
        if self.cost.dim is not None and self.cost.dim != len(self.marginals):
            raise ValueError("cost dimension does not match the number of marginals")
        if self.mode not in ("full", "partial"):
            raise ValueError("mode must be 'full' or 'partial'")
        if self.n_particles < 1:
            raise ValueError("need at least one particle")
        if self.sense not in (1, -1):
            raise ValueError("sense must be +1 or -1")
        if self.mode == "partial":
            if isinstance(self.spectral, CVaR):
                self.mass = self.spectral.m
            elif not isinstance(self.spectral, Constant):
                raise ValueError("partial mode supports only CVaR or constant weights")
            if not 0.0 < self.mass <= 1.0:
                raise ValueError("partial mode needs a mass in (0, 1]")

    @property
    def dim(self) -> int:
        return len(self.marginals)

    @property
    def mass_per_point(self) -> float:
        return (self.mass if self.mode == "partial" else 1.0) / self.n_particles


@dataclass
class ParticleCloud:
    """Positions of N particles in R^D with uniform weight per point."""

    positions: np.ndarray  # (N, D)
    mass_per_point: float
    seed: int | None = None

    def copy(self) -> "ParticleCloud":
        return ParticleCloud(self.positions.copy(), self.mass_per_point, self.seed)


def tau_pd(n: int, p: float, d: float) -> float:
    """Covering-based quantization rate proxy for an n-point uniform cloud."""
    if n < 2:
        raise ValueError("rate proxy needs n >= 2")
    if d == p:
        return (math.log(n)) ** (1.0 / d) * n ** (-1.0 / d)
    return n ** (-1.0 / max(p, d))


@dataclass
class RateModel:
    """Inputs for the theory-driven penalty rule lambda_N = u_N^-(p-beta)."""

    beta: float
    p: float = 2.0
    d: float | None = None     # box dimension input for the covering proxy
    proxy: str = "marginal"    # "marginal" (max quantizer error) or "covering"

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise ValueError("Hölder exponent must lie in (0, 1]")
        if self.proxy not in ("marginal", "covering"):
            raise ValueError("proxy must be 'marginal' or 'covering'")
        if self.proxy == "covering" and (self.d is None or self.d < 1.0):
            raise ValueError("covering proxy needs a dimension d >= 1")

    def u_n(self, n: int, marginals: list[Density1D] | None = None) -> float:
        if self.proxy == "covering":
            return tau_pd(n, self.p, self.d)
        if not marginals:
            raise ValueError("marginal proxy needs the marginals")
        from .oracles import quantize_1d

        return max(quantize_1d(rho, n).error for rho in marginals)

    def lambda_n(self, n: int, marginals: list[Density1D] | None = None) -> float:
        return self.u_n(n, marginals) ** -(self.p - self.beta)


@dataclass
class Schedule:
    """Increasing sequence of penalty coefficients."""

    lambdas: list[float]

    def __post_init__(self):
        lams = [float(v) for v in self.lambdas]
        if not lams:
            raise ValueError("schedule must not be empty")
        if any(v <= 0.0 for v in lams) or any(b <= a for a, b in zip(lams, lams[1:])):
            raise ValueError("schedule must be strictly increasing and positive")
        self.lambdas = lams

    @staticmethod
    def decades(k_min: int, k_max: int) -> "Schedule":
        if k_max < k_min:
            raise ValueError("k_max must be >= k_min")
        return Schedule([10.0**k for k in range(k_min, k_max + 1)])

    @staticmethod
    def from_rate_model(
        model: RateModel,
        n: int,
        marginals: list[Density1D] | None = None,
        rungs: int = 5,
    ) -> "Schedule":
        # The rule fixes the final coefficient; earlier rungs form a decade
        # ladder below it so the continuation still starts soft.
        lam = model.lambda_n(n, marginals)
        return Schedule([lam * 10.0 ** (k - rungs + 1) for k in range(rungs)])


@dataclass
class ObjectiveDiagnostics:
    risk_term: float
    penalties: list[float]
    omega: np.ndarray             # N * weight per particle (the rank channel)
    cost_values: np.ndarray
    cells: list[CellDecomposition]

    @property
    def penalty_total(self) -> float:
        return float(sum(self.penalties))


def _penalty_one(spec: ProblemSpec, lam_unused, y_col, j, kkt_tol, hint=None):
    rho = spec.marginals[j]
    if spec.mode == "partial":
        return partial_value_grad(rho, y_col, spec.mass, kkt_tol=kkt_tol, hint=hint)
    return balanced_value_grad(rho, y_col)


def objective_value_grad(
    spec: ProblemSpec,
    lam: float,
    cloud: ParticleCloud | np.ndarray,
    kkt_tol: float = 1e-9,
    threads: int = 1,
    hints: list[dict] | None = None,
):
    """Value, gradient and diagnostics of the penalized objective at a cloud.

    Returns (+inf, zero gradient, None) when a particle violates the cost
    domain, so line searches can backtrack into the feasible region.  hints,
    when given, holds one mutable dict per marginal reused as a warm-start
    seed by the partial transport solver; results do not depend on it.
    """
    if lam < 0.0:
        raise ValueError("penalty coefficient must be nonnegative")
    y = cloud.positions if isinstance(cloud, ParticleCloud) else np.asarray(cloud, dtype=float)
    if y.ndim != 2 or y.shape[1] != spec.dim:
        raise ValueError("cloud must be an (N, D) array matching the marginals")
    n = y.shape[0]

    try:
        c_vals = spec.cost.eval_many(y)
        cost_grads = spec.cost.grad_many(y)
    except CostDomainError:
        return np.inf, np.zeros_like(y), None

    if spec.mode == "partial":
        # mean over sorted values: exactly permutation-invariant
        risk = float(np.sort(c_vals).sum() / n)
        weights = np.full(n, 1.0 / n)
    else:
        risk, weights = risk_value_and_weights(spec.spectral, c_vals)

    if hints is None:
        hints = [None] * spec.dim
    if threads > 1 and spec.dim > 1:
        with ThreadPoolExecutor(max_workers=min(threads, spec.dim)) as pool:
            futures = [
                pool.submit(_penalty_one, spec, lam, y[:, j].copy(), j, kkt_tol, hints[j])
                for j in range(spec.dim)
            ]
            results = [f.result() for f in futures]
    else:
        results = [
            _penalty_one(spec, lam, y[:, j], j, kkt_tol, hints[j]) for j in range(spec.dim)
        ]

    penalties = [r[0] for r in results]
    grad = -spec.sense * weights[:, None] * cost_grads
    for j, (_, pgrad, _) in enumerate(results):
        grad[:, j] += lam * pgrad
    value = -spec.sense * risk + lam * float(sum(penalties))
    diag = ObjectiveDiagnostics(
        risk_term=risk,
        penalties=penalties,
        omega=n * weights,
        cost_values=c_vals,
        cells=[r[2] for r in results],
    )
    return value, grad, diag


def marginal_penalties(spec: ProblemSpec, cloud: ParticleCloud, kkt_tol: float = 1e-9):
    """Squared transport penalty and cells per marginal at a cloud."""
    y = cloud.positions
    out = [_penalty_one(spec, None, y[:, j], j, kkt_tol) for j in range(spec.dim)]
    return [v for v, _, _ in out], [c for _, _, c in out]


def init_cloud(spec: ProblemSpec, seed: int) -> ParticleCloud:
    """N i.i.d. points, uniform over the product of marginal supports.

    Uses the counter-based Philox generator so clouds are reproducible across
    platforms for a fixed seed.
    """
    rng = np.random.Generator(np.random.Philox(key=seed))
    y = np.empty((spec.n_particles, spec.dim))
    for j, rho in enumerate(spec.marginals):
        lo, hi = rho.support
        y[:, j] = rng.uniform(lo, hi, size=spec.n_particles)
    return ParticleCloud(y, spec.mass_per_point, seed)


@dataclass
class IterationRecord:
    iteration: int
    value: float
    grad_norm: float
    marginal_w2sq: list[float]


@dataclass
class StageTrace:
    lam: float
    iterations: list[IterationRecord]
    status: str
    value: float
    grad_norm: float
    risk_term: float
    marginal_w2sq: list[float]
    n_evals: int


@dataclass
class MinimizeResult:
    cloud: ParticleCloud
    trace: list[StageTrace]

    @property
    def final(self) -> StageTrace:
        return self.trace[-1]


def minimize(
    spec: ProblemSpec,
    schedule: Schedule,
    init: ParticleCloud,
    gtol_rel: float = 1e-8,
    max_iters: int = 2000,
    kkt_tol: float = 1e-9,
    threads: int = 1,
    rescue_seed: int = 0,
) -> MinimizeResult:
    """Continuation over the penalty schedule, warm-starting every stage.

    A line-search failure inside one stage is recorded and the continuation
    moves on with the best point found so far; only failure of every stage is
    an error.
    """
    n, d = init.positions.shape
    if n != spec.n_particles or d != spec.dim:
        raise ValueError("initial cloud does not match the problem size")
    rng = np.random.Generator(np.random.Philox(key=rescue_seed))
    trace: list[StageTrace] = []
    any_converged = False
    # The optimizer works in support-normalized coordinates (every marginal
    # support mapped to [0, 1]).  This is a pure reparameterization of the
    # same objective, but it removes the scale disparity between marginals
    # (the flood model mixes widths of 2500 and 2), and it makes the
    # gradient tolerance and the per-step displacement cap scale-free.
    lo_tiled = np.tile(np.array([rho.lo for rho in spec.marginals]), n)
    width_tiled = np.tile(np.array([rho.width for rho in spec.marginals]), n)
    x = (init.positions.ravel() - lo_tiled) / width_tiled
    max_step = 0.5

    hints: list[dict] = [{} for _ in range(d)]
    for lam in schedule.lambdas:
        last_diag: dict = {}

        def fun_grad(flat, _lam=lam):
            y = (lo_tiled + flat * width_tiled).reshape(n, d)
            value, grad, diag = objective_value_grad(
                spec, _lam, y, kkt_tol=kkt_tol, threads=threads, hints=hints
            )
            last_diag["value"] = value
            last_diag["diag"] = diag
            return value, grad.ravel() * width_tiled

        records: list[IterationRecord] = []

        def callback(it, xk, f, g):
            diag = last_diag.get("diag")
            w2 = diag.penalties if diag is not None and last_diag.get("value") == f else []
            records.append(
                IterationRecord(
                    iteration=it,
                    value=float(f),
                    grad_norm=float(np.max(np.abs(g))),
                    marginal_w2sq=[float(v) for v in w2],
                )
            )

        result = minimize_lbfgs(
            fun_grad,
            x,
            gtol_rel=gtol_rel,
            max_iters=max_iters,
            callback=callback,
            rng=rng,
            max_step=max_step,
        )
        x = result.x
        y_final = (lo_tiled + x * width_tiled).reshape(n, d)
        value, _, diag = objective_value_grad(spec, lam, y_final, kkt_tol=kkt_tol)
        trace.append(
            StageTrace(
                lam=lam,
                iterations=records,
                status=result.status,
                value=float(value),
                grad_norm=float(np.max(np.abs(result.grad))),
                risk_term=diag.risk_term,
                marginal_w2sq=[float(v) for v in diag.penalties],
                n_evals=result.n_evals,
            )
        )
        if result.status != "stalled" or result.iterations > 0:
            any_converged = True

    if not any_converged:
        raise RuntimeError("every continuation stage stalled without progress")
    cloud = ParticleCloud((lo_tiled + x * width_tiled).reshape(n, d), spec.mass_per_point, init.seed)
    return MinimizeResult(cloud=cloud, trace=trace)
