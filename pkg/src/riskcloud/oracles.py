"""Independent ground-truth constructions used to verify the solvers.

Nothing here shares code paths with the objects it checks: reference values
come from quadrature over quantile functions, transport values from an
integer min-cost flow on a fine discretization, and small coupling problems
from exhaustive permutation search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .costs import CostFunction
from .measures import Density1D
from .minflow import min_cost_partial_assignment
from .solver import ParticleCloud
from .spectral import CVaR, PiecewiseConstant, SpectralFunction, risk_value_and_weights

__all__ = [
    "QuantizerResult",
    "RateFit",
    "comonotone_points",
    "reference_value",
    "quantize_1d",
    "restriction_quantization",
    "block_approximation_cost",
    "brute_force_mmot",
    "flow_partial_ot_oracle",
    "fit_rate",
]


@dataclass
class QuantizerResult:
    """Uniform N-point quantizer of a density: atoms, error, block edges."""

    atoms: np.ndarray
    error: float
    edges: np.ndarray

    @property
    def blocks(self) -> list[tuple[float, float]]:
        return [(float(a), float(b)) for a, b in zip(self.edges[:-1], self.edges[1:])]


@dataclass
class RateFit:
    ns: np.ndarray
    errors: np.ndarray
    slope: float
    intercept: float
    r_squared: float


def comonotone_points(
    marginals: list[Density1D],
    n: int,
    flips=None,
    placement: str = "midpoint",
) -> ParticleCloud:
    """Uniform quantization of the comonotone coupling of the marginals.

    Coordinate j of point i is the (i - 1/2)/n quantile of marginal j, or
    the reversed quantile t -> F^-1(1-t) on flipped axes.  With
    placement="barycenter" the per-axis quantizer atoms (block barycenters)
    are used instead of midpoint quantiles.
    """
    if n < 1:
        raise ValueError("need at least one point")
    d = len(marginals)
    flips = np.zeros(d, dtype=bool) if flips is None else np.asarray(flips, dtype=bool)
    t = (np.arange(n) + 0.5) / n
    y = np.empty((n, d))
    for j, rho in enumerate(marginals):
        if placement == "barycenter":
            coords = quantize_1d(rho, n).atoms
        elif placement == "midpoint":
            coords = rho.quantile_grid(t)
        else:
            raise ValueError("placement must be 'midpoint' or 'barycenter'")
        y[:, j] = coords[::-1] if flips[j] else coords
    return ParticleCloud(y, 1.0 / n, None)


def _alpha_breakpoints(alpha: SpectralFunction) -> list[float]:
    if isinstance(alpha, CVaR):
        return [1.0 - alpha.m] if 0.0 < 1.0 - alpha.m < 1.0 else []
    if isinstance(alpha, PiecewiseConstant):
        return [float(b) for b in alpha.breakpoints[1:-1]]
    return []


def reference_value(
    cost: CostFunction,
    alpha: SpectralFunction,
    marginals: list[Density1D],
    flips=None,
) -> float:
    """Risk of the monotone coupling: integral of c(quantiles(t)) * alpha(t).

    Exact optimum when the cost is supermodular (after the given sign flips)
    and monotone; used as the reference for the recovery experiments.
    """
    d = len(marginals)
    flips = np.zeros(d, dtype=bool) if flips is None else np.asarray(flips, dtype=bool)

    def integrand(t: float) -> float:
        tt = min(max(t, 1e-15), 1.0 - 1e-15)
        x = np.array(
            [
                rho.quantile_grid(1.0 - tt if flips[j] else tt)
                for j, rho in enumerate(marginals)
            ]
        )
        return float(cost(x)) * float(alpha(tt))

    pts = _alpha_breakpoints(alpha)
    val, err = quad(integrand, 0.0, 1.0, points=pts or None, limit=400, epsabs=1e-10, epsrel=1e-12)
    if not np.isfinite(val) or err > 1e-6 * max(1.0, abs(val)):
        raise RuntimeError(f"reference quadrature did not converge (error estimate {err:.2e})")
    return val


def quantize_1d(rho: Density1D, n: int) -> QuantizerResult:
    """Optimal uniform n-point quantizer for the quadratic cost.

    Blocks are the quantile intervals; atoms sit at block barycenters, which
    is optimal given that monotone transport forces quantile blocks.
    """
    if n < 1:
        raise ValueError("need at least one atom")
    grid = np.arange(n + 1, dtype=float) / n
    edges = rho.quantile_grid(grid)
    _, bary, inertia = rho.block_stats(edges[:-1], edges[1:])
    return QuantizerResult(atoms=bary, error=float(np.sqrt(np.sum(inertia))), edges=edges)


def restriction_quantization(
    rho: Density1D, m: float, n: int, side: str = "left"
) -> QuantizerResult:
    """Quantizer of the normalized left (or right) m-restriction of rho.

    The restriction keeps the fraction m of lowest (resp. highest) quantiles
    of rho, renormalized to a probability measure.
    """
    if not 0.0 < m <= 1.0:
        raise ValueError("restriction mass must lie in (0, 1]")
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    grid = np.arange(n + 1, dtype=float) / n * m
    if side == "right":
        grid = 1.0 - m + grid
    edges = rho.quantile_grid(grid)
    _, bary, inertia = rho.block_stats(edges[:-1], edges[1:])
    return QuantizerResult(
        atoms=bary, error=float(np.sqrt(np.sum(inertia) / m)), edges=edges
    )


def block_approximation_cost(cloud: ParticleCloud | np.ndarray, marginals: list[Density1D]) -> float:
    """Squared distance from the cloud to its block-approximation coupling.

    The coupling glues, per particle, the product of the equal-mass marginal
    pieces produced by the monotone transports to the projected cloud; for
    the quadratic cost its squared distance to the cloud equals the sum of
    the per-marginal balanced penalties.
    """
    from .sdot import balanced_value_grad

    y = cloud.positions if isinstance(cloud, ParticleCloud) else np.asarray(cloud, dtype=float)
    return float(sum(balanced_value_grad(rho, y[:, j])[0] for j, rho in enumerate(marginals)))


def brute_force_mmot(atom_lists, cost: CostFunction, alpha: SpectralFunction):
    """Exhaustive maximum of the rank-weighted risk over uniform couplings.

    Marginal 1 keeps its order; one permutation per further marginal.  Only
    meant for tiny instances (n <= 6, d <= 3).
    """
    atoms = [np.asarray(a, dtype=float) for a in atom_lists]
    n = len(atoms[0])
    d = len(atoms)
    if any(len(a) != n for a in atoms):
        raise ValueError("all marginals need the same number of atoms")
    if n > 6 or d > 3:
        raise ValueError("instance too large for exhaustive search")
    best_value = -np.inf
    best_assign = None
    x = np.empty((n, d))
    x[:, 0] = atoms[0]
    for perms in itertools.product(itertools.permutations(range(n)), repeat=d - 1):
        for j, perm in enumerate(perms):
            x[:, j + 1] = atoms[j + 1][list(perm)]
        value, _ = risk_value_and_weights(alpha, cost.eval_many(x))
        if value > best_value:
            best_value = value
            best_assign = tuple(perms)
    return best_value, best_assign


def flow_partial_ot_oracle(rho: Density1D, z, m: float, n_atoms: int = 2000) -> float:
    """Discrete check of the partial transport value via min-cost flow.

    rho is replaced by n_atoms equal-mass atoms at block barycenters; exactly
    mass m is shipped to the given positions (capacity m/N each) by the
    integer successive-shortest-path solver.
    """
    if n_atoms < 500:
        raise ValueError("use at least 500 atoms for the flow oracle")
    if not 0.0 < m <= 1.0:
        raise ValueError("transported mass must lie in (0, 1]")
    z = np.asarray(z, dtype=float)
    n = len(z)
    per_target = m * n_atoms / n
    if abs(per_target - round(per_target)) > 1e-9:
        raise ValueError("choose n_atoms so that m * n_atoms / N is an integer")
    units = int(round(m * n_atoms))
    sources = quantize_1d(rho, n_atoms).atoms
    cost = (sources[:, None] - z[None, :]) ** 2
    total, _ = min_cost_partial_assignment(cost, [int(round(per_target))] * n, units)
    return total / n_atoms


def fit_rate(ns, errors) -> RateFit:
    """Least-squares slope of log(error) against log(n)."""
    ns = np.asarray(ns, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if len(ns) < 4:
        raise ValueError("need at least four points for a rate fit")
    if np.any(errors <= 0.0):
        raise ValueError("rate fit needs positive errors")
    x = np.log(ns)
    y = np.log(errors)
    a = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), res, _, _ = np.linalg.lstsq(a, y, rcond=None)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(res[0]) if len(res) else float(np.sum((a @ [slope, intercept] - y) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return RateFit(ns=ns, errors=errors, slope=float(slope), intercept=float(intercept), r_squared=r2)
