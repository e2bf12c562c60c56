"""One-dimensional semi-discrete quadratic optimal transport.

Balanced mode evaluates W2(rho, delta_Z)^2 together with its gradient; the
optimal cells are the quantile blocks of rho, assigned to the sorted atoms.
Partial mode evaluates the partial cost W2max(rho, m*delta_Z)^2 through its
concave dual: each atom must capture exactly m/N of rho inside its restricted
cell, the intersection of a Laguerre cell with the ball of radius sqrt(psi_i)
around the atom.

The partial dual is solved by an ordered endpoint parameterization: sorted
atoms start as singleton cells holding mass m/N each, overlapping runs of
cells are merged into chains that share Laguerre boundaries, every chain is
solved by mass marching from its left endpoint (a one-dimensional root find),
and chains are re-split wherever a shared boundary escapes an atom's ball.
The fixed point of this merge/split sweep satisfies the dual optimality
conditions exactly.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np

from .measures import Density1D

__all__ = [
    "CellDecomposition",
    "PartialTransportError",
    "balanced_value_grad",
    "partial_value_grad",
]

_MERGE_TOL = 1e-11  # relative geometric overlap that triggers a chain merge
_SPLIT_TOL = 1e-9   # relative ball violation that splits a chain
_BISECT_ITERS = 40


class PartialTransportError(RuntimeError):
    """Raised when the partial dual solver cannot certify optimality."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (last KKT residual {residual:.3e})")
        self.residual = residual


@dataclass
class CellDecomposition:
    """Cells in sorted-atom order; ``order[k]`` is the owning atom's index."""

    order: np.ndarray
    left: np.ndarray
    right: np.ndarray
    mass: np.ndarray
    barycenter: np.ndarray
    psi: np.ndarray

    def to_records(self) -> list[dict]:
        return [
            {
                "index": int(self.order[k]),
                "l": float(self.left[k]),
                "r": float(self.right[k]),
                "psi": float(self.psi[k]),
                "barycenter": float(self.barycenter[k]),
                "mass": float(self.mass[k]),
            }
            for k in range(len(self.order))
        ]


# -- balanced transport -------------------------------------------------------

_balanced_cache: "weakref.WeakKeyDictionary[Density1D, dict]" = weakref.WeakKeyDictionary()


def _balanced_blocks(rho: Density1D, n: int):
    per_rho = _balanced_cache.setdefault(rho, {})
    blocks = per_rho.get(n)
    if blocks is None:
        grid = np.arange(n + 1, dtype=float) / n
        edges = rho.quantile_grid(grid)
        mass, bary, inertia = rho.block_stats(edges[:-1], edges[1:])
        blocks = (edges, mass, bary, inertia)
        per_rho[n] = blocks
    return blocks


def balanced_value_grad(rho: Density1D, z) -> tuple[float, np.ndarray, CellDecomposition]:
    """Value, gradient and cells of Z -> W2(rho, delta_Z)^2.

    The k-th quantile block of rho is assigned to the k-th smallest atom;
    ties are broken stably, which selects one subgradient element.
    """
    z = np.asarray(z, dtype=float)
    if z.ndim != 1 or len(z) == 0:
        raise ValueError("atom vector must be one-dimensional and nonempty")
    if np.any(~np.isfinite(z)):
        raise ValueError("atom positions must be finite")
    n = len(z)
    edges, mass, bary, inertia = _balanced_blocks(rho, n)
    order = np.argsort(z, kind="stable")
    zs = z[order]
    diff = zs - bary
    value = float(np.sum(inertia + mass * diff * diff))
    grad = np.empty(n)
    grad[order] = 2.0 * mass * diff
    cells = CellDecomposition(
        order=order,
        left=edges[:-1].copy(),
        right=edges[1:].copy(),
        mass=mass.copy(),
        barycenter=bary.copy(),
        psi=np.zeros(n),
    )
    return value, grad, cells


# -- partial transport --------------------------------------------------------


def _chain_state(rho, zs, q, starts, e0, start_idx, cid, pos):
    """Edges, weights, per-chain right-end residual and its e0-derivative.

    Mass marching gives d er[k] / d e0 = pdf(e0) / pdf(er[k]), from which the
    residual derivative follows by the chain rule through the weight
    recursion; degenerate densities yield non-finite derivatives, which the
    caller's safeguards turn into secant/bisection steps.
    """
    t0 = np.asarray(rho.cdf(e0))
    tr = np.clip(t0[cid] + (pos + 1) * q, 0.0, 1.0)
    er = rho.quantile_grid(tr)
    el = np.empty_like(er)
    el[start_idx] = e0
    el[1:][~starts[1:]] = er[:-1][~starts[1:]]

    psi_first = (zs[start_idx] - e0) ** 2
    d = np.zeros(len(zs))
    interior = np.flatnonzero(~starts)
    if len(interior):
        e_shared = el[interior]
        d[interior] = (e_shared - zs[interior]) ** 2 - (e_shared - zs[interior - 1]) ** 2
    cs = np.cumsum(d)
    psi = psi_first[cid] + (cs - cs[start_idx][cid])

    end_idx = np.append(start_idx[1:], len(zs)) - 1
    residual = (er[end_idx] - zs[end_idx]) ** 2 - psi[end_idx]

    with np.errstate(divide="ignore", invalid="ignore"):
        de = np.asarray(rho.pdf(e0))[cid] / np.asarray(rho.pdf(er))
    dd = np.zeros(len(zs))
    if len(interior):
        dd[interior] = 2.0 * (zs[interior - 1] - zs[interior]) * de[interior - 1]
    cs2 = np.cumsum(dd)
    dpsi = (-2.0 * (zs[start_idx] - e0))[cid] + (cs2 - cs2[start_idx][cid])
    dresidual = 2.0 * (er[end_idx] - zs[end_idx]) * de[end_idx] - dpsi[end_idx]
    return el, er, psi, residual, dresidual


def _solve_chains(rho, zs, q, starts, kkt_tol, guess=None):
    """Solve every chain (run of cells sharing boundaries) for the current partition.

    guess, when given, carries per-cell left-endpoint estimates from the
    previous partition; chains seeded inside their bracket converge in a few
    Newton steps.
    """
    n = len(zs)
    lo, hi = rho.support
    cid = np.cumsum(starts) - 1
    start_idx = np.flatnonzero(starts)
    pos = np.arange(n) - start_idx[cid]
    sizes = np.diff(np.append(start_idx, n))

    z_first = zs[start_idx]
    upper_t = np.clip(1.0 - sizes * q, 0.0, 1.0)
    u = np.minimum(z_first, rho.quantile_grid(upper_t))
    u = np.maximum(u, lo)
    a = np.full(len(start_idx), lo, dtype=float)

    _, _, _, r_lo, _ = _chain_state(rho, zs, q, starts, a, start_idx, cid, pos)
    _, _, _, r_hi, _ = _chain_state(rho, zs, q, starts, u, start_idx, cid, pos)

    left_clip = r_lo >= 0.0
    right_anchor = (~left_clip) & (r_hi <= 0.0)
    solve = ~(left_clip | right_anchor)

    # Safeguarded Newton on the right-end residual per chain: Newton steps
    # where the analytic derivative is sound, secant otherwise, bisection
    # when a candidate leaves the bracket.
    lo_b, f_lo = a.copy(), r_lo.copy()
    hi_b, f_hi = u.copy(), r_hi.copy()
    e0 = np.where(left_clip, a, u)
    scale = max(float(np.ptp(zs)), hi - lo, 1.0)
    tol = 1e-13 * scale
    # Masses are exact by construction; the root residual only controls how
    # tightly the last ball hugs its cell.  Terminate a chain when the mass
    # the ball could add beyond the cell (density * overshoot) drops far
    # below the KKT tolerance, with an absolute floor for flat regions.
    mass_tol = 0.05 * kkt_tol  # masses are absolute (they sum to m)
    abs_floor = 1e-13 * scale * scale
    done = np.zeros(len(start_idx), dtype=bool)
    root = np.where(np.abs(f_lo) < np.abs(f_hi), lo_b, hi_b)
    end_idx = np.append(start_idx[1:], len(zs)) - 1
    cur = 0.5 * (lo_b + hi_b)
    if guess is not None:
        seed = guess[start_idx]
        usable = np.isfinite(seed) & (seed > lo_b) & (seed < hi_b)
        cur = np.where(usable, seed, cur)
    f_cur = None
    df_cur = None
    stalled = np.zeros(len(start_idx), dtype=bool)
    for it in range(_BISECT_ITERS):
        active = solve & ~done & (hi_b - lo_b > tol)
        if not np.any(active):
            break
        if it > 0:
            width = hi_b - lo_b
            with np.errstate(divide="ignore", invalid="ignore"):
                newton = cur - f_cur / df_cur
                secant = hi_b - f_hi * width / (f_hi - f_lo)
            cand = np.where(
                np.isfinite(newton) & (newton > lo_b + 1e-12 * width) & (newton < hi_b - 1e-12 * width),
                newton,
                secant,
            )
            # bisect whenever the residual stopped decaying (degenerate
            # densities make Newton/secant steps vanish)
            bad = (
                ~np.isfinite(cand)
                | (cand <= lo_b + 1e-12 * width)
                | (cand >= hi_b - 1e-12 * width)
                | stalled
            )
            cur = np.where(active, np.where(bad, 0.5 * (lo_b + hi_b), cand), cur)
        _, er_it, _, r_mid, dr_mid = _chain_state(rho, zs, q, starts, cur, start_idx, cid, pos)
        if f_cur is not None:
            stalled = np.abs(r_mid) > 0.25 * np.abs(f_cur)
        f_cur, df_cur = r_mid, dr_mid
        er_end = er_it[end_idx]
        rad = np.abs(er_end - zs[end_idx])
        overshoot_mass = np.asarray(rho.pdf(er_end)) * np.abs(r_mid) / np.maximum(2.0 * rad, 1e-12 * scale)
        # remaining-bracket uncertainty in mass units: when the whole bracket
        # sits in a near-null region, extra precision buys nothing
        bracket_mass = np.asarray(rho.pdf(cur)) * (hi_b - lo_b)
        hit = active & (
            (overshoot_mass <= mass_tol) | (np.abs(r_mid) <= abs_floor) | (bracket_mass <= mass_tol)
        )
        root = np.where(hit, cur, root)
        done |= hit
        low = active & (r_mid < 0.0)
        high = active & ~low
        # halve the retained endpoint's residual so the bracket keeps closing
        f_hi = np.where(low, f_hi * 0.5, f_hi)
        f_lo = np.where(low, r_mid, np.where(high, f_lo * 0.5, f_lo))
        f_hi = np.where(high, r_mid, f_hi)
        lo_b = np.where(low, cur, lo_b)
        hi_b = np.where(high, cur, hi_b)
    fallback = np.where(np.abs(f_lo) < np.abs(f_hi), lo_b, hi_b)
    e0 = np.where(solve, np.where(done, root, fallback), e0)

    el, er, psi, residual, _ = _chain_state(rho, zs, q, starts, e0, start_idx, cid, pos)
    # A left-clipped chain keeps its endpoint at the support boundary and the
    # slack is absorbed as a constant shift of the chain's weights.
    delta = np.where(left_clip, np.maximum(r_lo, 0.0), 0.0)
    psi = psi + delta[cid]
    return el, er, psi, cid, start_idx, e0


def _psi_for_balanced(zs, edges):
    """Weights consistent with the quantile tessellation (used when m = 1)."""
    n = len(zs)
    psi = np.zeros(n)
    for k in range(1, n):
        e = edges[k]
        psi[k] = psi[k - 1] + (e - zs[k]) ** 2 - (e - zs[k - 1]) ** 2
    need = np.maximum((zs - edges[:-1]) ** 2, (edges[1:] - zs) ** 2)
    return psi + np.max(need - psi)


def _validate_chain_ends(rho, zs, el, er, psi, starts, scale, kkt_tol):
    """Certify dual optimality at the outer ends of every chain, measure-wise.

    Up to null regions, an outer cell endpoint must coincide with the
    atom's ball endpoint or the support boundary: the mass between the cell
    end and the (support-clipped) ball end must vanish in both directions.
    """
    n = len(zs)
    lo, hi = rho.support
    start_idx = np.flatnonzero(starts)
    end_idx = np.append(start_idx[1:], n) - 1
    rad = np.sqrt(np.maximum(psi, 0.0))

    ball_lo = np.clip(zs[start_idx] - rad[start_idx], lo, hi)
    gap = np.abs(np.asarray(rho.cdf(el[start_idx])) - np.asarray(rho.cdf(ball_lo)))
    if np.any(gap > kkt_tol):
        raise PartialTransportError(
            "cell and ball ends disagree in mass at a chain left end", float(np.max(gap))
        )

    ball_hi = np.clip(zs[end_idx] + rad[end_idx], lo, hi)
    gap = np.abs(np.asarray(rho.cdf(ball_hi)) - np.asarray(rho.cdf(er[end_idx])))
    if np.any(gap > kkt_tol):
        raise PartialTransportError(
            "cell and ball ends disagree in mass at a chain right end", float(np.max(gap))
        )

    if len(start_idx) > 1:
        overlap_mass = np.asarray(rho.cdf(er[end_idx[:-1]])) - np.asarray(rho.cdf(el[start_idx[1:]]))
        if np.any(overlap_mass > kkt_tol):
            raise PartialTransportError(
                "adjacent cells overlap with positive mass", float(np.max(overlap_mass))
            )


def _validate_interior(rho, zs, el, psi, starts, kkt_tol):
    """Interior shared boundaries may escape a ball only through null regions."""
    lo, hi = rho.support
    interior = np.flatnonzero(~starts)
    if len(interior) == 0:
        return
    e_shared = el[interior]
    z_own = zs[interior - 1]
    ball_end = np.clip(z_own + np.sqrt(np.maximum(psi[interior - 1], 0.0)), lo, hi)
    gap_mass = np.asarray(rho.cdf(e_shared)) - np.asarray(rho.cdf(ball_end))
    if np.any(gap_mass > kkt_tol):
        raise PartialTransportError(
            "a shared boundary escapes its ball with positive mass", float(np.max(gap_mass))
        )


def partial_value_grad(
    rho: Density1D,
    z,
    m: float,
    kkt_tol: float = 1e-9,
    max_sweeps: int = 200,
    hint: dict | None = None,
) -> tuple[float, np.ndarray, CellDecomposition]:
    """Value, gradient and restricted cells of Z -> W2max(rho, m*delta_Z)^2.

    hint, when given, is a mutable dict reused across calls at nearby atom
    configurations; it stores the last chain partition and endpoints as
    iteration seeds.  Results do not depend on the hint (every output is
    re-certified), only the work to reach them does.
    """
    z = np.asarray(z, dtype=float)
    if z.ndim != 1 or len(z) == 0:
        raise ValueError("atom vector must be one-dimensional and nonempty")
    if np.any(~np.isfinite(z)):
        raise ValueError("atom positions must be finite")
    if not 0.0 < m <= 1.0:
        raise ValueError("transported mass must lie in (0, 1]")
    n = len(z)
    q = m / n

    if m >= 1.0 - 1e-12:
        value, grad, cells = balanced_value_grad(rho, z)
        edges = np.concatenate([cells.left, cells.right[-1:]])
        cells.psi = _psi_for_balanced(z[cells.order], edges)
        return value, grad, cells

    order = np.argsort(z, kind="stable")
    zs = z[order]

    starts0 = np.ones(n, dtype=bool)
    guess0 = None
    if hint and hint.get("starts") is not None and len(hint["starts"]) == n:
        starts0 = hint["starts"].copy()
        starts0[0] = True
        guess0 = hint.get("guess")
    try:
        el, er, psi, starts = _chain_fixed_point(
            rho, zs, q, kkt_tol, max_sweeps, starts0, guess0
        )
    except PartialTransportError:
        if guess0 is None and starts0.all():
            raise
        # a stale hint can start the sweep in a bad basin; retry cold
        el, er, psi, starts = _chain_fixed_point(
            rho, zs, q, kkt_tol, max_sweeps, np.ones(n, dtype=bool), None
        )
    if hint is not None:
        hint["starts"] = starts.copy()
        hint["guess"] = el.copy()

    mass, bary, inertia = rho.block_stats(el, er)
    diff = zs - bary
    value = float(np.sum(inertia + mass * diff * diff))
    grad = np.empty(n)
    grad[order] = 2.0 * mass * diff
    cells = CellDecomposition(
        order=order,
        left=el,
        right=er,
        mass=mass,
        barycenter=bary,
        psi=np.maximum(psi, 0.0),
    )
    return value, grad, cells


def _chain_fixed_point(rho, zs, q, kkt_tol, max_sweeps, starts, guess):
    """Run merge/split sweeps to a fixed point and certify it."""
    n = len(zs)
    scale = max(rho.width, float(np.ptp(zs)), 1.0)
    lo_hi = rho.support
    seen: set[bytes] = set()
    el = er = psi = None
    mass_slack = 0.05 * kkt_tol
    for _ in range(max_sweeps):
        el, er, psi, cid, start_idx, e0 = _solve_chains(rho, zs, q, starts, kkt_tol, guess)
        guess = e0[cid]  # per-cell seed for the next partition

        # Merge adjacent chains whose cells overlap with positive mass
        # (overlaps confined to a null region are harmless by measure).
        end_idx = np.append(start_idx[1:], n) - 1
        r_prev = er[end_idx[:-1]]
        l_next = el[start_idx[1:]]
        geo_overlap = r_prev - l_next > _MERGE_TOL * scale
        overlap_mass = np.asarray(rho.cdf(r_prev)) - np.asarray(rho.cdf(l_next))
        overlap = geo_overlap & (overlap_mass > mass_slack)
        if np.any(overlap):
            starts = starts.copy()
            starts[start_idx[1:][overlap]] = False
        else:
            # Split wherever a shared boundary escapes the owning atom's ball
            # by a region of positive mass: the true configuration then has a
            # gap between the two balls.
            interior = np.flatnonzero(~starts)
            if len(interior) == 0:
                break
            e_shared = el[interior]
            z_own = zs[interior - 1]
            viol = (e_shared - z_own) ** 2 - psi[interior - 1]
            ball_end = np.clip(z_own + np.sqrt(np.maximum(psi[interior - 1], 0.0)), lo_hi[0], lo_hi[1])
            gap_mass = np.asarray(rho.cdf(e_shared)) - np.asarray(rho.cdf(ball_end))
            bad = (viol > _SPLIT_TOL * scale * scale) & (gap_mass > mass_slack)
            if not np.any(bad):
                break
            starts = starts.copy()
            starts[interior[bad]] = True
        key = starts.tobytes()
        if key in seen:
            # Oscillation between measure-equivalent partitions: keep the
            # current state and let the mass-wise validation decide.
            break
        seen.add(key)
    else:
        mass_now = rho.block_stats(el, er)[0]
        raise PartialTransportError(
            "partial transport chain iteration did not converge",
            float(np.max(np.abs(mass_now - q))),
        )

    mass_now = rho.block_stats(el, er)[0]
    residual = float(np.max(np.abs(mass_now - q)))
    if residual > kkt_tol:
        raise PartialTransportError("partial transport cells violate mass balance", residual)
    _validate_chain_ends(rho, zs, el, er, psi, starts, scale, kkt_tol)
    _validate_interior(rho, zs, el, psi, starts, kkt_tol)
    return el, er, psi, starts
