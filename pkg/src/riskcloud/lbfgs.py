"""Limited-memory BFGS with a strong Wolfe line search.

The objective only needs to supply values and gradients; values may be +inf
(domain sentinel), in which case the line search backtracks into the finite
region.  The two-loop recursion keeps a bounded history of curvature pairs
and is reset whenever the line search fails, after which a rescaled steepest
descent step is attempted once before giving up on the current stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["LbfgsResult", "minimize_lbfgs"]


@dataclass
class LbfgsResult:
    x: np.ndarray
    value: float
    grad: np.ndarray
    iterations: int
    n_evals: int
    status: str  # "converged" | "max_iters" | "stalled"
    history: list = field(default_factory=list)


def _two_loop(g, s_list, y_list):
    q = g.copy()
    alphas = []
    for s, y in zip(reversed(s_list), reversed(y_list)):
        rho = 1.0 / (y @ s)
        a = rho * (s @ q)
        alphas.append(a)
        q -= a * y
    if s_list:
        s, y = s_list[-1], y_list[-1]
        q *= (s @ y) / (y @ y)
    for (s, y), a in zip(zip(s_list, y_list), reversed(alphas)):
        rho = 1.0 / (y @ s)
        b = rho * (y @ q)
        q += (a - b) * s
    return q


def _interp_quadratic(lo, f_lo, g_lo, hi, f_hi):
    dz = hi - lo
    denom = f_hi - f_lo - g_lo * dz
    if denom <= 0.0 or not np.isfinite(denom):
        return None
    t = lo - 0.5 * g_lo * dz * dz / denom
    margin = 0.1 * abs(dz)
    if not np.isfinite(t) or t < min(lo, hi) + margin or t > max(lo, hi) - margin:
        return None
    return t


class _LineEval:
    """Evaluate the objective along x + a*d, caching the last full gradient."""

    def __init__(self, fun_grad, x, d):
        self.fun_grad = fun_grad
        self.x = x
        self.d = d
        self.n_evals = 0
        self.last = None  # (alpha, f, g_full)

    def __call__(self, alpha):
        f, g = self.fun_grad(self.x + alpha * self.d)
        self.n_evals += 1
        self.last = (alpha, f, g)
        slope = float(g @ self.d) if np.isfinite(f) else np.inf
        return f, slope


def _zoom(ev, a_lo, f_lo, g_lo, a_hi, f_hi, f0, slope0, c1, c2, max_iter=40):
    for _ in range(max_iter):
        a = _interp_quadratic(a_lo, f_lo, g_lo, a_hi, f_hi)
        if a is None:
            a = 0.5 * (a_lo + a_hi)
        f, slope = ev(a)
        if not np.isfinite(f) or f > f0 + c1 * a * slope0 or f >= f_lo:
            a_hi, f_hi = a, f
        else:
            if abs(slope) <= -c2 * slope0:
                return a, f
            if slope * (a_hi - a_lo) >= 0.0:
                a_hi, f_hi = a_lo, f_lo
            a_lo, f_lo, g_lo = a, f, slope
        if abs(a_hi - a_lo) <= 1e-14 * max(abs(a_lo), abs(a_hi)):
            break
    if np.isfinite(f_lo) and f_lo < f0:
        # Sufficient decrease without the curvature certificate; accept.
        if ev.last is None or ev.last[0] != a_lo:
            ev(a_lo)
        return a_lo, f_lo
    return None


def _strong_wolfe(ev, f0, slope0, alpha_init, c1, c2, alpha_max=np.inf, max_expand=30):
    a_prev, f_prev, g_prev = 0.0, f0, slope0
    a = min(alpha_init, alpha_max)
    for i in range(max_expand):
        f, slope = ev(a)
        if not np.isfinite(f) or f > f0 + c1 * a * slope0 or (i > 0 and f >= f_prev):
            return _zoom(ev, a_prev, f_prev, g_prev, a, f, f0, slope0, c1, c2)
        if abs(slope) <= -c2 * slope0:
            return a, f
        if slope >= 0.0:
            return _zoom(ev, a, f, slope, a_prev, f_prev, f0, slope0, c1, c2)
        if a >= alpha_max:
            # Trust cap reached with sufficient decrease: accept the capped
            # step rather than chase curvature into unbounded territory.
            return a, f
        a_prev, f_prev, g_prev = a, f, slope
        a = min(2.0 * a, alpha_max)
    if np.isfinite(f_prev) and f_prev < f0 and a_prev > 0.0:
        if ev.last is None or ev.last[0] != a_prev:
            ev(a_prev)
        return a_prev, f_prev
    return None


def minimize_lbfgs(
    fun_grad,
    x0,
    gtol_rel: float = 1e-8,
    max_iters: int = 2000,
    memory: int = 10,
    c1: float = 1e-4,
    c2: float = 0.9,
    callback=None,
    rng: np.random.Generator | None = None,
    max_step=None,
) -> LbfgsResult:
    """Minimize fun_grad(x) -> (value, grad) from x0.

    Stops when the sup norm of the gradient falls below
    gtol_rel * max(1, |value|), after max_iters steps, or when the line
    search fails twice in a row (memory reset in between).  max_step, when
    given, caps the per-coordinate displacement of any single step; it keeps
    nearly-linear descent directions from racing toward domain boundaries.
    """
    x = np.asarray(x0, dtype=float).copy()
    if max_step is not None:
        max_step = np.broadcast_to(np.asarray(max_step, dtype=float), x.shape)
    f, g = fun_grad(x)
    n_evals = 1
    if not np.isfinite(f):
        raise ValueError("objective is not finite at the initial point")
    s_list: list[np.ndarray] = []
    y_list: list[np.ndarray] = []
    status = "max_iters"
    it = 0
    rescue_scale = 1.0
    while it < max_iters:
        gnorm = float(np.max(np.abs(g)))
        if gnorm <= gtol_rel * max(1.0, abs(f)):
            status = "converged"
            break
        d = -_two_loop(g, s_list, y_list)
        descent = float(d @ g)
        if not np.isfinite(descent) or descent >= 0.0:
            s_list, y_list = [], []
            d = -g
            descent = float(d @ g)
        if max_step is not None:
            with np.errstate(divide="ignore"):
                alpha_max = float(np.min(np.where(np.abs(d) > 0.0, max_step / np.abs(d), np.inf)))
        else:
            alpha_max = np.inf
        if s_list:
            alpha0 = 1.0
        else:
            alpha0 = rescue_scale * min(1.0, 1.0 / max(float(np.linalg.norm(g)), 1e-12))
        ev = _LineEval(fun_grad, x, d)
        hit = _strong_wolfe(ev, f, descent, alpha0, c1, c2, alpha_max=alpha_max)
        n_evals += ev.n_evals
        if hit is None:
            if s_list:
                # Retry once as rescaled steepest descent from a fresh memory.
                s_list, y_list = [], []
                rescue_scale = float(rng.uniform(0.05, 0.5)) if rng is not None else 0.1
                continue
            status = "stalled"
            break
        rescue_scale = 1.0
        alpha, f_new = hit
        if ev.last is not None and ev.last[0] == alpha:
            g_new = ev.last[2]
        else:
            f_new, g_new = fun_grad(x + alpha * d)
            n_evals += 1
        x_new = x + alpha * d
        s = x_new - x
        y = g_new - g
        sy = float(s @ y)
        if np.isfinite(sy) and sy > 1e-12 * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
            s_list.append(s)
            y_list.append(y)
            if len(s_list) > memory:
                s_list.pop(0)
                y_list.pop(0)
        x, f, g = x_new, f_new, g_new
        it += 1
        if callback is not None:
            callback(it, x, f, g)
    return LbfgsResult(x=x, value=f, grad=g, iterations=it, n_evals=n_evals, status=status)
