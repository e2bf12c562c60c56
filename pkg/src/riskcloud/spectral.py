"""Spectral weight functions and the discrete rank-weighted risk functional.

A spectral function is a nonnegative, nondecreasing weight on (0,1) with
integral one.  For a cloud of N values the induced risk is a weighted sum
where the k-th smallest value receives the integral of the weight over the
k-th subinterval of a uniform partition of (0,1).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "SpectralFunction",
    "Constant",
    "CVaR",
    "Linear",
    "QuadraticOffset",
    "PiecewiseConstant",
    "bin_weights",
    "risk_value_and_weights",
    "spectral_from_config",
]


class SpectralFunction:
    """Base class; subclasses provide pointwise values and exact bin integrals."""

    def __call__(self, t):
        raise NotImplementedError

    def bin_integrals(self, edges: np.ndarray) -> np.ndarray:
        """Integrals of the weight over consecutive [edges[k], edges[k+1]]."""
        prim = self._primitive(edges)
        return np.diff(prim)

    def _primitive(self, t):
        raise NotImplementedError


class Constant(SpectralFunction):
    """Weight identically one: the induced risk is the plain mean."""

    def __call__(self, t):
        return np.ones_like(np.asarray(t, dtype=float))

    def _primitive(self, t):
        return np.asarray(t, dtype=float)

    def config(self):
        return {"variant": "constant"}


class CVaR(SpectralFunction):
    """Tail weight 1/m on (1-m, 1): expected shortfall at mass level m."""

    def __init__(self, m: float):
        if not 0.0 < m <= 1.0:
            raise ValueError("CVaR level must lie in (0, 1]")
        self.m = float(m)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t > 1.0 - self.m, 1.0 / self.m, 0.0)

    def _primitive(self, t):
        t = np.asarray(t, dtype=float)
        return np.maximum(t - (1.0 - self.m), 0.0) / self.m

    def config(self):
        return {"variant": "cvar", "m": self.m}


class Linear(SpectralFunction):
    """Weight 2t."""

    def __call__(self, t):
        return 2.0 * np.asarray(t, dtype=float)

    def _primitive(self, t):
        t = np.asarray(t, dtype=float)
        return t * t

    def config(self):
        return {"variant": "linear"}


class QuadraticOffset(SpectralFunction):
    """Normalized ((t+eta)^2 - eta^2) / (1/3 + eta); zero at t=0, slope > 0."""

    def __init__(self, eta: float = 0.1):
        if not eta > 0.0:
            raise ValueError("QuadraticOffset requires eta > 0")
        self.eta = float(eta)
        self.norm = 1.0 / 3.0 + self.eta

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return ((t + self.eta) ** 2 - self.eta**2) / self.norm

    def _primitive(self, t):
        t = np.asarray(t, dtype=float)
        return ((t + self.eta) ** 3 / 3.0 - self.eta**2 * t - self.eta**3 / 3.0) / self.norm

    def config(self):
        return {"variant": "quadratic_offset", "eta": self.eta}


class PiecewiseConstant(SpectralFunction):
    """Step weight: values[k] on (breakpoints[k], breakpoints[k+1])."""

    def __init__(self, breakpoints, values):
        bp = np.asarray(breakpoints, dtype=float)
        vals = np.asarray(values, dtype=float)
        if bp.ndim != 1 or vals.ndim != 1 or len(bp) != len(vals) + 1:
            raise ValueError("need len(breakpoints) == len(values) + 1")
        if abs(bp[0]) > 1e-15 or abs(bp[-1] - 1.0) > 1e-15:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if np.any(np.diff(bp) <= 0.0):
            raise ValueError("breakpoints must be strictly increasing")
        if np.any(vals < 0.0) or np.any(np.diff(vals) < 0.0):
            raise ValueError("step values must be nonnegative and nondecreasing")
        total = float(np.sum(vals * np.diff(bp)))
        if abs(total - 1.0) > 1e-12:
            raise ValueError("step weight must integrate to one")
        self.breakpoints = bp
        self.values = vals

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(self.breakpoints, t, side="right") - 1, 0, len(self.values) - 1)
        return self.values[idx]

    def _primitive(self, t):
        t = np.asarray(t, dtype=float)
        cum = np.concatenate([[0.0], np.cumsum(self.values * np.diff(self.breakpoints))])
        idx = np.clip(np.searchsorted(self.breakpoints, t, side="right") - 1, 0, len(self.values) - 1)
        return cum[idx] + self.values[idx] * (t - self.breakpoints[idx])

    def config(self):
        return {
            "variant": "piecewise_constant",
            "breakpoints": self.breakpoints.tolist(),
            "values": self.values.tolist(),
        }


def bin_weights(alpha: SpectralFunction, n: int) -> np.ndarray:
    """Exact integrals of the weight over ((k-1)/n, k/n), k = 1..n."""
    if n < 1:
        raise ValueError("need at least one bin")
    edges = np.arange(n + 1, dtype=float) / n
    p = alpha.bin_integrals(edges)
    return np.maximum(p, 0.0)


def risk_value_and_weights(alpha: SpectralFunction, values) -> tuple[float, np.ndarray]:
    """Rank-weighted risk of a value vector and its per-entry weights.

    The k-th smallest value receives the k-th bin weight; ties are resolved
    stably by original index, which fixes one element of the subdifferential
    without changing the risk value.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 1:
        raise ValueError("values must be a one-dimensional vector")
    if np.any(np.isnan(values)):
        raise ValueError("values contain NaN")
    n = len(values)
    p = bin_weights(alpha, n)
    order = np.argsort(values, kind="stable")
    per_point = np.empty(n)
    per_point[order] = p
    # accumulate in rank order so the value is exactly permutation-invariant
    return float(p @ values[order]), per_point


_VARIANTS = {
    "constant": lambda cfg: Constant(),
    "cvar": lambda cfg: CVaR(cfg["m"]),
    "linear": lambda cfg: Linear(),
    "quadratic_offset": lambda cfg: QuadraticOffset(cfg.get("eta", 0.1)),
    "piecewise_constant": lambda cfg: PiecewiseConstant(cfg["breakpoints"], cfg["values"]),
}


def spectral_from_config(cfg: dict) -> SpectralFunction:
    if not isinstance(cfg, dict) or "variant" not in cfg:
        raise ValueError("spectral config must be an object with a 'variant' key")
    variant = cfg["variant"]
    if variant not in _VARIANTS:
        raise ValueError(f"unknown spectral variant {variant!r}")
    return _VARIANTS[variant](cfg)
