"""Preconfigured experiments and their problem-specific metrics."""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad

from .config import ConfigError, RunConfig
from .costs import RIVER_FLIP_MASK
from .measures import Density1D, density_from_config

__all__ = ["PRESETS", "preset_config", "preset_descriptions", "overlap_mass"]


def overlap_mass(rho1: Density1D, rho2: Density1D) -> float:
    """Mass of the common part: integral of the pointwise minimum density."""
    lo = min(rho1.lo, rho2.lo)
    hi = max(rho1.hi, rho2.hi)
    pts = sorted({rho1.lo, rho1.hi, rho2.lo, rho2.hi} - {lo, hi})
    val, _ = quad(
        lambda x: min(float(rho1.pdf(x)), float(rho2.pdf(x))),
        lo,
        hi,
        points=pts or None,
        limit=400,
        epsabs=1e-10,
    )
    return val


_RIVER_MARGINALS = [
    {"family": "truncated_gumbel", "params": [1013, 558, 500, 3000]},   # Q
    {"family": "truncated_normal", "params": [30, 8, 15]},              # Ks
    {"family": "triangular", "params": [49, 50, 51]},                   # Zv
    {"family": "triangular", "params": [54, 55, 56]},                   # Zm
    {"family": "triangular", "params": [4990, 5000, 5010]},             # L
    {"family": "triangular", "params": [295, 300, 305]},                # B
]

RIVER_AXIS_NAMES = ["Q", "Ks", "Zv", "Zm", "L", "B"]


def _tri(a, c, b):
    return {"family": "triangular", "params": [a, c, b]}


def _barycenter_marginals(variant: str) -> list[dict]:
    if variant == "translated_pyramid":
        return [_tri(0, 1, 2), _tri(0.7, 1.7, 2.7)]
    if variant == "two_pyramids":
        return [
            _tri(0, 1, 2),
            {
                "family": "mixture",
                "components": [
                    {"weight": 2 / 3, "density": _tri(-1, 0, 1)},
                    {"weight": 1 / 3, "density": _tri(1, 2, 3)},
                ],
            },
        ]
    if variant == "kitagawa_pass":
        # Reconstruction of the two-bump pair exhibiting non-monotone partial
        # barycenters (bump separation parameter 1/3).  A 2% uniform floor
        # keeps the supports connected; the qualitative behavior is preserved.
        eps = 1.0 / 3.0
        floor = 0.02

        def bumps(b1, b2, w1, w2):
            return {
                "family": "mixture",
                "components": [
                    {"weight": (1 - floor) * w1, "density": {"family": "uniform", "params": b1}},
                    {"weight": (1 - floor) * w2, "density": {"family": "uniform", "params": b2}},
                    {
                        "weight": floor,
                        "density": {"family": "uniform", "params": [min(b1[0], b2[0]), max(b1[1], b2[1])]},
                    },
                ],
            }

        rho1 = bumps([-1 - eps, -1], [0, 1], 0.25, 0.75)
        rho2 = bumps([-1, 0], [1, 1 + eps], 0.75, 0.25)
        return [rho1, rho2]
    raise ConfigError("$.options.variant", f"unknown barycenter variant {variant!r}")


def preset_config(run: RunConfig) -> dict:
    """Expand a preset into a full problem/schedule config dict."""
    name = run.preset
    opts = dict(run.options)

    if name == "squared_sum":
        _reject_extra(opts, set(), name)
        return {
            "problem": {
                "marginals": [
                    {"family": "uniform", "params": [0, 2]},
                    _tri(0, 1, 2),
                    {"family": "wigner", "params": [0, 1]},
                ],
                "cost": {"variant": "squared_sum_surplus"},
                "spectral": {"variant": "constant"},
                "mode": "full",
                "sense": "maximize",
            },
            "schedule": {"decades": [-2, 4]},
            "n": 1000,
        }

    if name == "partial_barycenter":
        _reject_extra(opts, {"variant", "mass"}, name)
        variant = opts.get("variant", "translated_pyramid")
        marginals = _barycenter_marginals(variant)
        default_mass = 0.4225 if variant in ("translated_pyramid", "two_pyramids") else 0.5
        mass = float(opts.get("mass", default_mass))
        k_max = 6 if variant == "two_pyramids" else 2
        return {
            "problem": {
                "marginals": marginals,
                "cost": {"variant": "pairwise_quadratic", "weights": [0.5, 0.5]},
                "spectral": {"variant": "constant"},
                "mode": "partial",
                "mass": mass,
                "sense": "minimize",
            },
            "schedule": {"decades": [-3, k_max]},
            "n": 1000,
            "variant": variant,
        }

    if name == "coulomb_cvar":
        _reject_extra(opts, {"d", "mass"}, name)
        d = int(opts.get("d", 2))
        mass = float(opts.get("mass", 0.5))
        return {
            "problem": {
                "marginals": [{"family": "uniform", "params": [0, 1]}] * d,
                "cost": {"variant": "coulomb_reg"},
                "spectral": {"variant": "cvar", "m": mass},
                "mode": "partial",
                "mass": mass,
                "sense": "minimize",
            },
            "schedule": {"decades": [-3, 6]},
            "n": 1500,
        }

    if name == "coulomb_quadratic":
        _reject_extra(opts, {"d", "eta"}, name)
        d = int(opts.get("d", 3))
        eta = float(opts.get("eta", 0.1))
        return {
            "problem": {
                "marginals": [{"family": "uniform", "params": [0, 1]}] * d,
                "cost": {"variant": "negated", "inner": {"variant": "coulomb_reg"}},
                "spectral": {"variant": "quadratic_offset", "eta": eta},
                "mode": "full",
                "sense": "maximize",
            },
            "schedule": {"decades": [-3, 6]},
            "n": 1500,
        }

    if name == "river":
        _reject_extra(opts, set(), name)
        return {
            "problem": {
                "marginals": list(_RIVER_MARGINALS),
                "cost": {"variant": "river_overflow"},
                "spectral": {"variant": "linear"},
                "mode": "full",
                "sense": "maximize",
            },
            "schedule": {"decades": [-2, 2]},
            "n": 5000,
            "flips": [bool(v) for v in RIVER_FLIP_MASK],
            "axis_names": list(RIVER_AXIS_NAMES),
        }

    if name == "rates":
        _reject_extra(opts, {"ns", "seeds", "theory_rung"}, name)
        return {
            "problem": {
                "marginals": [{"family": "uniform", "params": [0, 1]}] * 2,
                "cost": {"variant": "product"},
                "spectral": {"variant": "linear"},
                "mode": "full",
                "sense": "maximize",
            },
            "schedule": {"decades": [-2, 4]},
            "rates": {
                "ns": [int(v) for v in opts.get("ns", [25, 50, 100, 200, 400, 800])],
                "seeds": [int(v) for v in opts.get("seeds", [0, 1, 2])],
                "theory_rung": bool(opts.get("theory_rung", True)),
                "reference": 0.5,
            },
            "n": 100,
        }

    raise ConfigError("$.preset", f"unknown preset {name!r}")


def _reject_extra(opts: dict, allowed: set, preset: str):
    unknown = set(opts) - allowed
    if unknown:
        raise ConfigError(
            "$.options", f"preset {preset!r} accepts {sorted(allowed)}, got {sorted(unknown)}"
        )


PRESETS = {
    "squared_sum": "three univariate marginals, squared-sum surplus cost, plain mean; "
    "the solution concentrates on the plane where the coordinate sum equals the sum of means",
    "partial_barycenter": "two-marginal partial barycenter (pairwise quadratic cost, mass-m "
    "domination constraints); variants: translated_pyramid, two_pyramids, kitagawa_pass",
    "coulomb_cvar": "D equal uniform marginals with the regularized repulsive cost, "
    "tail mass m transported (expected-shortfall formulation)",
    "coulomb_quadratic": "D equal uniform marginals maximizing the quadratic-weight risk of "
    "the negated repulsive cost",
    "river": "six-variable flood overflow model: risk-maximizing coupling of the hydraulic "
    "input marginals under the linear spectral weight",
    "rates": "N-sweep recovery study of the supermodular product cost against the exact "
    "monotone-coupling reference value 1/2",
}


def preset_descriptions() -> list[tuple[str, str]]:
    return [(name, PRESETS[name]) for name in PRESETS]
