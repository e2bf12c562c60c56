"""Particle method for worst-case spectral-risk couplings.

Maximizes a spectral risk measure of the pushforward of a multimarginal
coupling by a cost function, over uniformly weighted point clouds whose
marginal constraints are enforced through one-dimensional quadratic
Wasserstein penalties (balanced or partial).
"""

from .measures import (
    Density1D,
    Mixture,
    PowerLaw,
    Triangular,
    TruncatedGumbel,
    TruncatedNormal,
    Uniform,
    WignerSemicircle,
    density_from_config,
)
from .spectral import (
    CVaR,
    Constant,
    Linear,
    PiecewiseConstant,
    QuadraticOffset,
    SpectralFunction,
    bin_weights,
    risk_value_and_weights,
    spectral_from_config,
)
from .sdot import (
    CellDecomposition,
    PartialTransportError,
    balanced_value_grad,
    partial_value_grad,
)
from .costs import (
    CoordinateSum,
    CostDomainError,
    CostFunction,
    CoulombRegularized,
    Negated,
    PairwiseQuadratic,
    ProductCost,
    RIVER_FLIP_MASK,
    RiverOverflow,
    SignFlips,
    SquaredSumSurplus,
    cost_from_config,
)
from .solver import (
    MinimizeResult,
    ObjectiveDiagnostics,
    ParticleCloud,
    ProblemSpec,
    RateModel,
    Schedule,
    init_cloud,
    marginal_penalties,
    minimize,
    objective_value_grad,
    tau_pd,
)
from .oracles import (
    QuantizerResult,
    RateFit,
    block_approximation_cost,
    brute_force_mmot,
    comonotone_points,
    fit_rate,
    flow_partial_ot_oracle,
    quantize_1d,
    reference_value,
    restriction_quantization,
)

__all__ = [
    "Density1D",
    "Uniform",
    "Triangular",
    "PowerLaw",
    "WignerSemicircle",
    "TruncatedNormal",
    "TruncatedGumbel",
    "Mixture",
    "density_from_config",
    "SpectralFunction",
    "Constant",
    "CVaR",
    "Linear",
    "QuadraticOffset",
    "PiecewiseConstant",
    "bin_weights",
    "risk_value_and_weights",
    "spectral_from_config",
    "CellDecomposition",
    "PartialTransportError",
    "balanced_value_grad",
    "partial_value_grad",
    "CostFunction",
    "CostDomainError",
    "SquaredSumSurplus",
    "PairwiseQuadratic",
    "CoulombRegularized",
    "RiverOverflow",
    "ProductCost",
    "CoordinateSum",
    "SignFlips",
    "Negated",
    "RIVER_FLIP_MASK",
    "cost_from_config",
    "ProblemSpec",
    "ParticleCloud",
    "Schedule",
    "RateModel",
    "MinimizeResult",
    "ObjectiveDiagnostics",
    "tau_pd",
    "objective_value_grad",
    "init_cloud",
    "minimize",
    "marginal_penalties",
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
