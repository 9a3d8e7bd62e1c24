"""Numerical toolkit for one-dimensional exponential families.

Core objects:

* :class:`~nmlregret.measure.BaseMeasure` — the carrier measure (atoms,
  density pieces, counting weights) an exponential family tilts.
* :class:`~nmlregret.family.ExpFamily` — the tilted family, with partition
  function, moments, maximum-likelihood inversion, and KL divergence.
* :mod:`~nmlregret.integrals` — normalized-maximum-likelihood (Shtarkov)
  and Jeffreys integrals, plus the finiteness classifier.
* :mod:`~nmlregret.capacity` — channel capacity under grid refinement and
  divergence-domination checks.
* :mod:`~nmlregret.regret` — minimax regret curves and their asymptote.
* :mod:`~nmlregret.catalog` — ready-made families used throughout.
"""

from . import catalog
from .capacity import (
    CapacityResult,
    DominationVerdict,
    RefinementVerdict,
    SupDivergenceResult,
    blahut_arimoto,
    build_channel,
    capacity_refinement,
    dominated_by_member,
    refinement_grid,
    sup_divergence,
)
from .errors import (
    BadBracket,
    BadLocation,
    BadParameter,
    ConvolutionUnavailable,
    HypothesisNotMet,
    IntegralInconclusive,
    MeanDiverges,
    NmlRegretError,
    NoConvergence,
    NoInteriorSolution,
    NonFiniteIntegrand,
    OutOfMeanRange,
    SupportMismatch,
    TooFewSamples,
    TruncationOutsideDomain,
)
from .family import ExpFamily, MeanRange, MLPoint
from .integrals import (
    FinitenessReport,
    MLInverter,
    classify,
    item7_status,
    jeffreys_canonical,
    jeffreys_mean,
    kl_limit_test,
    left_end_contribution,
    shtarkov_integral,
    tail_alpha,
)
from .measure import (
    Atom,
    BaseMeasure,
    CountingWeights,
    DensityPiece,
    factorial_reciprocal_weights,
    gamma_shape_density,
    gaussian_density,
    log_cauchy_density,
    ones_weights,
    power_law_weights,
)
from .quadrature import (
    IntegralVerdict,
    LimitVerdict,
    QuadConfig,
    integrate,
    limit_extrapolate,
    sum_series,
)
from .regret import (
    RegretReport,
    asymptotic_regret,
    curve_to_csv,
    minimax_regret,
    nfold,
    regret_gap_curve,
)

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "BadBracket",
    "BadLocation",
    "BadParameter",
    "BaseMeasure",
    "CapacityResult",
    "ConvolutionUnavailable",
    "CountingWeights",
    "DensityPiece",
    "DominationVerdict",
    "ExpFamily",
    "FinitenessReport",
    "HypothesisNotMet",
    "IntegralInconclusive",
    "IntegralVerdict",
    "LimitVerdict",
    "MLInverter",
    "MLPoint",
    "MeanDiverges",
    "MeanRange",
    "NmlRegretError",
    "NoConvergence",
    "NoInteriorSolution",
    "NonFiniteIntegrand",
    "OutOfMeanRange",
    "QuadConfig",
    "RefinementVerdict",
    "RegretReport",
    "SupDivergenceResult",
    "SupportMismatch",
    "TooFewSamples",
    "TruncationOutsideDomain",
    "asymptotic_regret",
    "blahut_arimoto",
    "build_channel",
    "capacity_refinement",
    "catalog",
    "classify",
    "curve_to_csv",
    "dominated_by_member",
    "factorial_reciprocal_weights",
    "gamma_shape_density",
    "gaussian_density",
    "integrate",
    "item7_status",
    "jeffreys_canonical",
    "jeffreys_mean",
    "kl_limit_test",
    "left_end_contribution",
    "limit_extrapolate",
    "log_cauchy_density",
    "minimax_regret",
    "nfold",
    "ones_weights",
    "power_law_weights",
    "refinement_grid",
    "regret_gap_curve",
    "shtarkov_integral",
    "sum_series",
    "sup_divergence",
    "tail_alpha",
]
