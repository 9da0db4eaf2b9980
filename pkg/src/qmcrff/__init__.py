"""Quasi-Monte Carlo and adaptive frequency sequences for random Fourier
feature maps of shift-invariant kernels, with a closed-form box-discrepancy
error measure and its optimizers."""

from .adaptive import (
    OptimizerOptions,
    OptTrace,
    discrepancy_gradient,
    nonlinear_cg,
    optimize_global,
    optimize_greedy,
    optimize_weights,
)
from .densities import FrequencySet, ProductDensity, characteristic, exact_kernel, transform
from .discrepancy import (
    AverageCaseReport,
    Box,
    DiscrepancyReport,
    assemble_H_v,
    average_case_mc_check,
    box_discrepancy_gaussian,
    box_discrepancy_quadrature,
    expected_mc_discrepancy,
    sinc_kernel,
    weighted_discrepancy,
)
from .featmap import (
    GramErrorReport,
    WeightedFeatureMap,
    approx_kernel,
    feature_matrix,
    feature_vector,
    gram_approx,
    gram_exact,
    real_feature_matrix,
    real_feature_vector,
    relative_errors,
    spectral_norm,
)
from .ioutil import DataError, NumericalError
from .sequences import (
    UnitPointSet,
    halton,
    lattice,
    mc_uniform,
    radical_inverse,
    star_discrepancy_bruteforce,
)
from .specfun import cauchy_quantile, erf_complex_real, erf_real, normal_quantile, re_erf_damped

__version__ = "0.1.0"

__all__ = [
    "AverageCaseReport",
    "Box",
    "DataError",
    "DiscrepancyReport",
    "FrequencySet",
    "GramErrorReport",
    "NumericalError",
    "OptTrace",
    "OptimizerOptions",
    "ProductDensity",
    "UnitPointSet",
    "WeightedFeatureMap",
    "approx_kernel",
    "assemble_H_v",
    "average_case_mc_check",
    "box_discrepancy_gaussian",
    "box_discrepancy_quadrature",
    "cauchy_quantile",
    "characteristic",
    "discrepancy_gradient",
    "erf_complex_real",
    "erf_real",
    "exact_kernel",
    "expected_mc_discrepancy",
    "feature_matrix",
    "feature_vector",
    "gram_approx",
    "gram_exact",
    "halton",
    "lattice",
    "mc_uniform",
    "nonlinear_cg",
    "normal_quantile",
    "optimize_global",
    "optimize_greedy",
    "optimize_weights",
    "radical_inverse",
    "re_erf_damped",
    "real_feature_matrix",
    "real_feature_vector",
    "relative_errors",
    "sinc_kernel",
    "spectral_norm",
    "star_discrepancy_bruteforce",
    "transform",
    "weighted_discrepancy",
]
