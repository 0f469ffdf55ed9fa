"""Exact, asymptotic, and Monte Carlo statistics of real zeros of
Gaussian elliptic random polynomials."""

__version__ = "0.1.0"

from .intervals import (AlphaParam, ExtendedInterval, FULL_LINE, alpha_of,
                        alpha_point)
from .profiles import (ProfileFunction, big_f, delta0, delta1, f0, f1, g0, g1,
                       gamma0, gamma1, h_func, limit_profiles, scaled_delta,
                       scaled_gamma)
from .quadrature import (CoefficientSet, QuadResult, QuadratureError,
                         REFERENCE_COEFFICIENTS, coefficients, integrate_adaptive,
                         k_integral, l_integral)
from .variance import (AsymptoticEstimate, ExpansionPlan, VarianceReport,
                       expansion_error_report, expected_zeros,
                       variance_asymptotic, variance_exact, variance_report)
from .kacrice import (GaussianKernel, PairIntensity, elliptic_kernel,
                      intensity1, intensity2, variance_via_kacrice)
from .montecarlo import (CltDiagnostic, CountOptions, EllipticSample,
                         RefinementFlags, SummaryStats, ZeroCountRecord,
                         clt_diagnostic, count_zeros, eval_normalized,
                         k_statistics, records_to_csv, run_experiment,
                         sample_coefficients, slln_trace, summary_to_json)

__all__ = [
    "__version__",
    "AlphaParam", "ExtendedInterval", "FULL_LINE", "alpha_of", "alpha_point",
    "ProfileFunction", "big_f", "delta0", "delta1", "f0", "f1", "g0", "g1",
    "gamma0", "gamma1", "h_func", "limit_profiles", "scaled_delta",
    "scaled_gamma",
    "CoefficientSet", "QuadResult", "QuadratureError",
    "REFERENCE_COEFFICIENTS", "coefficients", "integrate_adaptive",
    "k_integral", "l_integral",
    "AsymptoticEstimate", "ExpansionPlan", "VarianceReport",
    "expansion_error_report", "expected_zeros", "variance_asymptotic",
    "variance_exact", "variance_report",
    "GaussianKernel", "PairIntensity", "elliptic_kernel", "intensity1",
    "intensity2", "variance_via_kacrice",
    "CltDiagnostic", "CountOptions", "EllipticSample", "RefinementFlags",
    "SummaryStats", "ZeroCountRecord", "clt_diagnostic", "count_zeros",
    "eval_normalized", "k_statistics", "records_to_csv", "run_experiment",
    "sample_coefficients", "slln_trace", "summary_to_json",
]
