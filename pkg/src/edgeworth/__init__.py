"""Explicit non-asymptotic Edgeworth-expansion and Berry-Esseen bounds for
standardized sums of independent random variables, with test-calibration
applications and an exact/Monte-Carlo validation oracle."""

__version__ = "0.1.0"

from .bounds import (BoundResult, bound_BE, bound_BE_shevtsova, bound_EE1,
                     bound_EE1_with_integral, remainder_r1, remainder_r2,
                     remainder_r3)
from .inference import (BoundSpec, DistortionVerdict, PValueBracket,
                        classify_distortion, classify_distortion_at,
                        edgeworth_cdf, n_max, pvalue_bracket)
from .kernel import (CHI1, T1_STAR, THETA1_STAR, VerifiedConstant,
                     charfn_envelope, chi1, derive_sup_constants, psi,
                     psi_minus_pole, t1_star)
from .moments import (MomentProfile, RegularityAssumption, derived_quantities,
                      make_profile)
from .oracle import (DiscreteDistribution, SupDistanceEstimate, exact_moments,
                     exact_sn_cdf, sup_distance_exact, sup_distance_mc)
from .specfun import (backend, gamma_lower_ext, gamma_upper, std_normal,
                      std_normal_quantile)

__all__ = [
    "BoundResult", "BoundSpec", "CHI1", "DiscreteDistribution",
    "DistortionVerdict", "MomentProfile", "PValueBracket",
    "RegularityAssumption", "SupDistanceEstimate", "T1_STAR", "THETA1_STAR",
    "VerifiedConstant", "backend", "bound_BE", "bound_BE_shevtsova",
    "bound_EE1", "bound_EE1_with_integral", "charfn_envelope", "chi1",
    "classify_distortion", "classify_distortion_at", "derive_sup_constants",
    "derived_quantities", "edgeworth_cdf", "exact_moments", "exact_sn_cdf",
    "gamma_lower_ext", "gamma_upper", "make_profile", "n_max", "psi",
    "psi_minus_pole", "pvalue_bracket", "remainder_r1", "remainder_r2",
    "remainder_r3", "std_normal", "std_normal_quantile", "sup_distance_exact",
    "sup_distance_mc", "t1_star",
]
