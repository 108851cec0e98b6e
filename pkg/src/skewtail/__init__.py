"""skewtail: largest-singular-value laws of skew-symmetric Gaussian
matrices, with subtractivity tests for paired comparisons.

The public surface re-exported here covers the analytic distributions
(:mod:`skewtail.rmtdist`), the seeded Monte-Carlo oracle
(:mod:`skewtail.mc`), the Scheffe paired-comparison pipeline
(:mod:`skewtail.paired`), and the special functions backing them
(:mod:`skewtail.specfun`).  ``python -m skewtail.cli`` (or the
``skewtail`` script) exposes the same functionality on the command
line.
"""

from .errors import (
    DataError,
    DomainError,
    ExcludedPointError,
    MultiplicityError,
    PairingError,
    SkewtailError,
    ValidityError,
)
from .mc import (
    SampleStream,
    SingularSpectrum,
    SkewMatrix,
    TopPlane,
    empirical_upper,
    ks_distance,
    sample_skew_gaussian,
    sample_spectra,
    singular_values,
    top_plane,
)
from .paired import (
    ContrastPair,
    ScheffeFit,
    ScoreSheet,
    SkewObservations,
    TestReport,
    build_report,
    chi_square_test,
    contrast_value,
    deadlock_contrast_pair,
    largest_sv_test,
    lrt_standardized_test,
    max_deadlock,
    residual_embedding,
    scheffe_fit,
    signed_area,
    simulate_null_largest_sv,
    variance_stabilize,
)
from .rmtdist import (
    CRITICAL_POINT,
    HankelGram,
    SpectrumLaw,
    critical_radius_objective,
    critical_radius_search,
    euler_characteristic,
    hankel_gram,
    hankel_inverse_oracle,
    joint_density,
    largest_sv_cdf,
    largest_sv_tail_asymptotic,
    normalizing_constants,
    spectrum_law,
    standardized_sv_upper,
    volume_U,
)
from .specfun import beta_upper, chi2_lower, chi2_upper, log_gamma

__version__ = "0.1.0"

__all__ = [
    "CRITICAL_POINT",
    "DataError",
    "DomainError",
    "ExcludedPointError",
    "HankelGram",
    "MultiplicityError",
    "PairingError",
    "SampleStream",
    "ScheffeFit",
    "ScoreSheet",
    "SingularSpectrum",
    "SkewMatrix",
    "SkewObservations",
    "SkewtailError",
    "SpectrumLaw",
    "TestReport",
    "TopPlane",
    "ValidityError",
    "beta_upper",
    "ContrastPair",
    "build_report",
    "chi2_lower",
    "chi2_upper",
    "chi_square_test",
    "contrast_value",
    "critical_radius_objective",
    "critical_radius_search",
    "deadlock_contrast_pair",
    "empirical_upper",
    "euler_characteristic",
    "hankel_gram",
    "hankel_inverse_oracle",
    "joint_density",
    "ks_distance",
    "largest_sv_cdf",
    "largest_sv_tail_asymptotic",
    "largest_sv_test",
    "log_gamma",
    "lrt_standardized_test",
    "max_deadlock",
    "normalizing_constants",
    "residual_embedding",
    "sample_skew_gaussian",
    "sample_spectra",
    "scheffe_fit",
    "signed_area",
    "simulate_null_largest_sv",
    "singular_values",
    "spectrum_law",
    "standardized_sv_upper",
    "top_plane",
    "variance_stabilize",
    "volume_U",
]
