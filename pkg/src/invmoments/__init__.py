"""Inverse moments of non-negative discrete variates.

Exact oracles by direct summation, a difference-operator expansion
around the Poisson distribution with calibrated evaluation strategies,
three historical competing series, and CLI tooling for error sweeps.
"""
from .charlier_expansion import (
    CumulantSequence,
    ExpansionPolynomial,
    barbour_error_bound,
    barbour_polynomial,
    binomial_barbour_polynomial,
    binomial_cumulants,
    binomial_factorial_cumulant,
    expand_pdf,
    first_inverse_moment_binomial,
    inverse_moment_estimate,
    taylor_polynomial,
)
from .competing import CompetitorResult, rempala, stephan, znidaric
from .exact_oracle import (
    Binomial,
    DistributionSpec,
    DomainError,
    ExplicitPdf,
    OracleValue,
    binomial_pdf,
    central_moment_binomial,
    exact_inverse_moment,
    factorial_cumulants_from_pdf,
    poisson_inverse_moment_direct,
    shifted_poisson_moment_direct,
)
from .poisson_moments import (
    CalibrationError,
    CrossoverProfile,
    ShiftedMomentTable,
    build_q_table,
    calibrate_crossover,
    er_function,
    forward_difference_at_zero,
    positive_poisson_inverse_moment,
    reference_profile,
    shifted_inverse_moment,
    y_sequence,
)
from .special_numbers import (
    Rational,
    StirlingTable,
    alpha,
    binomial_coefficient,
    harmonic,
    stirling_first,
    stirling_noncentral,
)

__version__ = "0.1.0"
