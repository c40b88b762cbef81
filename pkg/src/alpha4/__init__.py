"""Desk-scale companion computations for the factorial series of sigma_4.

The package certifies the leading digits of sum sigma_4(n)/n!, explores
the near-integer statistics of its partial-fraction tails at primes, and
provides the supporting machinery: smooth-number densities, beta-sieve
weight sandwiches, exponential-sum engines with exact rational phases,
and the enumeration of the sifted prime set with its counting families.
"""

from .arith import (
    Factorization,
    PrimeRange,
    SpfTable,
    build_spf_table,
    crt_combine,
    distance_to_nearest_integer,
    factorize,
    is_prime,
    primes_in,
    sigma_k,
)
from .bigreal import BigRealWithError
from .dickman import rho, rho_solution, rho_ten_thirds_quadrature, smooth_count
from .errors import BudgetError, PreconditionError
from .expsums import (
    PhaseSpec,
    eval_phase,
    make_basic_phase,
    make_lemma61_phase,
    make_lemma62_inner_phase,
    smoothing_window,
    weyl_difference_check,
)
from .series import alpha_k, prop1_statistic, tail_expansion
from .sieve import beta_sieve_weights, linear_F, linear_f, make_scale_params, verify_sandwich
from .special import SigmaCounters, count_sigmas, enumerate_S
from .verify import verify_all

__version__ = "0.1.0"

__all__ = [
    "BigRealWithError",
    "BudgetError",
    "Factorization",
    "PhaseSpec",
    "PreconditionError",
    "PrimeRange",
    "SigmaCounters",
    "SpfTable",
    "alpha_k",
    "beta_sieve_weights",
    "build_spf_table",
    "count_sigmas",
    "crt_combine",
    "distance_to_nearest_integer",
    "enumerate_S",
    "eval_phase",
    "factorize",
    "is_prime",
    "linear_F",
    "linear_f",
    "make_basic_phase",
    "make_lemma61_phase",
    "make_lemma62_inner_phase",
    "make_scale_params",
    "primes_in",
    "prop1_statistic",
    "rho",
    "rho_solution",
    "rho_ten_thirds_quadrature",
    "sigma_k",
    "smooth_count",
    "smoothing_window",
    "tail_expansion",
    "verify_all",
    "verify_sandwich",
    "weyl_difference_check",
    "__version__",
]
