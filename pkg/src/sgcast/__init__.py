"""Secure groupcast over generic linear keys: schemes, bounds and checks."""

from .bounds import bandwidth_lower_bound, generic_capacity, n2e2_capacity, newcon_bound, rate_upper_bound
from .construct import (
    ConstructorOutcome,
    change_of_basis,
    construct_alignment_smallN,
    construct_asymptotic_E,
    construct_asymptotic_N,
    construct_extra_entropic,
    construct_large_gamma,
    construct_n2e2,
    construct_small_gamma,
    synthesize,
)
from .gf import DEFAULT_PRIME, PrimeField
from .keymodel import Instance, entropy_profile, make_instance, named_instance, sample_generic_instance
from .scheme import LinearScheme, exact_decoding_deficit, exact_leakage, verify_feasibility

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PRIME",
    "PrimeField",
    "Instance",
    "make_instance",
    "named_instance",
    "sample_generic_instance",
    "entropy_profile",
    "LinearScheme",
    "verify_feasibility",
    "exact_leakage",
    "exact_decoding_deficit",
    "ConstructorOutcome",
    "construct_extra_entropic",
    "construct_large_gamma",
    "construct_small_gamma",
    "construct_n2e2",
    "change_of_basis",
    "construct_alignment_smallN",
    "construct_asymptotic_N",
    "construct_asymptotic_E",
    "synthesize",
    "rate_upper_bound",
    "bandwidth_lower_bound",
    "newcon_bound",
    "generic_capacity",
    "n2e2_capacity",
]
