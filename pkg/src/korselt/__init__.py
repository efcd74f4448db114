"""Korselt rational bases of prime powers."""

from .core import (
    BaseForm,
    IntervalBaseWitness,
    KorseltSet,
    PrimePower,
    base_bounds,
    in_korselt_set,
    intersection_exponent,
    interval_is_empty,
    interval_weight,
    is_korselt,
    is_prime_power_base,
    ks_interval,
    ks_interval_neg,
    ks_interval_pos,
    ks_q_bounded,
    ks_z,
    kw_z,
    lift_base,
    mirror_base,
    witness_prime,
)
from .constructors import (
    Construction,
    GeneratedBase,
    Infeasible,
    base_family,
    bases_from_divisor,
    eligible_generators,
    feasible_primes,
    prime_power_for_base_coprime,
    prime_power_for_base_dividing,
    reciprocal_pair_holds,
    unit_fraction_bases,
)
from .errors import (
    BudgetExceeded,
    DomainExclusion,
    KorseltError,
    PreconditionError,
    RejectedInput,
    SkipParameter,
    Unfactored,
)

__version__ = "0.1.0"
