"""Constructive routes: bases from totient data, prime powers from bases."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from .core import PrimePower, is_prime_power_base
from .errors import BudgetExceeded, PreconditionError, SkipParameter
from .exactmath import as_rational, divisors, euler_phi, factorize, next_prime, primes_up_to

# Exponents above this are refused rather than verified.
DEFAULT_MAX_EXPONENT = 100_000

CaseTag = Literal["below_q", "multiple_of_q", "mixed"]
Route = Literal["coprime_route", "dividing_route"]


@dataclass(frozen=True)
class GeneratedBase:
    d: int
    case_tag: CaseTag
    m: int
    value: Fraction


@dataclass(frozen=True)
class Construction:
    base: Fraction
    q: int
    l: int
    route: Route

    @property
    def prime_power(self) -> PrimePower:
        return PrimePower(self.q, self.l)


@dataclass(frozen=True)
class Infeasible:
    """No prime divisor of the numerator admits the base; reasons keyed by prime."""

    base: Fraction
    blocked: tuple[tuple[int, str], ...] = field(default=())

    def __bool__(self):
        return False


def eligible_generators(l: int, bound: int) -> list[int]:
    """All d <= bound with phi(d) dividing l - 1."""
    if l < 2:
        raise PreconditionError(f"l must be >= 2, got {l}")
    return [d for d in range(1, bound + 1) if (l - 1) % euler_phi(d) == 0]


def bases_from_divisor(pp: PrimePower, d: int, m: int) -> GeneratedBase:
    """The base generated by d for parameter m.

    Writing d = t*q + r:
      * t == 0:  (m*q - r) / m         for m >= 1
      * r == 0:  m*q / (t + m)         for m >= 1 (the split t = (t+m) - m)
      * else:    (m*q - r) / (t + m)   for any m with t + m != 0
    """
    if d < 1:
        raise PreconditionError(f"d must be positive, got {d}")
    if (pp.l - 1) % euler_phi(d):
        raise PreconditionError(f"phi({d}) does not divide l - 1 = {pp.l - 1}")
    q = pp.q
    t, r = divmod(d, q)
    if t == 0:
        tag: CaseTag = "below_q"
        num, den = m * q - r, m
    elif r == 0:
        tag = "multiple_of_q"
        num, den = m * q, t + m
    else:
        tag = "mixed"
        num, den = m * q - r, t + m
    if tag != "mixed" and m < 1:
        raise SkipParameter(f"case {tag} needs m >= 1, got {m}")
    if den == 0:
        raise SkipParameter(f"m={m} gives a zero denominator")
    value = Fraction(num, den)
    if value == 0 or value == pp.value:
        raise SkipParameter(f"m={m} gives the excluded value {value}")
    if not is_prime_power_base(pp, value):
        # only reachable when q**2 divides d, where d need not divide q**l - q
        raise SkipParameter(f"m={m} gives {value}, which is not a base of {pp}")
    return GeneratedBase(d, tag, m, value)


def generate_base(pp: PrimePower, d: int, max_m: int | None = None) -> GeneratedBase:
    """First verified base for d, trying m = 1, 2, ..."""
    limit = max_m if max_m is not None else d + 1
    for m in range(1, limit + 1):
        try:
            return bases_from_divisor(pp, d, m)
        except SkipParameter:
            continue
    raise BudgetExceeded(f"no m in 1..{limit} yields a base of {pp} from d={d}")


def generated_bases(pp: PrimePower, bound: int) -> list[GeneratedBase]:
    return [generate_base(pp, d) for d in eligible_generators(pp.l, bound)]


def _check_exponent(l: int, max_exponent: int):
    if l > max_exponent:
        raise BudgetExceeded(f"exponent {l} exceeds the budget {max_exponent}")


def _coprime_construction(alpha: Fraction, p: int, max_exponent: int) -> Construction:
    k1 = alpha.denominator * p - alpha.numerator
    k = euler_phi(k1) + 1
    _check_exponent(k, max_exponent)
    c = Construction(alpha, p, k, "coprime_route")
    assert is_prime_power_base(c.prime_power, alpha), c
    return c


def prime_power_for_base_coprime(alpha, max_exponent: int = DEFAULT_MAX_EXPONENT) -> Construction:
    """A prime power p**k admitting alpha with p coprime to the numerator.

    p is the smallest prime above |a1|, so k1 = a2*p - a1 is positive and
    coprime to p; then k1 | p**phi(k1) - 1 and k = phi(k1) + 1 works.
    """
    alpha = as_rational(alpha)
    if alpha == 0:
        raise PreconditionError("alpha must be nonzero")
    return _coprime_construction(alpha, next_prime(abs(alpha.numerator)), max_exponent)


def prime_power_for_base_dividing(alpha, max_exponent: int = DEFAULT_MAX_EXPONENT) -> Construction | Infeasible:
    """A prime power q**l admitting alpha with q dividing the numerator.

    Writing a1 = a1'*q, the base works for q**l exactly when
    (a2 - a1') | q**(l-1) - 1. That needs q not to divide a2 - a1'; when every
    prime divisor of a1 fails this, an :class:`Infeasible` report is returned.
    """
    alpha = as_rational(alpha)
    a1, a2 = alpha.numerator, alpha.denominator
    if abs(a1) <= 1:
        raise PreconditionError(f"numerator of {alpha} has no prime divisor")
    blocked = []
    for q, _ in factorize(abs(a1)):
        diff = a2 - a1 // q
        if diff == 0:
            blocked.append((q, "alpha equals q, which is never a base"))
            continue
        if diff % q == 0:
            blocked.append((q, f"q divides a2 - a1/q = {diff}"))
            continue
        step = euler_phi(abs(diff))
        l = step + 1
        if alpha == q**l:
            l += step
        _check_exponent(l, max_exponent)
        c = Construction(alpha, q, l, "dividing_route")
        assert is_prime_power_base(c.prime_power, alpha), c
        return c
    return Infeasible(alpha, tuple(blocked))


def base_family(alpha, count: int, max_exponent: int = DEFAULT_MAX_EXPONENT) -> list[Construction]:
    """count distinct prime powers admitting alpha.

    From the coprime seed p**l1 the exponents l1 + j*(l1 - 1) all work, since
    (l1 - 1) | (l - 1). Once they pass max_exponent the next prime is seeded.
    """
    alpha = as_rational(alpha)
    if alpha == 0:
        raise PreconditionError("alpha must be nonzero")
    if count < 1:
        raise PreconditionError(f"count must be >= 1, got {count}")
    out: list[Construction] = []
    seed = prime_power_for_base_coprime(alpha, max_exponent)
    while len(out) < count:
        l, step = seed.l, seed.l - 1
        while len(out) < count and l <= max_exponent:
            c = Construction(alpha, seed.q, l, "coprime_route")
            assert is_prime_power_base(c.prime_power, alpha), c
            out.append(c)
            l += step
        seed = _coprime_construction(alpha, next_prime(seed.q), max_exponent)
    return out


def unit_fraction_bases(pp: PrimePower) -> list[Fraction]:
    """1/q**(s-1) for s | l-1, and -1/q**(s-1) when (l-1)/s is also even."""
    out = set()
    for s in divisors(pp.l - 1):
        out.add(Fraction(1, pp.q ** (s - 1)))
        if ((pp.l - 1) // s) % 2 == 0:
            out.add(Fraction(-1, pp.q ** (s - 1)))
    for x in out:
        assert is_prime_power_base(pp, x), (pp, x)
    return sorted(out)


def reciprocal_pair_holds(p: int, q: int, l: int, sign: int) -> tuple[bool, bool]:
    """(sign/p is a base of q**l, sign/q is a base of p**l).

    The two agree for sign = +1, and for sign = -1 when l is odd.
    """
    if p == q:
        raise PreconditionError("p and q must be distinct")
    if sign not in (1, -1):
        raise PreconditionError(f"sign must be +1 or -1, got {sign}")
    return (
        is_prime_power_base(PrimePower(q, l), Fraction(sign, p)),
        is_prime_power_base(PrimePower(p, l), Fraction(sign, q)),
    )


def feasibility_bound(alpha, l: int) -> Fraction:
    """alpha + |alpha*a1**(l-2) - a2**(l-2)|; no coprime prime above it admits alpha."""
    alpha = as_rational(alpha)
    if alpha in (0, 1):
        raise PreconditionError("the bound is undefined for alpha in {0, 1}")
    if l < 2:
        raise PreconditionError(f"l must be >= 2, got {l}")
    a1, a2 = alpha.numerator, alpha.denominator
    if a1 ** (l - 1) == a2 ** (l - 1):
        # alpha == -1 with l odd: q + 1 | q**(l-1) - 1 for every q
        raise PreconditionError(f"alpha={alpha} is a base of q^{l} for every prime q; no finite bound")
    return alpha + abs(alpha * a1 ** (l - 2) - a2 ** (l - 2))


def feasible_primes(alpha, l: int) -> list[int]:
    """Every prime q coprime to the numerator with alpha a base of q**l."""
    alpha = as_rational(alpha)
    bound = math.floor(feasibility_bound(alpha, l))
    a1 = alpha.numerator
    return [q for q in primes_up_to(bound) if a1 % q and is_prime_power_base(PrimePower(q, l), alpha)]
