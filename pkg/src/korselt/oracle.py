"""Brute-force reference for validating the closed forms.

Everything here works straight from the definition: factor N by plain
trial division, then test ``den*p - num | den*N - num`` for each prime p.
Nothing is shared with :mod:`korselt.core` except the result container,
so a bug in a closed form cannot hide behind a shared helper.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .core import KorseltSet
from .errors import BudgetExceeded, DomainExclusion, RejectedInput

ORACLE_TRIAL_LIMIT = 10**7


@dataclass(frozen=True)
class ScanBox:
    max_num_abs: int
    max_den: int

    def __post_init__(self):
        if self.max_num_abs < 0 or self.max_den < 1:
            raise RejectedInput(f"bad scan box {self}")


def prime_divisors(n: int) -> list[int]:
    if n < 2:
        raise RejectedInput(f"N must be >= 2, got {n}")
    out = []
    p = 2
    while p * p <= n:
        if p > ORACLE_TRIAL_LIMIT:
            raise BudgetExceeded(f"oracle cannot factor {n}")
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _passes(primes: list[int], n: int, num: int, den: int) -> bool:
    for p in primes:
        divisor = den * p - num
        dividend = den * n - num
        if divisor == 0:
            if dividend != 0:
                return False
        elif dividend % divisor != 0:
            return False
    return True


def brute_is_korselt(n: int, alpha) -> bool:
    alpha = Fraction(alpha)
    if alpha == 0 or alpha == n:
        raise DomainExclusion(f"alpha={alpha} is excluded for N={n}")
    return _passes(prime_divisors(n), n, alpha.numerator, alpha.denominator)


def brute_ks_box(n: int, box: ScanBox) -> KorseltSet:
    """Every reduced a/b in the box that is a base of n."""
    primes = prime_divisors(n)
    found = []
    for b in range(1, box.max_den + 1):
        for a in range(-box.max_num_abs, box.max_num_abs + 1):
            if a == 0 or gcd(a, b) != 1 or (b == 1 and a == n):
                continue
            if _passes(primes, n, a, b):
                found.append(Fraction(a, b))
    return KorseltSet(tuple(sorted(found)))


def brute_ks_z(n: int, radius: int) -> KorseltSet:
    """Integer bases of n in [-radius, radius]."""
    return brute_ks_box(n, ScanBox(radius, 1))
