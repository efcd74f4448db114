"""Exact integer and rational helpers.

Rationals are :class:`fractions.Fraction` values. A ``Fraction`` is always
stored reduced with a positive denominator, which is exactly the canonical
form the Korselt predicates assume, so no separate rational class is kept.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from itertools import accumulate

from .errors import BudgetExceeded, RejectedInput, Unfactored

Rational = Fraction
FactorList = list[tuple[int, int]]

# Trial-division bound used by factorize() when the caller gives none.
DEFAULT_FACTOR_BOUND = 10**9
# Trial divisors is_prime() may spend above the Miller-Rabin range.
DEFAULT_PRIME_BUDGET = 10**6

# Miller-Rabin with the first 13 prime bases is exact below this value
# (Sorenson & Webster 2015). Above it is_prime() falls back to trial division.
MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_SMALL_PRIMES = _MR_BASES
# (limit, number of leading prime bases that suffice below it)
_MR_TIERS = (
    (3_215_031_751, 4),
    (2_152_302_898_747, 5),
    (3_474_749_660_383, 6),
    (341_550_071_728_321, 7),
    (3_825_123_056_546_413_051, 9),
    (318_665_857_834_031_151_167_461, 12),
    (MR_DETERMINISTIC_LIMIT, 13),
)
# Cofactors below this are finished by trial division alone.
_CERTIFY_FROM = 1 << 20

_RATIONAL_RE = re.compile(r"\s*(-?\d+)(?:\s*/\s*(\d+))?\s*")


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def reduce(num: int, den: int) -> Fraction:
    """Canonical form of num/den: coprime parts, positive denominator."""
    if den == 0:
        raise RejectedInput(f"zero denominator in {num}/{den}")
    return Fraction(num, den)


def as_rational(value) -> Fraction:
    """Coerce an int, Fraction or 'a/b' string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise RejectedInput(f"not an exact rational: {value!r}")


def parse_rational(text: str) -> Fraction:
    """Parse ``a`` or ``a/b`` with an optional leading minus."""
    m = _RATIONAL_RE.fullmatch(text)
    if m is None:
        raise RejectedInput(f"malformed rational {text!r}; expected 'a' or 'a/b'")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    return reduce(num, den)


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def floor_div(a: int, b: int) -> int:
    if b <= 0:
        raise RejectedInput(f"divisor must be positive, got {b}")
    return a // b


def ceil_div(a: int, b: int) -> int:
    if b <= 0:
        raise RejectedInput(f"divisor must be positive, got {b}")
    return -((-a) // b)


def _miller_rabin(n: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    nbases = next(k for limit, k in _MR_TIERS if n < limit)
    for a in _MR_BASES[:nbases]:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _trial_candidates(start: int = 5):
    """Odd candidates 5, 7, 11, 13, ... (the 6k +- 1 wheel)."""
    d = start
    step = 2 if d % 6 == 5 else 4
    while True:
        yield d
        d += step
        step = 6 - step


def is_prime(n: int, budget: int = DEFAULT_PRIME_BUDGET) -> bool:
    """Deterministic primality test.

    Below ``MR_DETERMINISTIC_LIMIT`` this is a Miller-Rabin test with a
    witness set proven complete for that range. Larger inputs are trial
    divided; if no factor turns up below ``budget`` and ``isqrt(n)`` lies
    beyond it, :class:`BudgetExceeded` is raised rather than guessing.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < MR_DETERMINISTIC_LIMIT:
        return _miller_rabin(n)
    root = math.isqrt(n)
    for d in _trial_candidates(43):
        if d > root:
            return True
        if d > budget:
            raise BudgetExceeded(f"primality of {n} needs trial division past {budget}")
        if n % d == 0:
            return False
    raise AssertionError("unreachable")


def _certified(n: int) -> bool | None:
    """True/False when primality of n is known without trial division, else None."""
    if n < _CERTIFY_FROM:
        return None
    if n < MR_DETERMINISTIC_LIMIT:
        return is_prime(n)
    return None


def factorize(n: int, bound: int = DEFAULT_FACTOR_BOUND) -> FactorList:
    """Prime factorization by trial division up to ``bound``.

    Returns ``[(p, e), ...]`` with ascending primes. A cofactor that is
    neither split below ``bound`` nor certified prime raises
    :class:`Unfactored`; a partial answer is never returned.
    """
    if n < 2:
        raise RejectedInput(f"factorize needs n >= 2, got {n}")
    factors: FactorList = []
    m = n
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    if m > 1 and _certified(m):
        factors.append((m, 1))
        return factors
    d, step = 5, 2
    while m > 1:
        if d * d > m:
            factors.append((m, 1))
            break
        if d > bound:
            raise Unfactored(n, m, bound)
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            factors.append((d, e))
            if m > 1 and _certified(m):
                factors.append((m, 1))
                break
        d += step
        step = 6 - step
    return factors


def divisors_from_factors(factors: FactorList) -> list[int]:
    divs = [1]
    for p, e in factors:
        powers = list(accumulate([p] * e, lambda acc, x: acc * x))
        divs = divs + [d * pk for pk in powers for d in divs]
    divs.sort()
    return divs


def divisors(n: int, bound: int = DEFAULT_FACTOR_BOUND) -> list[int]:
    """Positive divisors of n in ascending order, built from its factorization."""
    if n <= 0:
        raise RejectedInput(f"divisors needs n >= 1, got {n}")
    if n == 1:
        return [1]
    return divisors_from_factors(factorize(n, bound))


def sigma0(n: int, bound: int = DEFAULT_FACTOR_BOUND) -> int:
    if n <= 0:
        raise RejectedInput(f"sigma0 needs n >= 1, got {n}")
    if n == 1:
        return 1
    return math.prod(e + 1 for _, e in factorize(n, bound))


def euler_phi(n: int, bound: int = DEFAULT_FACTOR_BOUND) -> int:
    if n <= 0:
        raise RejectedInput(f"euler_phi needs n >= 1, got {n}")
    if n == 1:
        return 1
    return math.prod((p - 1) * p ** (e - 1) for p, e in factorize(n, bound))


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    c = max(n + 1, 2)
    while not is_prime(c):
        c += 1
    return c


def primes_up_to(limit: int) -> list[int]:
    """Sieve of Eratosthenes."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]
