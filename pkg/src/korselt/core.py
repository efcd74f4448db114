"""Korselt bases of prime powers: membership, closed-form sets, bounds.

For ``N = q**l`` and a reduced ``alpha = a1/a2``, alpha is a Korselt base
of N when ``a2*q - a1`` divides ``a2*N - a1``. Since q is the only prime
divisor of N, and ``gcd(a2*q - a1, a2) == 1`` for reduced alpha, this is
the single test ``(a2*q - a1) | q*(q**(l-1) - 1)``.

Divisibility uses the convention that 0 divides only 0, so ``alpha == q``
is never a base of any ``q**l`` with ``l >= 2``.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Literal

from .errors import BudgetExceeded, DomainExclusion, PreconditionError, RejectedInput
from .exactmath import (
    DEFAULT_FACTOR_BOUND,
    as_rational,
    ceil_div,
    divisors_from_factors,
    factorize,
    floor_div,
    is_prime,
    next_prime,
    sigma0,
)

# Largest number of interval witnesses materialized before BudgetExceeded.
DEFAULT_INTERVAL_LIMIT = 2_000_000


@dataclass(frozen=True)
class PrimePower:
    q: int
    l: int

    def __post_init__(self):
        if not isinstance(self.q, int) or not is_prime(self.q):
            raise RejectedInput(f"q must be prime, got {self.q}")
        if not isinstance(self.l, int) or self.l < 2:
            raise RejectedInput(f"exponent l must be >= 2, got {self.l}")

    @property
    def value(self) -> int:
        return self.q**self.l

    @property
    def spread(self) -> int:
        """q**l - q, whose divisors parametrize every base."""
        return self.q**self.l - self.q

    def __str__(self):
        return f"{self.q}^{self.l}"


@dataclass(frozen=True)
class BaseForm:
    """The rational q + d/s with d a positive divisor of q**l - q."""

    q: int
    l: int
    d: int
    s: int

    def __post_init__(self):
        if self.d < 1 or (self.q**self.l - self.q) % self.d:
            raise RejectedInput(f"d={self.d} is not a positive divisor of {self.q}^{self.l} - {self.q}")
        if self.s == 0:
            raise RejectedInput("s must be nonzero")

    @property
    def value(self) -> Fraction:
        return self.q + Fraction(self.d, self.s)


@dataclass(frozen=True)
class KorseltSet:
    members: tuple[Fraction, ...]

    @classmethod
    def build(cls, values: Iterable, n: int | None = None) -> KorseltSet:
        """Sort and deduplicate values, dropping 0 and n."""
        excluded = {0} if n is None else {0, n}
        return cls(tuple(sorted({Fraction(v) for v in values} - excluded)))

    @property
    def weight(self) -> int:
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x):
        x = Fraction(x)
        i = bisect_left(self.members, x)
        return i < len(self.members) and self.members[i] == x

    def integers(self) -> KorseltSet:
        return KorseltSet(tuple(x for x in self.members if x.denominator == 1))

    def restrict(self, max_num_abs: int | None = None, max_den: int | None = None) -> KorseltSet:
        return KorseltSet(
            tuple(
                x
                for x in self.members
                if (max_num_abs is None or abs(x.numerator) <= max_num_abs)
                and (max_den is None or x.denominator <= max_den)
            )
        )


@dataclass(frozen=True)
class IntervalBaseWitness:
    """q - d/den, possibly written with a non-reduced den."""

    d: int
    den: int
    value: Fraction


# -- membership --------------------------------------------------------------


def _excluded(n: int, alpha: Fraction):
    if alpha == 0 or alpha == n:
        raise DomainExclusion(f"alpha={alpha} is excluded from the Korselt set of {n}")


def korselt_condition(primes: Iterable[int], n: int, num: int, den: int) -> bool:
    """Literal divisibility test on a possibly non-reduced pair num/den.

    ``den*p - num`` must divide ``den*n - num`` for every prime p given.
    """
    for p in primes:
        k = den * p - num
        v = den * n - num
        if k == 0:
            if v != 0:
                return False
        elif v % k:
            return False
    return True


def is_korselt(n: int, alpha, factor_bound: int = DEFAULT_FACTOR_BOUND) -> bool:
    """Whether n is an alpha-Korselt number, for any n >= 2."""
    if n < 2:
        raise RejectedInput(f"N must be >= 2, got {n}")
    alpha = as_rational(alpha)
    _excluded(n, alpha)
    primes = [p for p, _ in factorize(n, factor_bound)]
    return korselt_condition(primes, n, alpha.numerator, alpha.denominator)


def is_prime_power_base(pp: PrimePower, alpha) -> bool:
    alpha = as_rational(alpha)
    _excluded(pp.value, alpha)
    q = pp.q
    k = abs(alpha.denominator * q - alpha.numerator)
    if k == 0:
        return False
    return q * (pow(q, pp.l - 1, k) - 1) % k == 0


def is_prime_power_base_split(pp: PrimePower, alpha) -> bool:
    """Same verdict as is_prime_power_base, via the coprime / q-divisible split."""
    alpha = as_rational(alpha)
    _excluded(pp.value, alpha)
    q, a1, a2 = pp.q, alpha.numerator, alpha.denominator
    target = q ** (pp.l - 1) - 1
    if a1 % q:
        k = a2 * q - a1
    else:
        k = a2 - a1 // q
    if k == 0:
        return False
    return target % k == 0


def in_korselt_set(pp: PrimePower, alpha: Fraction) -> bool:
    """Membership in the Korselt set, where 0 and N are simply absent."""
    if alpha == 0 or alpha == pp.value:
        return False
    return is_prime_power_base(pp, alpha)


# -- closed forms ------------------------------------------------------------


@lru_cache(maxsize=4096)
def spread_factors(q: int, l: int, factor_bound: int = DEFAULT_FACTOR_BOUND) -> tuple[tuple[int, int], ...]:
    """Factorization of q**l - q = q * (q**(l-1) - 1); the two parts are coprime."""
    rest = q ** (l - 1) - 1
    tail = factorize(rest, factor_bound) if rest > 1 else []
    return tuple(sorted([(q, 1), *tail]))


def spread_divisors(pp: PrimePower) -> list[int]:
    return divisors_from_factors(list(spread_factors(pp.q, pp.l)))


def ks_z(pp: PrimePower) -> KorseltSet:
    """All integer bases: q +- d for positive d | q**l - q, minus 0 and N."""
    q = pp.q
    return KorseltSet.build((q + sign * d for d in spread_divisors(pp) for sign in (1, -1)), pp.value)


def kw_z(pp: PrimePower) -> int:
    """Number of integer bases, 4*sigma0(q**(l-1) - 1) - 2."""
    return 4 * sigma0(pp.q ** (pp.l - 1) - 1) - 2


def base_forms(pp: PrimePower, max_den: int) -> Iterator[BaseForm]:
    divs = spread_divisors(pp)
    for s in range(1, max_den + 1):
        for d in divs:
            yield BaseForm(pp.q, pp.l, d, s)
            yield BaseForm(pp.q, pp.l, d, -s)


def ks_q_bounded(pp: PrimePower, max_den: int) -> KorseltSet:
    """Rational bases whose reduced denominator is at most max_den."""
    if max_den < 1:
        raise RejectedInput(f"max_den must be >= 1, got {max_den}")
    return KorseltSet.build((f.value for f in base_forms(pp, max_den)), pp.value)


# -- the interval [-1, 1[ ------------------------------------------------------

Side = Literal["pos", "neg"]


def _den_range(q: int, d: int, side: Side) -> tuple[int, int]:
    if side == "pos":
        # 0 < q - d/den < 1
        return floor_div(d, q) + 1, ceil_div(d, q - 1) - 1
    # -1 <= q - d/den < 0
    return ceil_div(d, q + 1), ceil_div(d, q) - 1


def _iter_interval(pp: PrimePower, side: Side, max_den: int | None) -> Iterator[IntervalBaseWitness]:
    q = pp.q
    for d in spread_divisors(pp):
        lo, hi = _den_range(q, d, side)
        if max_den is not None:
            hi = min(hi, max_den)
        for den in range(lo, hi + 1):
            yield IntervalBaseWitness(d, den, Fraction(q * den - d, den))


def iter_interval_pos(pp: PrimePower, max_den: int | None = None) -> Iterator[IntervalBaseWitness]:
    """Lazy witnesses q - d/den covering the bases in ]0, 1[."""
    return _iter_interval(pp, "pos", max_den)


def iter_interval_neg(pp: PrimePower, max_den: int | None = None) -> Iterator[IntervalBaseWitness]:
    """Lazy witnesses q - d/den covering the bases in [-1, 0[."""
    return _iter_interval(pp, "neg", max_den)


def interval_witness_count(pp: PrimePower, side: Side, max_den: int | None = None) -> int:
    total = 0
    for d in spread_divisors(pp):
        lo, hi = _den_range(pp.q, d, side)
        if max_den is not None:
            hi = min(hi, max_den)
        total += max(0, hi - lo + 1)
    return total


def _checked(pp: PrimePower, side: Side, max_den: int | None, limit: int) -> list[IntervalBaseWitness]:
    count = interval_witness_count(pp, side, max_den)
    if count > limit:
        raise BudgetExceeded(
            f"{count} interval witnesses for {pp} ({side}) exceed the limit {limit}; pass max_den"
        )
    return list(_iter_interval(pp, side, max_den))


def ks_interval_pos(
    pp: PrimePower, max_den: int | None = None, limit: int = DEFAULT_INTERVAL_LIMIT
) -> list[IntervalBaseWitness]:
    return _checked(pp, "pos", max_den, limit)


def ks_interval_neg(
    pp: PrimePower, max_den: int | None = None, limit: int = DEFAULT_INTERVAL_LIMIT
) -> list[IntervalBaseWitness]:
    return _checked(pp, "neg", max_den, limit)


def ks_interval(pp: PrimePower, max_den: int | None = None, limit: int = DEFAULT_INTERVAL_LIMIT) -> KorseltSet:
    """Bases in [-1, 1[; empty exactly when l == 2.

    The full set grows roughly like q**(l-2), so it is materialized only
    when the witness count stays under ``limit``. ``max_den`` keeps the
    members whose reduced denominator is at most that value.
    """
    witnesses = ks_interval_pos(pp, max_den, limit) + ks_interval_neg(pp, max_den, limit)
    return KorseltSet.build((w.value for w in witnesses), pp.value)


def interval_is_empty(pp: PrimePower) -> bool:
    """Decide emptiness of the [-1, 1[ set from the den ranges alone."""
    for d in spread_divisors(pp):
        for side in ("pos", "neg"):
            lo, hi = _den_range(pp.q, d, side)
            if lo <= hi:
                return False
    return True


def _coprime_count(primes: tuple[int, ...], lo: int, hi: int) -> int:
    # inclusion-exclusion over the distinct primes of the numerator
    if hi < lo:
        return 0
    total = 0
    for r in range(len(primes) + 1):
        for combo in combinations(primes, r):
            e = math.prod(combo)
            total += (-1) ** r * (hi // e - (lo - 1) // e)
    return total


def interval_weight(pp: PrimePower, side: Side | Literal["both"] = "both") -> int:
    """Exact number of distinct bases in ]0,1[, [-1,0[ or both, without listing them.

    Each base equals q - a/b with a/b reduced and a | q**l - q, so the
    count is a sum over divisors a of the b in range coprime to a.
    """
    sides: tuple[Side, ...] = ("pos", "neg") if side == "both" else (side,)
    factors = spread_factors(pp.q, pp.l)
    total = 0
    # walk divisors together with their prime support
    stack: list[tuple[int, int, tuple[int, ...]]] = [(1, 0, ())]
    while stack:
        a, i, support = stack.pop()
        if i == len(factors):
            for sd in sides:
                lo, hi = _den_range(pp.q, a, sd)
                total += _coprime_count(support, max(lo, 1), hi)
            continue
        p, e = factors[i]
        stack.append((a, i + 1, support))
        pk = 1
        for _ in range(e):
            pk *= p
            stack.append((a * pk, i + 1, support + (p,)))
    return total


# -- bounds and structure ----------------------------------------------------


def base_bounds(pp: PrimePower, branch: Literal["coprime", "divisible"]) -> tuple[Fraction, Fraction]:
    """Range of a base coprime to q, or of alpha/q when q divides the numerator."""
    q, top = pp.q, pp.q ** (pp.l - 1)
    if branch == "coprime":
        return Fraction(1 + q - top), Fraction(top + q - 1)
    if branch == "divisible":
        return Fraction(2 - top), Fraction(top + 1, 2)
    raise RejectedInput(f"unknown branch {branch!r}")


def within_bounds(pp: PrimePower, alpha: Fraction) -> bool:
    if alpha.numerator % pp.q:
        lo, hi = base_bounds(pp, "coprime")
        return lo <= alpha <= hi
    lo, hi = base_bounds(pp, "divisible")
    return lo <= alpha / pp.q <= hi


def attaining_bases(pp: PrimePower) -> dict[str, Fraction]:
    """Four bases sitting on the bounds of base_bounds."""
    q, l = pp.q, pp.l
    return {
        "half_sum": Fraction(q**l + q, 2),
        "two_q_minus_n": Fraction(2 * q - q**l),
        "coprime_upper": Fraction(q ** (l - 1) + q - 1),
        "coprime_lower": Fraction(1 + q - q ** (l - 1)),
    }


def intersection_exponent(l: int, k: int) -> int:
    if l < 2 or k < 2:
        raise RejectedInput(f"exponents must be >= 2, got {l}, {k}")
    return math.gcd(l - 1, k - 1) + 1


def lift_base(pp: PrimePower, beta: int, s: int) -> Fraction:
    """Map an integer base beta to q + (beta - q)/s."""
    if s < 2:
        raise PreconditionError(f"s must be >= 2, got {s}")
    if beta == pp.q:
        raise PreconditionError("beta == q gives an integer lift")
    if math.gcd(s, beta - pp.q) != 1:
        raise PreconditionError(f"gcd(s, beta - q) = gcd({s}, {beta - pp.q}) != 1")
    return pp.q + Fraction(beta - pp.q, s)


def mirror_base(pp: PrimePower, alpha) -> Fraction:
    """Send a1'*q/a2 to a2*q/a1'; both or neither are bases."""
    alpha = as_rational(alpha)
    _excluded(pp.value, alpha)
    if alpha.numerator % pp.q:
        raise PreconditionError(f"numerator of {alpha} is not divisible by q={pp.q}")
    return Fraction(alpha.denominator * pp.q, alpha.numerator // pp.q)


def witness_prime(alpha) -> int:
    """Smallest prime q with alpha not a base of q**2.

    Membership in KS(q**2) forces ``(a2*q - a1) | a1*(a1 - a2)``, a nonzero
    number for alpha not in {0, 1}, so every prime above
    ``(|a1*(a1 - a2)| + |a1|) / a2`` is a witness.
    """
    alpha = as_rational(alpha)
    if alpha in (0, 1):
        raise PreconditionError("no witness prime exists for alpha in {0, 1}")
    a1, a2 = alpha.numerator, alpha.denominator
    ceiling = next_prime((abs(a1 * (a1 - a2)) + abs(a1)) // a2)
    q = 2
    while q <= ceiling:
        if not in_korselt_set(PrimePower(q, 2), alpha):
            return q
        q = next_prime(q)
    raise BudgetExceeded(f"no witness prime up to {ceiling} for {alpha}")
