"""Acceptance criteria 1-10, one PASS/FAIL line each.

Every check is exact. Each criterion also has a wall-clock ceiling, and
exceeding it fails the criterion just like a wrong value would.
"""

import subprocess
import sys
import time
from fractions import Fraction as F
from itertools import islice
from math import floor, gcd

import pytest

from korselt.constructors import (
    Infeasible,
    eligible_generators,
    feasibility_bound,
    feasible_primes,
    generate_base,
    prime_power_for_base_coprime,
    prime_power_for_base_dividing,
    reciprocal_pair_holds,
)
from korselt.core import (
    PrimePower,
    attaining_bases,
    base_bounds,
    in_korselt_set,
    intersection_exponent,
    interval_is_empty,
    interval_weight,
    is_prime_power_base,
    iter_interval_neg,
    iter_interval_pos,
    ks_interval,
    ks_q_bounded,
    ks_z,
    kw_z,
    lift_base,
    within_bounds,
)
from korselt.errors import BudgetExceeded, PreconditionError
from korselt.exactmath import primes_up_to
from korselt.oracle import ScanBox, brute_is_korselt, brute_ks_box, brute_ks_z

pytestmark = pytest.mark.acceptance


def naive_sigma0(n):
    return sum(1 for d in range(1, n + 1) if n % d == 0) if n < 10**6 else None


def finish(report, name, failures, start, limit, extra=""):
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < limit
    detail = f"{elapsed:.2f}s (limit {limit}s)"
    if extra:
        detail += f"; {extra}"
    if failures:
        detail += f"; {len(failures)} failures, first: {failures[0]}"
    report(name, ok, detail)
    assert ok, detail


def test_criterion_01_weight_formula(report):
    start = time.perf_counter()
    failures = []
    cells = 0
    for q in primes_up_to(49):
        for l in range(2, 7):
            pp = PrimePower(q, l)
            m = q ** (l - 1) - 1
            # divisor count straight from the definition when small enough
            s0 = naive_sigma0(m)
            if s0 is None:
                s0 = sum(1 for d in range(1, int(m**0.5) + 1) if m % d == 0) * 2 - (int(m**0.5) ** 2 == m)
            enumerated = ks_z(pp).weight
            cells += 1
            if not (kw_z(pp) == 4 * s0 - 2 == enumerated):
                failures.append((q, l, kw_z(pp), 4 * s0 - 2, enumerated))
    finish(report, "1 weight formula", failures, start, 5, f"{cells} cells")


def test_criterion_02_oracle_equivalence(report):
    start = time.perf_counter()
    failures = []
    outside = 0
    for q in (2, 3, 5, 7, 11, 13):
        for l in (2, 3, 4):
            pp = PrimePower(q, l)
            n = pp.value
            if list(ks_z(pp)) != list(brute_ks_z(n, n)):
                failures.append(("ks_z", q, l))
            box = ScanBox(3 * n, 6)
            closed = ks_q_bounded(pp, 6)
            if list(closed.restrict(box.max_num_abs, box.max_den)) != list(brute_ks_box(n, box)):
                failures.append(("ks_q", q, l))
            # members past the box numerator are still checked pointwise
            for x in closed:
                if abs(x.numerator) > box.max_num_abs:
                    outside += 1
                    if not brute_is_korselt(n, x):
                        failures.append(("outside", q, l, x))
    finish(report, "2 oracle equivalence", failures, start, 60, f"{outside} members beyond box checked pointwise")


def test_criterion_03_interval_emptiness(report):
    start = time.perf_counter()
    failures = []
    for q in primes_up_to(99):
        pp = PrimePower(q, 2)
        if ks_interval(pp).weight != 0 or not interval_is_empty(pp):
            failures.append(("nonempty", q, 2))
    materialized = lazy = 0
    for q in primes_up_to(29):
        for l in range(3, 9):
            pp = PrimePower(q, l)
            if interval_weight(pp) <= 0 or interval_is_empty(pp):
                failures.append(("empty", q, l))
                continue
            # exhibit members and confirm them with the oracle; the full set is
            # materialized where it fits, otherwise witnesses are drawn lazily
            try:
                ks = ks_interval(pp, limit=20_000)
                materialized += 1
                sample = list(islice(ks, 20))
                if ks.weight != interval_weight(pp):
                    failures.append(("weight", q, l))
            except BudgetExceeded:
                lazy += 1
                sample = [w.value for w in islice(iter_interval_pos(pp), 10)]
                sample += [w.value for w in islice(iter_interval_neg(pp), 10)]
            if not sample:
                failures.append(("no witness", q, l))
            for x in sample:
                if not (-1 <= x < 1 and brute_is_korselt(pp.value, x)):
                    failures.append(("bad witness", q, l, x))
    finish(report, "3 interval empty iff l=2", failures, start, 10,
           f"{materialized} materialized, {lazy} by oracle-checked witnesses")


def test_criterion_04_bound_attainment(report):
    start = time.perf_counter()
    failures = []
    checked = 0
    for q in primes_up_to(29):
        for l in range(2, 7):
            pp = PrimePower(q, l)
            att = attaining_bases(pp)
            clo, chi = base_bounds(pp, "coprime")
            dlo, dhi = base_bounds(pp, "divisible")
            targets = {
                "half_sum": (att["half_sum"] / q, dhi),
                "two_q_minus_n": (att["two_q_minus_n"] / q, dlo),
                "coprime_upper": (att["coprime_upper"], chi),
                "coprime_lower": (att["coprime_lower"], clo),
            }
            for name, (scaled, edge) in targets.items():
                x = att[name]
                if (q, l, name) == (2, 2, "two_q_minus_n"):
                    # 2q - q^l = 0 here, so only the upper bound is attained
                    if x != 0:
                        failures.append((q, l, name, x))
                    continue
                if scaled != edge or not in_korselt_set(pp, x) or not brute_is_korselt(pp.value, x):
                    failures.append((q, l, name, x))
            for x in ks_q_bounded(pp, 10):
                checked += 1
                if not within_bounds(pp, x):
                    failures.append(("bounds", q, l, x))
    finish(report, "4 bound attainment", failures, start, 10, f"{checked} members within bounds")


def test_criterion_05_structure_laws(report):
    start = time.perf_counter()
    failures = []
    for q in (2, 3, 5):
        for l, k in ((5, 7), (4, 7), (3, 5)):
            m = intersection_exponent(l, k)
            box = ScanBox(3 * q ** min(l, k), 6)
            both = set(brute_ks_box(q**l, box)) & set(brute_ks_box(q**k, box))
            target = set(brute_ks_box(q**m, box))
            # q^m lies in both larger sets but is excluded from its own
            extra = set() if m in (l, k) else {F(q**m)}
            if both != target | extra:
                failures.append(("intersection", q, l, k, sorted(both ^ target)[:5]))
            closed = set(ks_q_bounded(PrimePower(q, l), 6)) & set(ks_q_bounded(PrimePower(q, k), 6))
            if closed != set(ks_q_bounded(PrimePower(q, m), 6)) | extra:
                failures.append(("intersection closed form", q, l, k))
    pairs = [(k, l) for l in range(2, 10) for k in range(2, l + 1) if (l - 1) % (k - 1) == 0]
    for q in (2, 3, 5):
        for k, l in pairs:
            small, big = PrimePower(q, k), PrimePower(q, l)
            if not set(ks_q_bounded(small, 6)) <= set(ks_q_bounded(big, 6)):
                failures.append(("inclusion", q, k, l))
            if q ** k <= 5**4:
                for x in brute_ks_box(small.value, ScanBox(3 * small.value, 6)):
                    if not brute_is_korselt(big.value, x):
                        failures.append(("inclusion oracle", q, k, l, x))
    finish(report, "5 structure laws", failures, start, 30, f"{len(pairs)} inclusion pairs per prime")


def test_criterion_06_lifting(report):
    start = time.perf_counter()
    failures = []
    lifts = 0
    for q in (2, 3, 5, 7):
        for l in (2, 3):
            pp = PrimePower(q, l)
            for beta in ks_z(pp):
                b = int(beta)
                for s in range(2, 8):
                    if gcd(s, b - q) != 1:
                        continue
                    alpha = lift_base(pp, b, s)
                    lifts += 1
                    if in_korselt_set(pp, alpha) != in_korselt_set(pp, beta) or not brute_is_korselt(pp.value, alpha):
                        failures.append((q, l, b, s, alpha))
    finish(report, "6 lifting", failures, start, 10, f"{lifts} lifts")


def test_criterion_07_generators(report):
    start = time.perf_counter()
    failures = []
    generated = 0
    for q in primes_up_to(13):
        for l in range(2, 9):
            pp = PrimePower(q, l)
            for d in eligible_generators(l, 50):
                g = generate_base(pp, d)
                generated += 1
                if not is_prime_power_base(pp, g.value):
                    failures.append(("generator", q, l, d))
    constructed = 0
    for a in range(-30, 31):
        for b in range(1, 31):
            if a == 0 or gcd(a, b) != 1:
                continue
            x = F(a, b)
            c = prime_power_for_base_coprime(x)
            constructed += 1
            if a % c.q == 0 or not is_prime_power_base(c.prime_power, x):
                failures.append(("coprime", x, c))
    r = prime_power_for_base_dividing(F(6, 5))
    if not isinstance(r, Infeasible) or [q for q, _ in r.blocked] != [2, 3]:
        failures.append(("6/5", r))
    for x in (F(4, 3), F(9, 5)):
        c = prime_power_for_base_dividing(x)
        if not c or x.numerator % c.q or not brute_is_korselt(c.prime_power.value, x):
            failures.append(("dividing", x, c))
    finish(report, "7 generators", failures, start, 30, f"{generated} generated, {constructed} coprime constructions")


def test_criterion_08_reciprocity(report):
    start = time.perf_counter()
    failures = []
    primes = primes_up_to(23)
    for p in primes:
        for q in primes:
            if p == q:
                continue
            for l in range(2, 9):
                a, b = reciprocal_pair_holds(p, q, l, 1)
                if a != b:
                    failures.append((p, q, l, 1))
            for l in (3, 5, 7, 9):
                a, b = reciprocal_pair_holds(p, q, l, -1)
                if a != b:
                    failures.append((p, q, l, -1))
    pair = reciprocal_pair_holds(2, 3, 4, -1)
    if pair != (False, True):
        failures.append(("counterexample", pair))
    finish(report, "8 reciprocity", failures, start, 10, f"(2,3,4,-1) -> {pair}")


def test_criterion_09_feasibility(report):
    start = time.perf_counter()
    failures = []
    cells = []
    for alpha in (F(1, 2), F(3), F(-1)):
        for l in (2, 3):
            try:
                bound = feasibility_bound(alpha, l)
            except PreconditionError:
                # alpha = -1, odd l: q + 1 | q^(l-1) - 1 for every q, so no
                # finite bound exists; confirm that every prime is feasible
                if not (alpha == -1 and l % 2 == 1):
                    failures.append(("raised", alpha, l))
                if not all(is_prime_power_base(PrimePower(q, l), alpha) for q in primes_up_to(1000)):
                    failures.append(("unbounded cell", alpha, l))
                cells.append(f"{alpha}@{l}: unbounded")
                continue
            got = feasible_primes(alpha, l)
            limit = max(10 * floor(bound), 10)
            scan = [
                q for q in primes_up_to(limit)
                if alpha.numerator % q and alpha != q**l and brute_is_korselt(q**l, alpha)
            ]
            if got != scan:
                failures.append((alpha, l, got, scan))
            cells.append(f"{alpha}@{l}: {got}")
    finish(report, "9 feasibility", failures, start, 5, ", ".join(cells))


def test_criterion_10_cli_determinism(report):
    start = time.perf_counter()
    failures = []
    outputs = {}
    for fmt in ("json-lines", "csv"):
        runs = []
        for _ in range(2):
            proc = subprocess.run(
                [sys.executable, "-m", "korselt", "oracle-diff", "--format", fmt],
                capture_output=True, check=False,
            )
            if proc.returncode != 0:
                failures.append((fmt, "exit", proc.returncode, proc.stderr[-200:]))
            runs.append(proc.stdout)
        if runs[0] != runs[1]:
            failures.append((fmt, "outputs differ"))
        outputs[fmt] = runs[0]
    lines = outputs["json-lines"].count(b"\n")
    finish(report, "10 CLI determinism", failures, start, 90, f"{lines} json-lines records")
