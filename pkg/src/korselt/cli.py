"""Command-line interface.

Exit status: 0 success, 1 domain/precondition/usage error, 2 closed form
and oracle disagree, 3 a budget was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import re
import sys
import time
from dataclasses import asdict, dataclass, is_dataclass
from fractions import Fraction
from typing import Any, Callable

from . import constructors as cons
from . import core, oracle
from .core import PrimePower
from .errors import BudgetExceeded, KorseltError, RejectedInput
from .exactmath import DEFAULT_FACTOR_BOUND, format_rational, parse_rational, primes_up_to

EXIT_OK, EXIT_DOMAIN, EXIT_MISMATCH, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_SEED = 20170
FORMATS = ("table", "json-lines", "csv")


class UsageError(KorseltError):
    pass


class Mismatch(Exception):
    """Raised after output is written when a cross-check failed."""


@dataclass
class OutputRecord:
    command: str
    inputs: dict
    result: Any
    provenance: str = "closed_form"
    timing_ms: float | None = None
    note: str | None = None


def jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str, float)):
        return x
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, core.KorseltSet):
        return [format_rational(v) for v in x]
    if isinstance(x, cons.Infeasible):
        return {"infeasible": True, "base": format_rational(x.base),
                "blocked": [{"q": q, "reason": why} for q, why in x.blocked]}
    if is_dataclass(x):
        return {k: jsonable(v) for k, v in asdict(x).items()}
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def record_dict(rec: OutputRecord) -> dict:
    return {
        "command": rec.command,
        "inputs": jsonable(rec.inputs),
        "result": jsonable(rec.result),
        "provenance": rec.provenance,
        "timing_ms": rec.timing_ms,
        "note": rec.note,
    }


def _cell(value) -> str:
    if isinstance(value, str):
        return value
    return json.dumps(value, separators=(",", ":"))


def emit(records: list[OutputRecord], fmt: str) -> str:
    """Render records as an aligned table, JSON lines or CSV."""
    rows = [record_dict(r) for r in records]
    if fmt == "json-lines":
        return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["command", "inputs", "provenance", "timing_ms", "result"])
        for r in rows:
            head = [r["command"], _cell(r["inputs"]), r["provenance"],
                    "" if r["timing_ms"] is None else r["timing_ms"]]
            # sets get one row per member
            values = r["result"] if isinstance(r["result"], list) else [r["result"]]
            for v in values:
                w.writerow(head + [_cell(v)])
        return buf.getvalue()
    if fmt == "table":
        header = ["command", "inputs", "result", "provenance"]
        body = []
        for r in rows:
            inputs = " ".join(f"{k}={_cell(v)}" for k, v in r["inputs"].items())
            res = r["result"]
            if isinstance(res, list):
                shown = "{" + ", ".join(_cell(v) for v in res) + "}"
            else:
                shown = _cell(res)
            if r["note"]:
                shown += f"  ({r['note']})"
            line = [r["command"], inputs, shown, r["provenance"]]
            if r["timing_ms"] is not None:
                line[-1] += f" {r['timing_ms']}ms"
            body.append(line)
        widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
        fmt_row = lambda row: "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
        lines = [fmt_row(header), fmt_row(["-" * w for w in widths]), *map(fmt_row, body)]
        return "\n".join(lines) + "\n"
    raise UsageError(f"unsupported format {fmt!r}")


# -- argument parsing --------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except RejectedInput as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _sign(text: str) -> int:
    v = int(text)
    if v not in (1, -1):
        raise argparse.ArgumentTypeError("sign must be 1 or -1")
    return v


HANDLERS: dict[str, Callable[[argparse.Namespace], list[OutputRecord]]] = {}


def command(name):
    def deco(fn):
        HANDLERS[name] = fn
        return fn
    return deco


def _pp(a) -> PrimePower:
    return PrimePower(a.q, a.l)


@command("check")
def _check(a):
    if a.n is not None:
        n = a.n
    elif a.q is not None and a.l is not None:
        n = a.q**a.l
    else:
        raise UsageError("check needs --n, or --q and --l")
    if a.oracle:
        return [OutputRecord("check", {"n": n, "alpha": a.alpha}, oracle.brute_is_korselt(n, a.alpha), "oracle")]
    if a.n is None:
        res = core.is_prime_power_base(_pp(a), a.alpha)
    else:
        res = core.is_korselt(n, a.alpha, a.factor_bound)
    return [OutputRecord("check", {"n": n, "alpha": a.alpha}, res)]


@command("set-z")
def _set_z(a):
    pp = _pp(a)
    if a.oracle:
        return [OutputRecord("set-z", {"q": a.q, "l": a.l}, oracle.brute_ks_z(pp.value, pp.value), "oracle")]
    return [OutputRecord("set-z", {"q": a.q, "l": a.l}, core.ks_z(pp))]


@command("set-q")
def _set_q(a):
    pp = _pp(a)
    inputs = {"q": a.q, "l": a.l, "max_den": a.max_den}
    if a.oracle:
        box = oracle.ScanBox(a.max_num if a.max_num is not None else 3 * pp.value, a.max_den)
        inputs["max_num"] = box.max_num_abs
        return [OutputRecord("set-q", inputs, oracle.brute_ks_box(pp.value, box), "oracle")]
    result = core.ks_q_bounded(pp, a.max_den)
    if a.max_num is not None:
        inputs["max_num"] = a.max_num
        result = result.restrict(max_num_abs=a.max_num)
    return [OutputRecord("set-q", inputs, result)]


@command("set-interval")
def _set_interval(a):
    pp = _pp(a)
    inputs = {"q": a.q, "l": a.l, "side": a.side, "max_den": a.max_den}
    if a.side == "both":
        result = core.ks_interval(pp, a.max_den)
    else:
        fn = core.ks_interval_pos if a.side == "pos" else core.ks_interval_neg
        result = core.KorseltSet.build((w.value for w in fn(pp, a.max_den)), pp.value)
    return [OutputRecord("set-interval", inputs, result, note="empty iff l=2")]


@command("weight")
def _weight(a):
    pp = _pp(a)
    if a.interval:
        return [OutputRecord("weight", {"q": a.q, "l": a.l, "set": "interval"}, core.interval_weight(pp))]
    return [OutputRecord("weight", {"q": a.q, "l": a.l, "set": "z"}, core.kw_z(pp))]


@command("bounds")
def _bounds(a):
    pp = _pp(a)
    branches = ("coprime", "divisible") if a.branch == "both" else (a.branch,)
    return [OutputRecord("bounds", {"q": a.q, "l": a.l, "branch": b}, list(core.base_bounds(pp, b)))
            for b in branches]


@command("intersect")
def _intersect(a):
    return [OutputRecord("intersect", {"l": a.l, "k": a.k}, core.intersection_exponent(a.l, a.k))]


@command("lift")
def _lift(a):
    pp = _pp(a)
    alpha = core.lift_base(pp, a.beta, a.s)
    beta_member = core.in_korselt_set(pp, Fraction(a.beta))
    res = {"value": alpha, "member": core.in_korselt_set(pp, alpha), "beta_member": beta_member}
    return [OutputRecord("lift", {"q": a.q, "l": a.l, "beta": a.beta, "s": a.s}, res)]


@command("mirror")
def _mirror(a):
    pp = _pp(a)
    image = core.mirror_base(pp, a.alpha)
    res = {"value": image, "member": core.is_prime_power_base(pp, a.alpha),
           "image_member": core.in_korselt_set(pp, image)}
    return [OutputRecord("mirror", {"q": a.q, "l": a.l, "alpha": a.alpha}, res)]


@command("generate")
def _generate(a):
    pp = _pp(a)
    if a.d is not None:
        if a.m is None:
            res = cons.generate_base(pp, a.d)
        else:
            res = cons.bases_from_divisor(pp, a.d, a.m)
        return [OutputRecord("generate", {"q": a.q, "l": a.l, "d": a.d, "m": a.m}, res)]
    return [OutputRecord("generate", {"q": a.q, "l": a.l, "bound": a.bound}, cons.generated_bases(pp, a.bound))]


@command("find-powers")
def _find_powers(a):
    out = []
    if a.route in ("coprime", "both"):
        out.append(OutputRecord("find-powers", {"alpha": a.alpha, "route": "coprime"},
                                cons.prime_power_for_base_coprime(a.alpha, a.max_exponent)))
    if a.route in ("dividing", "both"):
        res = cons.prime_power_for_base_dividing(a.alpha, a.max_exponent)
        note = None if res else "no prime divisor of the numerator admits this base"
        out.append(OutputRecord("find-powers", {"alpha": a.alpha, "route": "dividing"}, res, note=note))
    return out


@command("family")
def _family(a):
    res = cons.base_family(a.alpha, a.count, a.max_exponent)
    return [OutputRecord("family", {"alpha": a.alpha, "count": a.count}, res)]


@command("unit-fractions")
def _unit_fractions(a):
    return [OutputRecord("unit-fractions", {"q": a.q, "l": a.l}, cons.unit_fraction_bases(_pp(a)))]


@command("reciprocity")
def _reciprocity(a):
    pair = cons.reciprocal_pair_holds(a.p, a.q, a.l, a.sign)
    contract = a.sign == 1 or a.l % 2 == 1
    note = None if contract else "equivalence not claimed for sign -1 with even l"
    rec = OutputRecord("reciprocity", {"p": a.p, "q": a.q, "l": a.l, "sign": a.sign}, list(pair), note=note)
    if contract and pair[0] != pair[1]:
        rec.note = "equivalence violated"
        raise Mismatch([rec])
    return [rec]


@command("feasible-primes")
def _feasible(a):
    return [OutputRecord("feasible-primes", {"alpha": a.alpha, "l": a.l}, cons.feasible_primes(a.alpha, a.l))]


@command("witness-prime")
def _witness(a):
    return [OutputRecord("witness-prime", {"alpha": a.alpha}, core.witness_prime(a.alpha))]


def _diff(closed: core.KorseltSet, brute: core.KorseltSet) -> dict:
    c, b = set(closed), set(brute)
    return {
        "match": c == b,
        "closed_form": len(c),
        "oracle": len(b),
        "missing": sorted(b - c),
        "extra": sorted(c - b),
    }


@command("oracle-diff")
def _oracle_diff(a):
    records = []
    ok = True

    def add(inputs, result):
        nonlocal ok
        ok = ok and result["match"]
        records.append(OutputRecord("oracle-diff", inputs, result, "oracle"))

    qs = a.q if a.q is not None else primes_up_to(49)
    ls = a.l if a.l is not None else [2, 3, 4, 5, 6]
    for q in qs:
        for l in ls:
            pp = PrimePower(q, l)
            zset = core.ks_z(pp)
            formula = core.kw_z(pp)
            verified = all(oracle.brute_is_korselt(pp.value, x) for x in zset)
            add({"q": q, "l": l, "check": "weight"},
                {"match": formula == zset.weight and verified, "closed_form": formula, "oracle": zset.weight,
                 "members_verified": verified})
            if pp.value > a.scan_limit:
                continue
            add({"q": q, "l": l, "check": "set-z"}, _diff(zset, oracle.brute_ks_z(pp.value, pp.value)))
            box = oracle.ScanBox(a.num_factor * pp.value, a.max_den)
            closed = core.ks_q_bounded(pp, a.max_den).restrict(box.max_num_abs, box.max_den)
            add({"q": q, "l": l, "check": "set-q", "max_num": box.max_num_abs, "max_den": box.max_den},
                _diff(closed, oracle.brute_ks_box(pp.value, box)))
    if a.samples:
        rng = random.Random(a.seed)
        grid = [PrimePower(q, l) for q in qs for l in ls if q**l <= a.scan_limit]
        bad = []
        for _ in range(a.samples):
            pp = rng.choice(grid)
            alpha = Fraction(rng.randint(-3 * pp.value, 3 * pp.value), rng.randint(1, 12))
            if alpha == 0 or alpha == pp.value:
                continue
            if core.is_prime_power_base(pp, alpha) != oracle.brute_is_korselt(pp.value, alpha):
                bad.append({"q": pp.q, "l": pp.l, "alpha": alpha})
        add({"check": "sampled", "samples": a.samples, "seed": a.seed},
            {"match": not bad, "disagreements": bad})
    if not ok:
        raise Mismatch(records)
    return records


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--output", help="write records to this file instead of stdout")
    common.add_argument("--timing", action="store_true", help="fill in timing_ms (breaks byte-identical output)")
    common.add_argument("--factor-bound", type=int, default=DEFAULT_FACTOR_BOUND,
                        help="trial-division bound for factorization (default: 10^9)")

    parser = _Parser(prog="korselt", description="Korselt bases of prime powers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    def qlq(p):
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--l", type=int, required=True)

    p = add("check", "is N an alpha-Korselt number")
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--oracle", action="store_true")

    p = add("set-z", "integer Korselt set of q^l")
    qlq(p)
    p.add_argument("--oracle", action="store_true")

    p = add("set-q", "rational Korselt set with bounded denominator")
    qlq(p)
    p.add_argument("--max-den", type=int, default=10)
    p.add_argument("--max-num", type=int)
    p.add_argument("--oracle", action="store_true")

    p = add("set-interval", "Korselt set inside [-1, 1[")
    qlq(p)
    p.add_argument("--side", choices=("both", "pos", "neg"), default="both")
    p.add_argument("--max-den", type=int)

    p = add("weight", "integer Korselt weight (or the [-1,1[ weight)")
    qlq(p)
    p.add_argument("--interval", action="store_true")

    p = add("bounds", "bounds on bases of q^l")
    qlq(p)
    p.add_argument("--branch", choices=("coprime", "divisible", "both"), default="both")

    p = add("intersect", "exponent m with KS(q^l) & KS(q^k) = KS(q^m)")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = add("lift", "lift an integer base to q + (beta - q)/s")
    qlq(p)
    p.add_argument("--beta", type=int, required=True)
    p.add_argument("--s", type=int, required=True)

    p = add("mirror", "map a1'q/a2 to a2 q/a1'")
    qlq(p)
    p.add_argument("--alpha", type=_rational, required=True)

    p = add("generate", "bases generated by d with phi(d) | l-1")
    qlq(p)
    p.add_argument("--d", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--bound", type=int, default=50)

    p = add("find-powers", "prime powers admitting alpha")
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--route", choices=("coprime", "dividing", "both"), default="both")
    p.add_argument("--max-exponent", type=int, default=cons.DEFAULT_MAX_EXPONENT)

    p = add("family", "several prime powers admitting alpha")
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--max-exponent", type=int, default=cons.DEFAULT_MAX_EXPONENT)

    p = add("unit-fractions", "bases +-1/q^(s-1)")
    qlq(p)

    p = add("reciprocity", "sign/p in KS(q^l) vs sign/q in KS(p^l)")
    p.add_argument("--p", type=int, required=True)
    qlq(p)
    p.add_argument("--sign", type=_sign, default=1)

    p = add("feasible-primes", "all primes q coprime to a1 with alpha in KS(q^l)")
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--l", type=int, required=True)

    p = add("witness-prime", "smallest q with alpha not in KS(q^2)")
    p.add_argument("--alpha", type=_rational, required=True)

    p = add("oracle-diff", "compare closed forms against the brute-force oracle")
    p.add_argument("--q", type=_int_list, help="primes, comma separated (default: all below 50)")
    p.add_argument("--l", type=_int_list, help="exponents, comma separated (default: 2..6)")
    p.add_argument("--max-den", type=int, default=6)
    p.add_argument("--num-factor", type=int, default=3, help="box numerator bound is this times q^l")
    p.add_argument("--scan-limit", type=int, default=13**4,
                   help="run the full box scans only when q^l is at most this")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return parser


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


_NEG_FRACTION = re.compile(r"-\d+/\d+")


def _glue_negative_fractions(argv: list[str]) -> list[str]:
    # argparse takes "-1/2" for a flag; bind it to the preceding option
    out: list[str] = []
    for tok in argv:
        if out and _NEG_FRACTION.fullmatch(tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def run(argv: list[str] | None = None) -> int:
    argv = _glue_negative_fractions(sys.argv[1:] if argv is None else list(argv))
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_DOMAIN

    status = EXIT_OK
    start = time.perf_counter()
    try:
        records = HANDLERS[args.command](args)
    except Mismatch as exc:
        records = exc.args[0]
        status = EXIT_MISMATCH
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (RejectedInput, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.timing:
        elapsed = round((time.perf_counter() - start) * 1000, 3)
        for r in records:
            r.timing_ms = elapsed
    try:
        _write(emit(records, args.format), args.output)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return status


def main() -> None:
    raise SystemExit(run())
