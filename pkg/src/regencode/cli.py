"""Command-line front door: tradeoff curves as CSV, construct-and-verify, and
asymptotic convergence tables.

Exit codes: 0 success, 2 verification failure, 3 input error, 4 resource
budget exceeded. All output is deterministic: exact rationals are rendered
as p/q plus a 12-significant-digit decimal column, never through floats.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import constructions
from .dss import InputError, LinearDss, ResourceError, rs_base
from .tradeoff import (
    OperatingPoint,
    RangeError,
    SystemParams,
    as_rational,
    asymptotic_fraction,
    AsymptoticSetup,
    functional_capacity,
    gamma_msr,
    max_split_count,
    p1_index_of_gamma,
    perf_p1_interpolated,
    perf_p2,
    perf_p3,
    perf_p4,
    rounded_index,
    timeshare_bound,
)
from .verifier import measure_and_compare

EXIT_OK = 0
EXIT_VERIFY_FAIL = 2
EXIT_INPUT = 3
EXIT_RESOURCE = 4

SIG_DIGITS = 12


def decimal_str(x: Fraction, sig: int = SIG_DIGITS) -> str:
    """Render an exact rational with `sig` significant digits, half-even.

    Pure integer arithmetic; trailing zeros after the point are stripped so
    the output is compact and byte-stable.
    """
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    x = abs(x)
    num, den = x.numerator, x.denominator
    e = len(str(num)) - len(str(den))
    while 10**max(e, 0) * den > num * 10**max(-e, 0):
        e -= 1
    while 10 ** max(e + 1, 0) * den <= num * 10 ** max(-(e + 1), 0):
        e += 1
    # q = sig leading digits of x, rounded half-even
    shift = sig - 1 - e
    if shift >= 0:
        scaled_num, scaled_den = num * 10**shift, den
    else:
        scaled_num, scaled_den = num, den * 10**-shift
    q, r = divmod(scaled_num, scaled_den)
    if 2 * r > scaled_den or (2 * r == scaled_den and q % 2 == 1):
        q += 1
    if q == 10**sig:
        q //= 10
        e += 1
    digits = str(q)
    if 0 <= e < sig + 3:
        intpart = digits[: e + 1].ljust(e + 1, "0")
        frac = digits[e + 1 :].rstrip("0")
        return sign + intpart + ("." + frac if frac else "")
    if -5 < e < 0:
        frac = ("0" * (-e - 1) + digits).rstrip("0")
        return sign + "0." + frac
    frac = digits[1:].rstrip("0")
    mant = digits[0] + ("." + frac if frac else "")
    return f"{sign}{mant}e{e:+d}"


def _frac_cell(x: Fraction | None) -> tuple[str, str]:
    if x is None:
        return "", ""
    return str(x), decimal_str(x)


def curve_rows(p: SystemParams, alpha: Fraction, samples: int) -> list[dict]:
    """Rows of the tradeoff curve for one (n, k, d) at fixed alpha.

    The gamma grid is `samples` uniform points over [alpha, gamma_MSR],
    merged with the discrete gammas where the P2/P3/P4 constructions are
    defined so those columns are populated; sorted ascending.
    """
    if samples < 2:
        raise RangeError("samples must be >= 2")
    g_lo, g_hi = alpha, gamma_msr(p, alpha)
    gammas = {g_lo + Fraction(t, samples - 1) * (g_hi - g_lo) for t in range(samples)}

    p2_points: dict[Fraction, Fraction] = {}
    for l in range(1, max_split_count(p) + 1):
        pt = perf_p2(p, alpha, l)
        best = p2_points.get(pt.gamma)
        if best is None or pt.file_size > best:
            p2_points[pt.gamma] = pt.file_size
    p3_points: dict[Fraction, Fraction] = {}
    for l in range(1, (p.k - 1) // 2 + 1):
        pt = perf_p3(p, alpha, l)
        best = p3_points.get(pt.gamma)
        if best is None or pt.file_size > best:
            p3_points[pt.gamma] = pt.file_size
    p4_points: dict[Fraction, Fraction] = {}
    if p.d <= p.n - 2:
        pt = perf_p4(SystemParams(p.n - 1, p.k, p.d), alpha)
        p4_points[pt.gamma] = pt.file_size

    gammas.update(p2_points)
    gammas.update(p3_points)
    gammas.update(p4_points)
    rows = []
    for g in sorted(gammas):
        x = p1_index_of_gamma(p, alpha, g)
        rows.append(
            {
                "gamma": g,
                "capacity": functional_capacity(p, alpha, g),
                "p1": perf_p1_interpolated(p, alpha, x),
                "p1_realizable": x.denominator == 1,
                "p2": p2_points.get(g),
                "p3": p3_points.get(g),
                "p4": p4_points.get(g),
                "timeshare": timeshare_bound(p, alpha, g),
            }
        )
    return rows


CURVE_HEADER = (
    "gamma,gamma_dec,capacity,capacity_dec,p1,p1_dec,p1_realizable,"
    "p2,p2_dec,p3,p3_dec,p4,p4_dec,timeshare,timeshare_dec"
)


def curve_csv(p: SystemParams, alpha: Fraction, samples: int) -> str:
    lines = [CURVE_HEADER]
    for row in curve_rows(p, alpha, samples):
        cells = list(_frac_cell(row["gamma"]))
        cells += _frac_cell(row["capacity"])
        cells += _frac_cell(row["p1"])
        cells.append("1" if row["p1_realizable"] else "0")
        cells += _frac_cell(row["p2"])
        cells += _frac_cell(row["p3"])
        cells += _frac_cell(row["p4"])
        cells += _frac_cell(row["timeshare"])
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


ASYMPTOTIC_HEADER = (
    "s,M,i,fraction,fraction_dec,h1_over_M3,h1_over_M3_dec,h2_over_M,h2_over_M_dec,"
    "h3_over_M2,h3_over_M2_dec,h4_over_M2,h4_over_M2_dec"
)


def asymptotic_csv(base: SystemParams, s_list, M_list) -> str:
    lines = [ASYMPTOTIC_HEADER]
    for s in s_list:
        for M in M_list:
            setup = AsymptoticSetup(base, s, M)
            frac, h1, h2, h3, h4 = asymptotic_fraction(setup)
            cells = [str(s), str(M), str(rounded_index(setup))]
            cells += _frac_cell(frac)
            cells += _frac_cell(h1 / M**3)
            cells += _frac_cell(h2 / M)
            cells += _frac_cell(h3 / M**2)
            cells += _frac_cell(h4 / M**2)
            lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


class RecipeError(InputError):
    """Unparseable or unknown construction recipe."""


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "(),":
            tokens.append(ch)
            i += 1
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(text[i:j])
            i = j
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(int(text[i:j]))
            i = j
        else:
            raise RecipeError(f"unexpected character {ch!r} in recipe")
    return tokens


def parse_recipe(text: str, budget: int | None = None) -> LinearDss:
    """Build the LinearDss described by a recipe string.

    Grammar: base(n,k) | blowup_simple(R) | blowup_full(R) | iterate(R,j) |
    concat(R,...) | copy_blowup(R,l) | filenode_blowup(R).
    """
    tokens = _tokenize(text)
    pos = 0

    def expect(tok):
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != tok:
            got = tokens[pos] if pos < len(tokens) else "end of input"
            raise RecipeError(f"expected {tok!r}, got {got!r}")
        pos += 1

    def parse_int():
        nonlocal pos
        if pos >= len(tokens) or not isinstance(tokens[pos], int):
            raise RecipeError("expected an integer")
        value = tokens[pos]
        pos += 1
        return value

    def parse() -> LinearDss:
        nonlocal pos
        if pos >= len(tokens) or not isinstance(tokens[pos], str):
            raise RecipeError("expected a construction name")
        name = tokens[pos]
        pos += 1
        expect("(")
        if name == "base":
            n = parse_int()
            expect(",")
            k = parse_int()
            expect(")")
            return rs_base(n, k)
        if name in ("blowup_simple", "blowup_full", "filenode_blowup"):
            inner = parse()
            expect(")")
            fn = getattr(constructions, name)
            return fn(inner, budget=budget)
        if name in ("iterate", "copy_blowup"):
            inner = parse()
            expect(",")
            arg = parse_int()
            expect(")")
            fn = getattr(constructions, name)
            return fn(inner, arg, budget=budget)
        if name == "concat":
            parts = [parse()]
            while pos < len(tokens) and tokens[pos] == ",":
                pos += 1
                parts.append(parse())
            expect(")")
            return constructions.concat(parts)
        raise RecipeError(f"unknown construction {name!r}")

    dss = parse()
    if pos != len(tokens):
        raise RecipeError(f"trailing tokens after recipe: {tokens[pos:]!r}")
    return dss


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc


def _cmd_curve(args) -> int:
    p = SystemParams(args.n, args.k, args.d)
    _write(args.out, curve_csv(p, as_rational(args.alpha), args.samples))
    return EXIT_OK


def _cmd_construct(args) -> int:
    budget = args.budget
    if budget is None and "REGEN_BUDGET" in os.environ:
        budget = int(os.environ["REGEN_BUDGET"])
    dss = parse_recipe(args.recipe, budget=budget)
    predicted = OperatingPoint(
        Fraction(dss.alpha_symbols), Fraction(dss.gamma_symbols), Fraction(dss.file_len)
    )
    report = measure_and_compare(
        dss, predicted, seed=args.seed, strict_basis=args.strict_basis
    )
    _write(args.out, report.to_json())
    return EXIT_OK if report.ok else EXIT_VERIFY_FAIL


def _cmd_asymptotic(args) -> int:
    base = SystemParams(args.n, args.k, args.d)
    s_list = [as_rational(s) for s in args.s.split(",")]
    M_list = [int(m) for m in args.M.split(",")]
    _write(args.out, asymptotic_csv(base, s_list, M_list))
    return EXIT_OK


def _cmd_compare(args) -> int:
    p = SystemParams(args.n, args.k, args.d)
    alpha = as_rational(args.alpha)
    gamma = as_rational(args.gamma)
    out = []

    def line(name, value, note=""):
        if value is None:
            out.append(f"{name:<10} -")
        else:
            suffix = f"  {note}" if note else ""
            out.append(f"{name:<10} {value}  ({decimal_str(value)}){suffix}")

    line("capacity", functional_capacity(p, alpha, gamma))
    g_hi = gamma_msr(p, alpha)
    if alpha <= gamma <= g_hi:
        line("timeshare", timeshare_bound(p, alpha, gamma))
        x = p1_index_of_gamma(p, alpha, gamma)
        line(
            "p1",
            perf_p1_interpolated(p, alpha, x),
            note=f"x={x}" + ("" if x.denominator == 1 else " interpolated"),
        )
    else:
        line("timeshare", None)
        line("p1", None)
    p2 = p3 = None
    p2_l = p3_l = None
    for l in range(1, max_split_count(p) + 1):
        pt = perf_p2(p, alpha, l)
        if pt.gamma == gamma and (p2 is None or pt.file_size > p2):
            p2, p2_l = pt.file_size, l
    for l in range(1, (p.k - 1) // 2 + 1):
        pt = perf_p3(p, alpha, l)
        if pt.gamma == gamma and (p3 is None or pt.file_size > p3):
            p3, p3_l = pt.file_size, l
    line("p2", p2, note="" if p2_l is None else f"l={p2_l}")
    line("p3", p3, note="" if p3_l is None else f"l={p3_l}")
    p4 = None
    if p.d <= p.n - 2:
        pt = perf_p4(SystemParams(p.n - 1, p.k, p.d), alpha)
        if pt.gamma == gamma:
            p4 = pt.file_size
    line("p4", p4)
    sys.stdout.write("\n".join(out) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regencode",
        description="Exact-repair regenerating codes: curves, constructions, verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_params(sp):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--d", type=int, required=True)

    sp = sub.add_parser("curve", help="emit the tradeoff curve as CSV")
    add_params(sp)
    sp.add_argument("--alpha", default="1", help="node size, rational like 1 or 3/8")
    sp.add_argument("--samples", type=int, default=50)
    sp.add_argument("--out", default="-")
    sp.set_defaults(fn=_cmd_curve)

    sp = sub.add_parser("construct", help="build a code from a recipe and verify it")
    sp.add_argument("recipe", help="e.g. blowup_full(base(3,2))")
    sp.add_argument("--out", default="-")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--strict-basis", action="store_true")
    sp.set_defaults(fn=_cmd_construct)

    sp = sub.add_parser("asymptotic", help="emit the convergence table as CSV")
    add_params(sp)
    sp.add_argument("--s", default="1", help="comma list of rationals in (0,1]")
    sp.add_argument("--M", default="100,1000,10000", help="comma list of shifts")
    sp.add_argument("--out", default="-")
    sp.set_defaults(fn=_cmd_asymptotic)

    sp = sub.add_parser("compare", help="print P1..P4 and capacity at one point")
    add_params(sp)
    sp.add_argument("--alpha", default="1")
    sp.add_argument("--gamma", required=True)
    sp.set_defaults(fn=_cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InputError, RangeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
