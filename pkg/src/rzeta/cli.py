"""``rzeta`` command line.

Exit codes: 0 ok, 1 invariant failure, 2 usage or invalid digit set,
3 parameter outside the half-plane of convergence, 4 unsupported
configuration (including an unreachable accuracy under ``--max-terms``).
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

import mpmath

from . import checks
from .digitset import DigitSet, parse_digit_spec
from .errors import DigitSpecError, DomainError, PrecisionError, UnsupportedConfiguration
from .moments import build_moment_table
from .numerics import BOUND, ComplexParameter, PrecisionContext, inflate
from .series import DEFAULT_MAX_TERMS, default_level, evaluate_series

EXIT_OK, EXIT_INVARIANT, EXIT_USAGE, EXIT_DOMAIN, EXIT_UNSUPPORTED = 0, 1, 2, 3, 4

REPORT_KEYS = ("params", "value_re", "value_im", "error_bound", "terms", "level", "elapsed_ms", "method")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse already exits 2; keep the message on stderr
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fixed(x, decimals: int, mp) -> str:
    """``x`` rounded to ``decimals`` places after the point, no exponent."""
    scaled = int(mp.nint(x * mp.mpf(10) ** decimals))
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(decimals + 1, "0")
    if decimals == 0:
        return sign + digits
    return f"{sign}{digits[:-decimals]}.{digits[-decimals:]}"


def bound_str(x) -> str:
    """Three significant digits, rounded up so the string still bounds ``x``."""
    x = inflate(x)
    if x == 0:
        return "0.00e+00"
    e = int(BOUND.floor(BOUND.log10(x)))
    mant = int(BOUND.ceil(x / BOUND.mpf(10) ** (e - 2)))
    if mant >= 1000:
        mant, e = 100, e + 1
    if mant < 100:  # log10 landed just above an exact power of ten
        mant, e = mant * 10, e - 1
    s = str(mant)
    return f"{s[0]}.{s[1:]}e{e:+03d}"


def _common(p: argparse.ArgumentParser, *, digits_flag: bool) -> None:
    p.add_argument("--s", required=True, help='"<sigma>", "<sigma>+<t>i" or "<sigma>-<t>i"')
    p.add_argument("--base", type=int, default=2)
    if digits_flag:
        p.add_argument("--digits", default="all", help='"all" or e.g. "0-8", "1,3,7"')
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--digits-out", type=int, default=50)
    p.add_argument("--max-terms", type=int, default=DEFAULT_MAX_TERMS)
    p.add_argument("--threads", type=int, default=None, help="default: $RZETA_THREADS or 1")
    p.add_argument("--json", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rzeta", description="Zeta and digit-restricted Dirichlet series.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _common(sub.add_parser("zeta", help="Riemann zeta(s), Re s > 1"), digits_flag=False)
    _common(sub.add_parser("kempner", help="sum of n^-s over digit-restricted n"), digits_flag=True)

    p = sub.add_parser("moments", help="dump the rescaled moment table as JSON rows")
    p.add_argument("--s", required=True)
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--digits", default="all")
    p.add_argument("--m", type=int, default=20, help="largest moment index")
    p.add_argument("--digits-out", type=int, default=30)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("mgf-check", help="moment generating function identities")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("check", help="run invariant families")
    p.add_argument("--family", action="append", choices=sorted(checks.FAMILIES))
    p.add_argument("--sigma", type=Fraction, default=None)
    p.add_argument("--t", type=Fraction, default=None)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("bench", help="term counts over t and recurrence cost over M")
    p.add_argument("--sigma", type=Fraction, default=Fraction(2))
    p.add_argument("--t-grid", default="0,20,50")
    p.add_argument("--m-grid", default="100,200,400")
    p.add_argument("--digits-out", type=int, default=30)
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--json", action="store_true")
    return parser


def _emit(obj, as_json: bool, out) -> None:
    if as_json:
        json.dump(obj, out, indent=2)
        out.write("\n")
        return
    width = max(len(k) for k in obj)
    for k, v in obj.items():
        if isinstance(v, dict):
            v = ", ".join(f"{a}={b}" for a, b in v.items())
        out.write(f"{k.ljust(width)}  {v}\n")


def _series_report(ds: DigitSet, args, digit_spec: str) -> dict:
    s = ComplexParameter.parse(args.s)
    level = args.level if args.level is not None else default_level(ds.base)
    start = time.perf_counter()
    r = evaluate_series(ds, s, level, digits=args.digits_out, max_terms=args.max_terms,
                        threads=args.threads)
    elapsed = time.perf_counter() - start
    mp = r.ctx.mp
    d = args.digits_out
    params = {
        "command": args.command,
        "base": ds.base,
        "digits": digit_spec,
        "s": args.s,
        "level": level,
        "digits_out": d,
        "max_terms": args.max_terms,
        "bracket": None,
    }
    if r.bracket is not None:
        lo, hi = r.bracket
        # widen outward by one unit in the last printed place
        pad = mp.mpf(10) ** -d
        params["bracket"] = {"lower": fixed(lo - pad, d, mp), "upper": fixed(hi + pad, d, mp)}
    return {
        "params": params,
        "value_re": fixed(mp.re(r.value), d, mp),
        "value_im": fixed(mp.im(r.value), d, mp),
        "error_bound": bound_str(r.error_bound),
        "terms": r.terms_used,
        "level": r.level,
        "elapsed_ms": round(elapsed * 1000, 3),
        "method": "moment-series",
    }


def cmd_zeta(args, out) -> int:
    ds = DigitSet.full(args.base)
    _emit(_series_report(ds, args, "all"), args.json, out)
    return EXIT_OK


def cmd_kempner(args, out) -> int:
    ds = parse_digit_spec(args.digits, args.base)
    _emit(_series_report(ds, args, args.digits), args.json, out)
    return EXIT_OK


def cmd_moments(args, out) -> int:
    ds = parse_digit_spec(args.digits, args.base)
    s = ComplexParameter.parse(args.s)
    ctx = PrecisionContext.for_terms(args.digits_out, args.m, ds.base,
                                     extra=int(abs(float(s.t))) // 2)
    table = build_moment_table(ds, s, args.m, ctx)
    mp = ctx.mp
    rows = []
    for m in range(args.m + 1):
        u = mp.mpc(table.u_star(m))
        c = mp.mpc(table.normalized[m])
        rows.append({
            "m": m,
            "u_star_re": mpmath.nstr(u.real, args.digits_out),
            "u_star_im": mpmath.nstr(u.imag, args.digits_out),
            "c_re": mpmath.nstr(c.real, args.digits_out),
            "c_im": mpmath.nstr(c.imag, args.digits_out),
        })
    if args.json:
        json.dump(rows, out, indent=2)
        out.write("\n")
    else:
        for row in rows:
            out.write(f"{row['m']:>5}  {row['u_star_re']}  {row['u_star_im']}\n")
    return EXIT_OK


def _report_checks(results, as_json: bool, out) -> int:
    failed = [r for r in results if not r.ok]
    if as_json:
        json.dump([r.__dict__ for r in results], out, indent=2)
        out.write("\n")
    else:
        for r in results:
            tail = f"  at {r.detail}" if r.detail else ""
            out.write(f"{'PASS' if r.ok else 'FAIL'}  [{r.family}] {r.name}{tail}\n")
        out.write(f"{len(results) - len(failed)}/{len(results)} passed\n")
    return EXIT_INVARIANT if failed else EXIT_OK


def cmd_mgf_check(args, out) -> int:
    return _report_checks(checks.run_family("mgf"), args.json, out)


def cmd_check(args, out) -> int:
    names = args.family or list(checks.FAMILIES)
    results = []
    for name in names:
        results += checks.run_family(name, sigma=args.sigma, t=args.t)
    return _report_checks(results, args.json, out)


def _grid(text: str, kind):
    try:
        return [kind(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from exc


def cmd_bench(args, out) -> int:
    t_rows = checks.bench_t_grid(args.sigma, _grid(args.t_grid, Fraction), args.digits_out, args.base)
    m_rows = checks.bench_m_grid(_grid(args.m_grid, int), args.sigma, args.base, args.digits_out)
    if args.json:
        json.dump({"t_rows": t_rows, "m_rows": m_rows}, out, indent=2)
        out.write("\n")
        return EXIT_OK
    out.write(f"{'t':>8} {'terms':>7} {'planned':>8} {'ms':>10}\n")
    for r in t_rows:
        out.write(f"{r['t']:>8} {r['terms_needed']:>7} {r['planned']:>8} {r['elapsed_ms']:>10.1f}\n")
    out.write(f"\n{'M':>8} {'ms':>10}\n")
    for r in m_rows:
        out.write(f"{r['M']:>8} {r['elapsed_ms']:>10.1f}\n")
    return EXIT_OK


COMMANDS = {
    "zeta": cmd_zeta,
    "kempner": cmd_kempner,
    "moments": cmd_moments,
    "mgf-check": cmd_mgf_check,
    "check": cmd_check,
    "bench": cmd_bench,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except (DigitSpecError, argparse.ArgumentTypeError) as exc:
        print(f"rzeta: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"rzeta: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (UnsupportedConfiguration, PrecisionError) as exc:
        print(f"rzeta: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ValueError as exc:  # e.g. unparsable --s
        print(f"rzeta: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
