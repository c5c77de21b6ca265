"""The thirteen acceptance criteria, one test each.

Every test records a PASS/FAIL line (shown in the terminal summary and, with
``-s``, inline) and then asserts, so a failing criterion fails the run.
"""
import itertools
import math
import random
import time
from fractions import Fraction

import mpmath

from rzeta.checks import bench_t_grid, bracket_alternates, domination_violations
from rzeta.digitset import DigitSet
from rzeta.mgf import (
    evaluate_F,
    fourier_coefficient_quadrature,
    functional_equation_residual,
    taylor_coefficients,
)
from rzeta.moments import build_moment_table, moment_closed_form, normalized_moments_exact
from rzeta.numerics import BOUND, ComplexParameter, PrecisionContext, to_mp
from rzeta.oracle import double_precision_closed_form_demo, restricted_sum_bracket, zeta_reference
from rzeta.series import evaluate_series, limit_identity_log2


def _e(x) -> str:
    return mpmath.nstr(BOUND.mpf(abs(x)), 3)


def test_01_zeta2_hundred_digits(record):
    start = time.perf_counter()
    r = evaluate_series(DigitSet.full(2), 2, 3, digits=100)
    elapsed = time.perf_counter() - start
    mp = r.ctx.mp
    err = abs(r.value - mp.pi**2 / 6)
    ok = err < mp.mpf(10) ** -100 and elapsed < 10
    record(1, ok, f"|zeta(2) - pi^2/6| = {_e(err)}, {elapsed:.2f} s, {r.terms_used} terms")
    assert ok


def test_02_zeta_oracle_agreement(record):
    worst = BOUND.zero
    ok = True
    for s in ("3", "2.5", "2+3i", "2+10i"):
        r = evaluate_series(DigitSet.full(2), s, digits=50)
        ref = r.ctx.mp.mpmathify(zeta_reference(s, 60))
        d = BOUND.mpf(abs(r.value - ref))
        ok &= d <= r.error_bound + BOUND.mpf(10) ** -59 and d < BOUND.mpf(10) ** -45
        worst = max(worst, d)
    record(2, ok, f"max |series - eta reference| = {_e(worst)}")
    assert ok


def test_03_base_invariance(record):
    vals = [evaluate_series(DigitSet.full(b), 3, digits=50).value for b in (2, 3, 10)]
    spread = max(abs(a - b) for a, b in itertools.combinations(vals, 2))
    ok = spread < mpmath.mpf(10) ** -45
    record(3, ok, f"zeta(3) via b=2,3,10 spread {_e(spread)}")
    assert ok


def test_04_level_invariance(record):
    rs = [evaluate_series(DigitSet.full(2), "2.5", level, digits=50) for level in (2, 3, 4, 5)]
    within = all(
        BOUND.mpf(abs(a.value - b.value)) <= a.error_bound + b.error_bound
        for a, b in itertools.combinations(rs, 2)
    )
    spread = max(abs(a.value - b.value) for a, b in itertools.combinations(rs, 2))
    ok = within and spread < mpmath.mpf(10) ** -45
    record(4, ok, f"levels 2..5 spread {_e(spread)}, within summed bounds: {within}")
    assert ok


def test_05_kempner_no_nine(record):
    ds = DigitSet(10, tuple(range(9)))
    r2 = evaluate_series(ds, 1, 2, digits=50)
    r3 = evaluate_series(ds, 1, 3, digits=50)
    br = restricted_sum_bracket(ds, 1, 7)
    inside = br.lower <= float(r2.value) <= br.upper
    d = abs(r2.value - r3.value)
    ok = inside and d < mpmath.mpf(10) ** -40
    record(5, ok, f"K = {mpmath.nstr(r2.value, 20)} in [{br.lower:.6f}, {br.upper:.6f}], "
                  f"|l2 - l3| = {_e(d)}")
    assert ok


def test_06_log2_identity(record):
    ctx = PrecisionContext(40, 20)
    ref = mpmath.MPContext()
    ref.dps = 80
    d = abs(limit_identity_log2(2, 120, ctx) - ref.log(2))
    ok = d < mpmath.mpf(10) ** -30
    record(6, ok, f"|identity - log 2| = {_e(d)}")
    assert ok


def test_07_constant_sequence(record):
    c = normalized_moments_exact(DigitSet.full(2), 1, 50)
    ok = all(x == 1 and isinstance(x, Fraction) for x in c)
    record(7, ok, "exact c_m = 1 for m <= 50" if ok else f"c = {c[:5]}...")
    assert ok


def test_08_bound_sandwich(record):
    violations = []
    for b in (2, 10):
        for sigma in (Fraction(11, 10), 2, 3, 5):
            ctx = PrecisionContext.for_terms(40, 200, b)
            table = build_moment_table(DigitSet.full(b), sigma, 200, ctx)
            mp = ctx.mp
            bs = mp.power(b, to_mp(Fraction(sigma), mp))
            lo, hi = 1 / (bs - b), bs / (bs - b)
            violations += [(b, sigma, m) for m in range(201) if not lo < table.u_star(m) <= hi]
    ok = not violations
    record(8, ok, f"{len(violations)} violations over b in (2,10), 4 sigmas, m <= 200"
           + (f"; first {violations[0]}" if violations else ""))
    assert ok


def test_09_normalized_domination(record):
    rng = random.Random(20240229)
    sets = [DigitSet.full(2), DigitSet.full(10), DigitSet(10, tuple(range(9))),
            DigitSet(10, (1, 3, 7)), DigitSet(3, (0, 2))]
    violations = []
    for _ in range(100):
        ds = rng.choice(sets)
        lo = ds.abscissa
        sigma = Fraction(rng.uniform(lo, 6)).limit_denominator(1000)
        if sigma <= lo:
            sigma += Fraction(1, 1000)
        t = Fraction(rng.uniform(-50, 50)).limit_denominator(1000)
        s = ComplexParameter(sigma, t)
        bad = domination_violations(ds, s, 150)
        violations += [(ds.spec(), ds.base, str(s), m) for m in bad]
    ok = not violations
    record(9, ok, f"{len(violations)} violations of |c_m(s)| <= c_m(sigma) in 100 random s, m <= 150"
           + (f"; first {violations[0]}" if violations else ""))
    assert ok


def test_10_closed_form(record):
    ctx = PrecisionContext(80, 20)  # 100 working digits
    worst = BOUND.zero
    for s in (ComplexParameter(2), ComplexParameter(3), ComplexParameter(4, 5)):
        table = build_moment_table(DigitSet.full(2), s, 60, ctx)
        for m in range(61):
            worst = max(worst, BOUND.mpf(abs(moment_closed_form(2, s, m, ctx) - table.u(m))))
    rel_cf, rel_rec = double_precision_closed_form_demo(2, 3, 30)
    ok = worst < BOUND.mpf(10) ** -60 and rel_cf > 1e3 * rel_rec
    record(10, ok, f"max |closed form - recurrence| = {_e(worst)}; binary64 at m=30: "
                   f"closed form {rel_cf:.2e} vs recurrence {rel_rec:.2e}")
    assert ok


def test_11_alternating_bracket(record):
    failures = []
    for sigma in (Fraction(3, 2), 2, 3, 6):
        ref = zeta_reference(sigma, 45)
        for level in (2, 3, 4, 5):
            ok, where = bracket_alternates(DigitSet.full(2), sigma, level, 30, limit=ref)
            if not ok:
                failures.append(where)
    ok = not failures
    record(11, ok, "partial sums alternate around zeta(sigma) for sigma in (1.5,2,3,6), levels 2..5"
           if ok else f"failures at {failures}")
    assert ok


def test_12_mgf_suite(record):
    ctx = PrecisionContext(30, 10)  # 40 working digits
    tight = BOUND.mpf(10) ** -36
    ds = DigitSet.full(2)
    rng = random.Random(5)
    ts = []
    while len(ts) < 20:
        t = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        if abs(t) <= 5:
            ts.append(t)
    fe = max(functional_equation_residual(ds, 2, t, ctx, eps=tight) for t in ts)

    coeffs = taylor_coefficients(ds, 2, 11, ctx)
    table = build_moment_table(ds, 2, 10, PrecisionContext(30, 20))
    taylor = max(abs(coeffs[m] * math.factorial(m) - table.u(m)) for m in range(11))

    period = max(
        abs(evaluate_F(ds, 3, t, ctx, eps=tight).value - evaluate_F(ds, 3, 2 * t, ctx, eps=tight).value)
        for t in (0.5, 0.8, 1.3, 2.0)
    )

    qctx = PrecisionContext(30, 10)
    q, _, _ = fourier_coefficient_quadrature(ds, 3, 0, qctx, tol=1e-12)
    mp = qctx.mp
    fourier = abs(q - 2 * mp.zeta(3) / mp.log(2))

    ok = (fe < BOUND.mpf(10) ** -30 and taylor < BOUND.mpf(10) ** -25
          and period < BOUND.mpf(10) ** -20 and fourier < BOUND.mpf(10) ** -8)
    record(12, ok, f"FE {_e(fe)}, Taylor {_e(taylor)}, periodicity {_e(period)}, Fourier {_e(fourier)}")
    assert ok


def test_13_term_growth(record):
    rows = bench_t_grid(2, [0, 20, 50], 30)
    terms = [r["terms_needed"] for r in rows]
    ok = terms[0] < terms[1] < terms[2]
    record(13, ok, f"terms for t = 0, 20, 50: {terms}")
    assert ok


if __name__ == "__main__":
    def _print(n, ok, detail):
        print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn(_print)
            except AssertionError:
                failed += 1
    raise SystemExit(1 if failed else 0)
