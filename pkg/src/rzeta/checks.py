"""Invariant families run by ``rzeta check`` and the timing rows of ``rzeta bench``.

Each family yields :class:`CheckResult` records; a failing record names the
offending ``(digit set, s, m)`` in its detail string.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .digitset import (
    DigitSet,
    admissible_below,
    admissible_in_block,
    power_sums,
)
from .moments import (
    build_moment_table,
    lower_bound_u_star,
    moment_closed_form,
    normalized_moments_exact,
    bound_u_star,
)
from .numerics import BOUND, ComplexParameter, PrecisionContext, bernoulli, to_mp
from .oracle import restricted_sum_bracket, zeta_reference
from .series import evaluate_series, limit_identity_log2

__all__ = [
    "CheckResult",
    "FAMILIES",
    "run_family",
    "bracket_alternates",
    "domination_violations",
    "bench_t_grid",
    "bench_m_grid",
]


@dataclass(frozen=True)
class CheckResult:
    family: str
    name: str
    ok: bool
    detail: str = ""


def _fmt(x) -> str:
    return BOUND.nstr(BOUND.mpf(abs(x)), 3)


def _where(ds: DigitSet, s, m=None) -> str:
    out = f"(b={ds.base}, A={ds.spec()}, s={s}"
    return out + (f", m={m})" if m is not None else ")")


def family_digitset(**_) -> Iterator[CheckResult]:
    cases = [DigitSet.full(2), DigitSet(10, tuple(range(9))), DigitSet(10, (1,)), DigitSet(7, (0, 3, 5))]
    for ds in cases:
        for level in range(1, 5):
            block = list(admissible_in_block(ds, level))
            ok = len(block) == ds.N1 * ds.N ** (level - 1)
            ok &= all(ds.is_admissible(n) for n in block)
            ok &= list(admissible_below(ds, level)) + block == list(admissible_below(ds, level + 1))
            yield CheckResult("digitset", f"block b={ds.base} A={ds.spec()} l={level}", ok)
        S = power_sums(ds, 50)
        ok = all(S[j] == sum(a**j for a in ds.digits) for j in range(51))
        yield CheckResult("digitset", f"power sums b={ds.base} A={ds.spec()}", ok)


def family_bernoulli(**_) -> Iterator[CheckResult]:
    for m in range(1, 61):
        total = sum(math.comb(m + 1, j) * bernoulli(j) for j in range(m + 1))
        if total != 0:
            yield CheckResult("bernoulli", "recurrence", False, f"m={m}")
            return
    yield CheckResult("bernoulli", "recurrence m<=60", True)


def _sandwich(ds: DigitSet, sigma, M: int) -> CheckResult:
    s = ComplexParameter.of(sigma)
    ctx = PrecisionContext.for_terms(30, M, ds.base)
    table = build_moment_table(ds, s, M, ctx)
    mp = ctx.mp
    sig = to_mp(s.sigma, mp)
    bs = mp.power(ds.base, sig)
    lo, hi = 1 / (bs - ds.N), bs / (bs - ds.N)
    if not ds.is_full:
        hi = None
    for m in range(M + 1):
        u = table.u_star(m)
        low = lower_bound_u_star(ds, s, m) if not ds.is_full else lo
        if not u > low or (hi is not None and u > hi) or BOUND.mpf(u) > bound_u_star(ds, s, m):
            return CheckResult("bounds", f"sandwich {_where(ds, s)}", False, _where(ds, s, m))
    return CheckResult("bounds", f"sandwich {_where(ds, s)}, m<={M}", True)


def domination_violations(ds: DigitSet, s, M: int, ctx: PrecisionContext | None = None) -> list[int]:
    """Indices ``m`` where ``|u_m(s)/u_0(s)|`` exceeds its real-parameter counterpart."""
    s = ComplexParameter.of(s)
    ctx = ctx or PrecisionContext.for_terms(30, M, ds.base, extra=int(abs(float(s.t))) // 2)
    table = build_moment_table(ds, s, M, ctx)
    real = build_moment_table(ds, ComplexParameter(s.sigma), M, ctx)
    slack = 1 + ctx.mp.mpf(10) ** -(ctx.target_digits - 5)
    return [m for m in range(M + 1)
            if abs(table.raw_normalized(m)) > real.raw_normalized(m) * slack]


def family_bounds(sigma=None, t=None, **_) -> Iterator[CheckResult]:
    sigmas = [Fraction(sigma)] if sigma is not None else [Fraction(11, 10), 2, 3, 5]
    for b in (2, 10):
        for sg in sigmas:
            if sg > 1:
                yield _sandwich(DigitSet.full(b), sg, 200)
    ds9 = DigitSet(10, tuple(range(9)))
    yield _sandwich(ds9, 1 if sigma is None else sigmas[0], 60)
    ts = [Fraction(t)] if t is not None else [Fraction(0), Fraction(7, 2), 10, 50]
    for ds in (DigitSet.full(2), DigitSet.full(10), ds9):
        for sg in sigmas:
            for tt in ts:
                s = ComplexParameter(sg, tt)
                try:
                    bad = domination_violations(ds, s, 150)
                except ValueError:  # below the abscissa for this set
                    continue
                yield CheckResult("bounds", f"domination {_where(ds, s)}", not bad,
                                  "" if not bad else _where(ds, s, bad[0]))


def family_closed_form(**_) -> Iterator[CheckResult]:
    ctx = PrecisionContext(100, 40)
    for s in (ComplexParameter(2), ComplexParameter(3), ComplexParameter(4, 5)):
        table = build_moment_table(DigitSet.full(2), s, 60, ctx)
        worst, at = BOUND.zero, 0
        for m in range(61):
            d = BOUND.mpf(abs(moment_closed_form(2, s, m, ctx) - table.u(m)))
            if d > worst:
                worst, at = d, m
        ok = worst < BOUND.mpf(10) ** -60
        yield CheckResult("closed-form", f"b=2 s={s} m<=60 max diff {_fmt(worst)}", ok,
                          "" if ok else _where(DigitSet.full(2), s, at))


def family_constant(**_) -> Iterator[CheckResult]:
    c = normalized_moments_exact(DigitSet.full(2), 1, 50)
    yield CheckResult("moments", "b=2 s=1 exact c_m = 1 for m<=50", all(x == 1 for x in c))


def family_series(**_) -> Iterator[CheckResult]:
    digits = 40
    for s in ("3", "2.5", "2+3i"):
        r = evaluate_series(DigitSet.full(2), s, digits=digits)
        ref = zeta_reference(s, digits + 10)
        d = abs(r.ctx.mp.mpc(ref) - r.value)
        ok = BOUND.mpf(d) <= r.error_bound + BOUND.mpf(10) ** -(digits + 5)
        yield CheckResult("series", f"zeta oracle s={s} diff {_fmt(d)}", ok)
    vals = [evaluate_series(DigitSet.full(2), "2.5", level, digits=digits) for level in (2, 3, 4, 5)]
    spread = max(BOUND.mpf(abs(a.value - b.value)) - a.error_bound - b.error_bound
                 for a in vals for b in vals)
    yield CheckResult("series", "level invariance b=2 s=2.5", spread <= 0)
    ds9 = DigitSet(10, tuple(range(9)))
    kem = evaluate_series(ds9, 1, 2, digits=30)
    br = restricted_sum_bracket(ds9, 1, 5)
    yield CheckResult("series", "kempner no-9 inside enumeration bracket",
                      br.lower <= float(kem.value) <= br.upper)
    for sigma in (Fraction(3, 2), 2, 3, 6):
        ok, where = bracket_alternates(DigitSet.full(2), sigma, 3, digits=30,
                                       limit=zeta_reference(sigma, 40))
        yield CheckResult("series", f"alternating bracket sigma={sigma}", ok, where)


def bracket_alternates(ds: DigitSet, sigma, level: int, digits: int = 30,
                       limit=None) -> tuple[bool, str]:
    """Check that partial sums past the head alternate around the limit.

    Even-count partial sums must lie above it and odd-count ones below, so
    each consecutive pair encloses it.  ``limit`` defaults to the series
    value itself; pass an independent reference when one exists.
    """
    r = evaluate_series(ds, sigma, level, digits=digits, early_exit=False, keep_partial_sums=True)
    mp = r.ctx.mp
    limit = r.value if limit is None else mp.mpf(limit)
    tol = mp.mpf(r.error_bound) + mp.mpf(10) ** -(digits + 5)
    parts = r.partial_sums
    for m, p in enumerate(parts):
        # once a step is within the tolerance, the side is no longer observable
        if m + 1 < len(parts) and abs(parts[m + 1] - p) <= 4 * tol:
            break
        above = p >= limit - tol if m % 2 == 0 else p <= limit + tol
        if not above:
            return False, _where(ds, sigma, m)
    return True, ""


def family_log2(**_) -> Iterator[CheckResult]:
    ctx = PrecisionContext(40, 20)
    d = abs(limit_identity_log2(2, 120, ctx) - ctx.mp.log(2))
    yield CheckResult("log2", f"s=1 identity l=2 M=120 diff {_fmt(d)}", d < BOUND.mpf(10) ** -30)


def family_mgf(**_) -> Iterator[CheckResult]:
    from . import mgf

    ctx = PrecisionContext(30, 10)  # 40 working digits
    tight = BOUND.mpf(10) ** -36
    rng = random.Random(7)
    ds = DigitSet.full(2)
    worst = max(
        mgf.functional_equation_residual(
            ds, 2, complex(rng.uniform(-3.5, 3.5), rng.uniform(-3.5, 3.5)), ctx, eps=tight)
        for _ in range(10)
    )
    yield CheckResult("mgf", f"functional equation residual {_fmt(worst)}", worst < BOUND.mpf(10) ** -30)
    coeffs = mgf.taylor_coefficients(ds, 2, 11, ctx)
    table = build_moment_table(ds, 2, 10, PrecisionContext(30, 20))
    d = max(abs(coeffs[m] * math.factorial(m) - table.u(m)) for m in range(11))
    yield CheckResult("mgf", f"Taylor coefficients vs moments {_fmt(d)}", d < BOUND.mpf(10) ** -25)
    d = max(abs(mgf.evaluate_F(ds, 3, t, ctx, eps=tight).value
                - mgf.evaluate_F(ds, 3, 2 * t, ctx, eps=tight).value)
            for t in (0.5, 1.2, 1.9))
    yield CheckResult("mgf", f"F periodicity {_fmt(d)}", d < BOUND.mpf(10) ** -20)
    qctx = PrecisionContext(30, 10)
    val, _, _ = mgf.fourier_coefficient_quadrature(ds, 3, 0, qctx, tol=1e-12)
    mp = qctx.mp
    d = abs(val - 2 * mp.zeta(3) / mp.log(2))
    yield CheckResult("mgf", f"zeroth Fourier coefficient by quadrature {_fmt(d)}", d < BOUND.mpf(10) ** -8)


FAMILIES: dict[str, Callable[..., Iterable[CheckResult]]] = {
    "digitset": family_digitset,
    "bernoulli": family_bernoulli,
    "moments": family_constant,
    "bounds": family_bounds,
    "closed-form": family_closed_form,
    "series": family_series,
    "log2": family_log2,
    "mgf": family_mgf,
}


def run_family(name: str, **options) -> list[CheckResult]:
    return list(FAMILIES[name](**options))


def bench_t_grid(sigma, ts, digits: int, base: int = 2) -> list[dict]:
    """One row per ``t``: terms the series used, the planner's count, and wall time."""
    ds = DigitSet.full(base)
    rows = []
    for t in ts:
        s = ComplexParameter(Fraction(sigma), Fraction(t))
        r = evaluate_series(ds, s, digits=digits)
        rows.append({
            "t": str(t),
            "terms_needed": r.terms_used,
            "planned": r.plan.M,
            "elapsed_ms": round(r.elapsed * 1000, 3),
        })
    return rows


def bench_m_grid(Ms, sigma=2, base: int = 2, digits: int = 30) -> list[dict]:
    """Time to build an ``M``-term moment table from scratch, for each ``M``."""
    ds = DigitSet.full(base)
    rows = []
    for M in Ms:
        ctx = PrecisionContext.for_terms(digits, M, base)
        start = time.perf_counter()
        build_moment_table(ds, sigma, M, ctx, use_cache=False)
        rows.append({"M": M, "elapsed_ms": round((time.perf_counter() - start) * 1000, 3)})
    return rows
