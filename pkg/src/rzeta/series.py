"""Geometrically convergent series for restricted Dirichlet sums and zeta.

For a level ``l`` the admissible integers are split into a *head*
(``0 < n < b^(l-1)``, summed directly) and the block ``[b^(l-1), b^l)``.
Every admissible integer of at least ``l`` digits starts with a block
element ``n``, and the contribution of all of them is

    mass * P_0 + sum_{m>=1} (-1)^m * s/(s+m) * u*_m(s) * P_m,
    P_m = sum_{n in block} n^-(s+m).

For real ``s`` consecutive partial sums enclose the limit.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .digitset import DigitSet, admissible_below, admissible_in_block
from .errors import PrecisionError, UnsupportedConfiguration
from .moments import build_moment_table, check_convergence, pochhammer_ratios
from .numerics import (
    BOUND,
    ComplexParameter,
    PrecisionContext,
    complex_pow,
    inflate,
    log_pochhammer_ratio_bound,
    to_mp,
)

__all__ = [
    "TermPlan",
    "SeriesResult",
    "default_level",
    "plan_terms",
    "block_power_sums",
    "evaluate_series",
    "limit_identity_log2",
]

DEFAULT_MAX_TERMS = 100_000


def default_level(base: int) -> int:
    return 3 if base <= 3 else 2


def _threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("RZETA_THREADS", "1") or 1)
    return max(1, threads)


@dataclass(frozen=True)
class TermPlan:
    """A-priori term budget.

    ``bounds[m]`` bounds ``|term_m|`` for ``1 <= m <= K``; beyond ``K`` terms
    are dominated by ``prefactor * ratio**m``.  ``tail_after(m)`` bounds the
    whole remainder after ``m`` series terms.
    """

    M: int
    ratio: object
    prefactor: object
    bounds: tuple = field(repr=False)
    tails: tuple = field(repr=False)
    eps: object = None

    @property
    def K(self) -> int:
        return len(self.bounds) - 1

    def term_bound(self, m: int):
        if m <= self.K:
            return self.bounds[m]
        return inflate(self.prefactor * self.ratio**m)

    def tail_after(self, m: int):
        if m <= self.K:
            return self.tails[m]
        return inflate(self.prefactor * self.ratio ** (m + 1) / (1 - self.ratio))


def _block(ds: DigitSet, level: int) -> list[int]:
    return list(admissible_in_block(ds, level))


def _check_level(ds: DigitSet, level: int) -> None:
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    if level == 1 and 1 in ds.digits and (ds.base - 1) in ds.digits:
        raise UnsupportedConfiguration(
            "level 1 with digits 1 and b-1 both admissible gives an only semi-convergent "
            "series; use level >= 2"
        )


def plan_terms(ds: DigitSet, s, level: int, eps, *, max_terms: int = DEFAULT_MAX_TERMS) -> TermPlan:
    """Smallest ``M`` whose rigorous remainder bound falls below ``eps``.

    Per-term bound::

        |term_m| <= |s|/|s+m| * R_m * G_m * lam^m * b^sigma/|b^s - N| * n0^-m * sum_block n^-sigma

    with ``R_m = |(s+1)_m|/(sigma+1)_m``, ``n0`` the smallest block element
    and ``G_m = 1`` when ``sigma >= 1``; below that ``G_m = (sigma+1)_m/m!``
    (the moments of a real parameter decay at least like ``lam^m``).
    """
    s = ComplexParameter.of(s)
    eps = BOUND.mpf(eps)
    if not eps > 0:
        raise ValueError("eps must be positive")
    _check_level(ds, level)
    check_convergence(ds, s)

    block = _block(ds, level)
    n0 = block[0]
    sig = to_mp(s.sigma, BOUND)
    lam = to_mp(ds.lam, BOUND)
    ratio = lam / n0
    if not ratio < 1:
        raise UnsupportedConfiguration("series does not converge geometrically at this level")
    sv = s.value(BOUND)
    abs_s = abs(sv)
    t = to_mp(s.t, BOUND)
    big_sigma = s.sigma >= 1 and (s.sigma > 1 or not ds.is_full)

    block_mass = inflate(BOUND.fsum(BOUND.power(n, -sig) for n in block))
    base_factor = BOUND.power(ds.base, sig) / abs(BOUND.power(ds.base, sv) - ds.N)
    scale = inflate(base_factor * block_mass)
    r_limit = BOUND.exp(log_pochhammer_ratio_bound(s.sigma, complex(s)))

    def tail_beyond(k: int):
        # remainder after index k from the Gamma-limit model
        if big_sigma:
            poly = min(BOUND.one, abs_s / (sig + k + 1))
        else:
            poly = abs_s * (k + 2) / (sig + k + 1)
        return inflate(r_limit * poly * scale * ratio ** (k + 1) / (1 - ratio))

    target = eps / 1000
    bounds = [BOUND.zero]
    r = BOUND.one
    g = BOUND.one
    geo = BOUND.one
    k = 0
    hard_cap = 4 * max_terms + 100
    while True:
        k += 1
        if not s.is_real:
            r = r * BOUND.sqrt(1 + (t / (sig + k)) ** 2)
        if not big_sigma:
            g = g * (sig + k) / k
        geo = geo * ratio
        bounds.append(inflate(abs_s / abs(sv + k) * r * g * geo * scale))
        if tail_beyond(k) < target and bounds[-1] < target:
            break
        if k > hard_cap:
            raise PrecisionError(
                f"no term count up to {hard_cap} reaches eps={BOUND.nstr(eps, 3)}"
            )
    K = k
    tails = [BOUND.zero] * (K + 1)
    acc = tail_beyond(K)
    for m in range(K, -1, -1):
        tails[m] = inflate(acc)
        acc = acc + bounds[m]
    M = next(m for m in range(K + 1) if tails[m] < eps)
    prefactor = inflate(r_limit * scale * (1 if big_sigma else abs_s * (K + 2)))
    return TermPlan(M, ratio, prefactor, tuple(bounds), tuple(tails), eps)


def _powers_for(n: int, sv, M: int, ctx: PrecisionContext) -> list:
    mp = ctx.mp
    x = complex_pow(n, sv, ctx)
    inv = mp.one / n
    out = [x]
    for _ in range(M):
        x = x * inv
        out.append(x)
    return out


def block_power_sums(block: Sequence[int], s, M: int, ctx: PrecisionContext, *,
                     threads: int | None = 1) -> list:
    """``P_m = sum_{n in block} n^-(s+m)`` for ``m = 0..M``.

    Each ``n`` gets its own geometric sequence (parallel over ``n``); the
    sums are then taken in block order so the result does not depend on the
    thread count.
    """
    mp = ctx.mp
    sv = s.value(mp) if isinstance(s, ComplexParameter) else s
    block = list(block)
    if not block:
        raise ValueError("empty block")
    n_threads = _threads(threads)
    if n_threads > 1 and len(block) > 1:
        with ThreadPoolExecutor(n_threads) as pool:
            rows = list(pool.map(lambda n: _powers_for(n, sv, M, ctx), block))
    else:
        rows = [_powers_for(n, sv, M, ctx) for n in block]
    return [mp.fsum(row[m] for row in rows) for m in range(M + 1)]


@dataclass
class SeriesResult:
    """Outcome of :func:`evaluate_series`.

    ``value`` is kept at working precision; ``error_bound`` covers the
    truncated tail plus a rounding allowance.  For real ``s``, ``bracket``
    holds two consecutive partial sums, which enclose the exact sum.
    """

    value: object
    error_bound: object
    terms_used: int
    level: int
    bracket: tuple | None
    elapsed: float
    ctx: PrecisionContext
    plan: TermPlan = field(repr=False)
    partial_sums: list | None = field(default=None, repr=False)
    terms: list | None = field(default=None, repr=False)


def _series_context(ds: DigitSet, s: ComplexParameter, level: int, plan: TermPlan,
                    target_digits: int) -> PrecisionContext:
    # the recurrence for complex s cancels roughly like the Pochhammer ratio grows
    r_M = pochhammer_ratios(s, plan.M + 1)[-1]
    extra = math.ceil(float(BOUND.log10(r_M))) if r_M > 1 else 0
    peak = max(plan.bounds[1 : plan.M + 2], default=BOUND.one)
    extra += max(0, math.ceil(float(BOUND.log10(peak)))) + 2
    return PrecisionContext.for_terms(target_digits, plan.M + 1, ds.base, level, extra)


def evaluate_series(ds: DigitSet, s, level: int | None = None, ctx: PrecisionContext | None = None,
                    *, digits: int = 50, max_terms: int = DEFAULT_MAX_TERMS,
                    threads: int | None = 1, early_exit: bool = True,
                    keep_partial_sums: bool = False) -> SeriesResult:
    """Restricted Dirichlet sum ``K_{b,A,s}`` (``zeta(s)`` for the full set).

    Accuracy target is absolute, ``10**-digits`` (or ``ctx.target_digits``).
    Without an explicit ``ctx`` the working precision is chosen from the
    term plan; an explicit ``ctx`` with too few guard digits is rejected.
    """
    start = time.perf_counter()
    s = ComplexParameter.of(s)
    check_convergence(ds, s)
    level = default_level(ds.base) if level is None else level
    _check_level(ds, level)
    target = ctx.target_digits if ctx is not None else digits
    eps = BOUND.mpf(10) ** -target
    plan = plan_terms(ds, s, level, eps / 2, max_terms=max_terms)
    if plan.M > max_terms:
        raise PrecisionError(
            f"10^-{target} needs {plan.M} terms, more than the cap of {max_terms}"
        )
    wanted = _series_context(ds, s, level, plan, target)
    if ctx is None:
        ctx = wanted
    elif ctx.guard_digits < wanted.guard_digits:
        raise PrecisionError(
            f"need {wanted.guard_digits} guard digits for {plan.M} terms, context has "
            f"{ctx.guard_digits}"
        )
    mp = ctx.mp
    sv = s.value(mp)

    M = plan.M
    table = build_moment_table(ds, s, M + 1, ctx)
    block = _block(ds, level)
    head_ns = list(admissible_below(ds, level))
    n_threads = _threads(threads)
    if n_threads > 1 and len(head_ns) > 1:
        with ThreadPoolExecutor(n_threads) as pool:
            head_terms = list(pool.map(lambda n: complex_pow(n, sv, ctx), head_ns))
    else:
        head_terms = [complex_pow(n, sv, ctx) for n in head_ns]
    head = mp.fsum(head_terms)
    P = block_power_sums(block, sv, M + 1, ctx, threads=n_threads)

    def term(m):
        sign = -1 if m % 2 else 1
        return sign * sv / (sv + m) * table.u_star(m) * P[m]

    value = head + table.mass * P[0]
    partial = [value]
    terms = [table.mass * P[0]]
    small_run = 0
    used = M
    for m in range(1, M + 1):
        tm = term(m)
        terms.append(tm)
        value = value + tm
        partial.append(value)
        small_run = small_run + 1 if abs(tm) < eps / 4 else 0
        if early_exit and small_run >= 3 and m < M and plan.tail_after(m) < eps * 0.9:
            used = m
            break

    scale = abs(head) + sum(abs(x) for x in terms)
    ops = len(head_ns) + len(block) + used + 10
    r_used = pochhammer_ratios(s, used + 1)[-1]
    rounding = inflate(BOUND.mpf(ops) * ctx.ulp * r_used * (1 + BOUND.mpf(scale)) * 16)
    error_bound = inflate(plan.tail_after(used) + rounding)

    bracket = None
    if s.is_real:
        nxt = term(used + 1)
        a, b = value, value + nxt
        bracket = (min(a, b), max(a, b))
    return SeriesResult(
        value=value,
        error_bound=error_bound,
        terms_used=used,
        level=level,
        bracket=bracket,
        elapsed=time.perf_counter() - start,
        ctx=ctx,
        plan=plan,
        partial_sums=partial if keep_partial_sums else None,
        terms=terms if keep_partial_sums else None,
    )


def limit_identity_log2(level: int, M: int, ctx: PrecisionContext):
    """``sum_{m=0..M} (-1)^m/(m+1) * sum_{2^(l-1) <= n < 2^l} n^-(m+1)``.

    This is the base-2 series at ``s = 1`` with the constant moment sequence
    and the mass factor removed; each block element contributes
    ``log(1 + 1/n)``, so the limit telescopes to ``log 2``.
    """
    if level < 2:
        raise ValueError("level must be >= 2")
    mp = ctx.mp
    block = range(2 ** (level - 1), 2**level)
    P = block_power_sums(block, mp.one, M, ctx)
    return mp.fsum((-1) ** m * P[m] / (m + 1) for m in range(M + 1))
