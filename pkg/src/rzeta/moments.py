"""Moment tables for the digit-restricted word measure, and their bounds.

Notation: ``u_m(s)`` are the raw moments, ``u*_m(s) = (s+1)_m/m! * u_m(s)``
the rescaled moments entering the series, and ``mass = u*_0 = b^s/(b^s-N)``.
A :class:`MomentTable` stores ``c_m = u*_m / mass``, which obey

    (b^(m+s) - N) c_m = sum_{j=1..m} (s+m)...(s+m-j+1)/j! * S_j * c_{m-j},   c_0 = 1,

with ``S_j`` the digit power sums.  Keeping the mass out of the table keeps
the pole at ``b^s = N`` out of the recurrence.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import mpmath

from .digitset import DigitSet, power_sums
from .errors import BoundaryError, DomainError, PrecisionError
from .numerics import (
    BOUND,
    BernoulliCache,
    ComplexParameter,
    PrecisionContext,
    bernoulli,
    inflate,
    log_pochhammer_ratio_bound,
    to_mp,
)

__all__ = [
    "MomentTable",
    "abscissa_compare",
    "check_convergence",
    "build_moment_table",
    "normalized_moments_exact",
    "moment_closed_form",
    "closed_form_terms",
    "closed_form_cancellation",
    "pochhammer_ratios",
    "bound_u_star",
    "lower_bound_u_star",
]

_HP = mpmath.MPContext()
_HP.dps = 60


def abscissa_compare(ds: DigitSet, sigma) -> int:
    """Sign of ``sigma - log_b N``, exact whenever ``sigma`` is a modest rational."""
    sigma = Fraction(sigma)
    if ds.N == 1:
        return (sigma > 0) - (sigma < 0)
    if sigma <= 0:
        return -1
    p, q = sigma.numerator, sigma.denominator
    if q <= 10**4 and p <= 10**6:
        lhs, rhs = ds.base**p, ds.N**q
        return (lhs > rhs) - (lhs < rhs)
    diff = to_mp(sigma, _HP) * _HP.log(ds.base) - _HP.log(ds.N)
    return (diff > 0) - (diff < 0)


def check_convergence(ds: DigitSet, s: ComplexParameter) -> None:
    """Raise unless ``Re s > log_b N`` (the restricted series' abscissa)."""
    where = "1 (pole of zeta)" if ds.is_full else f"log_{ds.base}({ds.N}) = {ds.abscissa:.6g}"
    cmp = abscissa_compare(ds, s.sigma)
    if cmp == 0:
        raise BoundaryError(f"Re s = {s.sigma} lies on the abscissa of convergence {where}")
    if cmp < 0:
        raise DomainError(f"Re s = {float(s.sigma):.6g} is below the abscissa of convergence {where}")


@dataclass(frozen=True)
class MomentTable:
    """Normalized rescaled moments ``c_0..c_M`` for fixed ``(b, A, s)``."""

    digitset: DigitSet
    s: ComplexParameter
    ctx: PrecisionContext
    mass: object
    normalized: tuple = field(repr=False)

    @property
    def M(self) -> int:
        return len(self.normalized) - 1

    @cached_property
    def pochhammer_factors(self) -> tuple:
        """``(s+1)_m / m!`` for ``m = 0..M``."""
        mp = self.ctx.mp
        sv = self.s.value(mp)
        out = [mp.one]
        for m in range(1, self.M + 1):
            out.append(out[-1] * (sv + m) / m)
        return tuple(out)

    def u_star(self, m: int):
        return self.mass * self.normalized[m]

    def u(self, m: int):
        """Raw moment ``u_m(s)``."""
        return self.u_star(m) / self.pochhammer_factors[m]

    def raw_normalized(self, m: int):
        """``u_m(s) / u_0(s)``: periodic in ``t`` and dominated by its value at ``sigma``."""
        return self.normalized[m] / self.pochhammer_factors[m]

    def truncated(self, M: int) -> "MomentTable":
        if M > self.M:
            raise ValueError(f"table only holds {self.M} moments")
        return MomentTable(self.digitset, self.s, self.ctx, self.mass, self.normalized[: M + 1])


def _recurrence(S: Sequence[int], N: int, base: int, b_pow_s, s, M: int, one, dot=None) -> list:
    c = [one]
    bpow = b_pow_s
    for m in range(1, M + 1):
        bpow = bpow * base
        coefs = []
        d = one
        for j in range(1, m + 1):
            d = d * (s + (m - j + 1)) / j
            coefs.append(d * S[j])
        # coefs[j-1] pairs with c[m-j]
        if dot is None:
            acc = sum(a * b for a, b in zip(coefs, reversed(c)))
        else:
            acc = dot(coefs, c[::-1])
        denom = bpow - N
        if denom == 0:
            raise DomainError(f"b^(m+s) = N at m={m}; recurrence undefined")
        c.append(acc / denom)
    return c


_TABLE_CACHE: dict = {}
_TABLE_LOCK = threading.Lock()


def _cache_key(ds: DigitSet, s: ComplexParameter, ctx: PrecisionContext):
    t = s.t if isinstance(s.t, Fraction) else mpmath.nstr(s.t, 60)
    return (ds.base, ds.digits, s.sigma, t, ctx.working_digits)


def build_moment_table(ds: DigitSet, s, M: int, ctx: PrecisionContext, *,
                       use_cache: bool = True) -> MomentTable:
    """Moments ``c_0..c_M`` from the linear recurrence, sequential in ``m``."""
    s = ComplexParameter.of(s)
    check_convergence(ds, s)
    if M < 0:
        raise ValueError("M must be >= 0")
    need = PrecisionContext.required_guard(M, ds.base)
    if ctx.guard_digits < need:
        raise PrecisionError(
            f"{M} moments need at least {need} guard digits, context has {ctx.guard_digits}"
        )
    key = _cache_key(ds, s, ctx)
    if use_cache:
        with _TABLE_LOCK:
            hit = _TABLE_CACHE.get(key)
        if hit is not None and hit.M >= M:
            return hit if hit.M == M else hit.truncated(M)

    mp = ctx.mp
    sv = s.value(mp)
    b_pow_s = mp.power(ds.base, sv)
    mass = b_pow_s / (b_pow_s - ds.N)
    c = _recurrence(power_sums(ds, M), ds.N, ds.base, b_pow_s, sv, M, mp.one, dot=mp.fdot)
    table = MomentTable(ds, s, ctx, mass, tuple(c))
    if use_cache:
        with _TABLE_LOCK:
            prev = _TABLE_CACHE.get(key)
            if prev is None or prev.M < M:
                _TABLE_CACHE[key] = table
    return table


def normalized_moments_exact(ds: DigitSet, s: int, M: int) -> list[Fraction]:
    """The same recurrence in exact rationals, for an integer ``s``.

    No convergence check: with ``c_0 = 1`` the recurrence itself makes sense
    for ``Re s > 0`` (at ``b = 2, s = 1`` it returns the constant sequence 1).
    """
    if int(s) != s:
        raise ValueError("exact mode needs an integer s")
    s = int(s)
    b_pow_s = Fraction(ds.base) ** s
    return _recurrence(power_sums(ds, M), ds.N, ds.base, b_pow_s, Fraction(s), M, Fraction(1))


def _full_base(b) -> int:
    if isinstance(b, DigitSet):
        if not b.is_full:
            raise ValueError("the Bernoulli closed form needs the full digit set")
        return b.base
    return int(b)


def closed_form_terms(b, s, m: int, ctx: PrecisionContext,
                      cache: BernoulliCache | None = None) -> list:
    """Individual summands of the Bernoulli-number expression for ``u_m(s)``."""
    b = _full_base(b)
    s = ComplexParameter.of(s)
    if s.sigma <= 1:
        raise DomainError("closed form evaluated only for Re s > 1")
    mp = ctx.mp
    sv = s.value(mp)

    def g(k):
        x = mp.power(b, sv + k)
        return x / (x - b)

    if m == 0:
        return [g(0)]
    terms = [g(0) / (m + 1), -g(1) / 2]
    falling = Fraction(m)  # m! / (m-2k+1)!, grows by two factors per k
    for k in range(1, m // 2 + 1):
        if k > 1:
            falling *= (m - 2 * k + 3) * (m - 2 * k + 2)
        coef = falling * bernoulli(2 * k, cache) / math.factorial(2 * k)
        terms.append(to_mp(coef, mp) * g(2 * k))
    return terms


def moment_closed_form(b, s, m: int, ctx: PrecisionContext,
                       cache: BernoulliCache | None = None):
    """Raw moment ``u_m(s)`` of the full digit set from Bernoulli numbers.

    Numerically fragile: summands exceed the result by many orders of
    magnitude as ``m`` grows, so evaluate at generous working precision.
    """
    return ctx.mp.fsum(closed_form_terms(b, s, m, ctx, cache))


def closed_form_cancellation(b, s, m: int, ctx: PrecisionContext) -> float:
    """Largest summand modulus over result modulus (``10**k`` means ~k digits lost)."""
    terms = closed_form_terms(b, s, m, ctx)
    mp = ctx.mp
    total = abs(mp.fsum(terms))
    return float(max(abs(x) for x in terms) / total)


def pochhammer_ratios(s, K: int) -> list:
    """``|(s+1)_m| / (sigma+1)_m`` for ``m = 0..K`` as bound values (non-decreasing)."""
    s = ComplexParameter.of(s)
    out = [BOUND.one]
    if s.is_real:
        return out * (K + 1)
    sigma = to_mp(s.sigma, BOUND)
    t2 = to_mp(s.t, BOUND) ** 2
    r = BOUND.one
    for k in range(1, K + 1):
        r *= BOUND.sqrt(1 + t2 / (sigma + k) ** 2)
        out.append(inflate(r))
    return out


def _modulus_b_s_minus_N(ds: DigitSet, s: ComplexParameter):
    sv = s.value(BOUND)
    return abs(BOUND.power(ds.base, sv) - ds.N)


def _lambda_path_ok(ds: DigitSet, sigma: Fraction) -> bool:
    return sigma >= 1 and (sigma > 1 or not ds.is_full)


_DIRECT_RATIO_LIMIT = 5000


def bound_u_star(ds: DigitSet, s, m: int, ctx: PrecisionContext | None = None):
    """Upper bound for ``|u*_m(s)|``.

    For ``sigma >= 1`` this is ``ratio * lam**m * b^sigma / |b^s - N|`` with
    ``ratio`` the Pochhammer ratio at ``m`` (or its Gamma-function limit for
    very large ``m``).  Below ``sigma = 1`` it falls back to a real-parameter
    table at ``sigma``, dominated termwise.
    """
    s = ComplexParameter.of(s)
    check_convergence(ds, s)
    sigma = s.sigma
    denom = _modulus_b_s_minus_N(ds, s)
    sig = to_mp(sigma, BOUND)
    if m <= _DIRECT_RATIO_LIMIT:
        ratio = pochhammer_ratios(s, m)[m]
    else:
        ratio = BOUND.exp(log_pochhammer_ratio_bound(sigma, complex(s)))
    if _lambda_path_ok(ds, sigma):
        lam = to_mp(ds.lam, BOUND)
        return inflate(ratio * lam**m * BOUND.power(ds.base, sig) / denom)
    ctx = ctx or PrecisionContext(20)
    real = build_moment_table(ds, ComplexParameter(sigma), m, ctx)
    u_star_sigma = BOUND.mpf(real.u_star(m))
    return inflate(ratio * u_star_sigma * (BOUND.power(ds.base, sig) - ds.N) / denom)


def lower_bound_u_star(ds: DigitSet, sigma, m: int):
    """Strict lower bound ``lam**m / (b^sigma - N)`` for the real-parameter ``u*_m(sigma)``."""
    if isinstance(sigma, ComplexParameter):
        if not sigma.is_real:
            raise ValueError("lower bound is for real parameters only")
        sigma = sigma.sigma
    sp = ComplexParameter.of(sigma)
    check_convergence(ds, sp)
    sig = to_mp(sp.sigma, BOUND)
    lam = to_mp(ds.lam, BOUND)
    return lam**m / (BOUND.power(ds.base, sig) - ds.N) / inflate(1)
