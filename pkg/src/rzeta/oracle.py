"""Reference values computed without the moment series.

* :func:`zeta_reference` sums the alternating eta series with the
  Chebyshev-polynomial weights of Borwein's algorithm.
* :func:`restricted_sum_bracket` enumerates admissible integers directly
  (vectorized, double precision) and closes the sum with a geometric tail.
* :func:`double_precision_closed_form_demo` measures how badly the
  Bernoulli closed form for the full-set moments behaves in binary64.

Nothing here imports the series module.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .digitset import DigitSet
from .errors import DomainError
from .numerics import ComplexParameter, PrecisionContext, bernoulli

__all__ = [
    "Bracket",
    "zeta_reference",
    "eta_weights",
    "restricted_sum_bracket",
    "double_precision_closed_form_demo",
]


@dataclass(frozen=True)
class Bracket:
    lower: float
    upper: float

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise ValueError("bracket with lower > upper")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def __contains__(self, x) -> bool:
        return self.lower <= x <= self.upper


def eta_weights(n: int) -> list[int]:
    """Integers ``d_0..d_n``, ``d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)``."""
    term = Fraction(1, n)
    acc = Fraction(0)
    out = []
    for i in range(n + 1):
        if i:
            term = term * 4 * (n + i - 1) * (n - i + 1) / ((2 * i) * (2 * i - 1))
        acc += term
        d = n * acc
        assert d.denominator == 1
        out.append(d.numerator)
    return out


def zeta_reference(s, digits: int):
    """``zeta(s)`` for ``Re s > 1`` to about ``digits`` correct decimals.

    ``eta(s) = -1/d_n sum_{k<n} (-1)^k (d_k - d_n) / (k+1)^s`` has error at most
    ``3 (3+sqrt 8)^-n / (|Gamma(s)| |1 - 2^(1-s)|)``, and
    ``zeta = eta / (1 - 2^(1-s))``.
    """
    s = ComplexParameter.of(s)
    if s.sigma <= 1:
        raise DomainError("reference zeta needs Re s > 1 (pole at s = 1)")
    low = mpmath.MPContext()
    low.dps = 20
    sl = s.value(low)
    scale = 3 / abs(low.gamma(sl)) / abs(1 - low.power(2, 1 - sl)) ** 2
    need = digits + max(0.0, float(low.log10(scale))) + 5
    n = max(4, math.ceil(need / math.log10(3 + math.sqrt(8))))

    mp = mpmath.MPContext()
    mp.dps = digits + 15 + int(max(0.0, float(low.log10(scale))))
    sv = s.value(mp)
    d = eta_weights(n)
    dn = d[n]
    terms = [(-1) ** k * (d[k] - dn) * mp.power(k + 1, -sv) for k in range(n)]
    eta = -mp.fsum(terms) / dn
    return eta / (1 - mp.power(2, 1 - sv))


def _admissible_levels(ds: DigitSet, depth: int):
    digits = np.array(ds.digits, dtype=np.int64)
    level = digits[digits > 0]
    for _ in range(depth):
        yield level
        level = (level[:, None] * ds.base + digits[None, :]).ravel()


def restricted_sum_bracket(ds: DigitSet, sigma, depth: int) -> Bracket:
    """Enclosure of ``sum' n^-sigma`` from all admissible ``n < b**depth``.

    Each admissible integer with ``l`` digits is at least ``b^(l-1)`` and
    there are ``N1 N^(l-1)`` of them, so the omitted part is below
    ``N1 (N/b^sigma)^depth / (1 - N/b^sigma)``.
    """
    sigma = float(sigma)
    if not sigma * math.log(ds.base) > math.log(ds.N):
        raise DomainError(f"sum diverges for sigma <= log_{ds.base} {ds.N}")
    if ds.base ** depth >= 2**53:
        raise ValueError("depth too large for exact double-precision integers")
    total = 0.0
    count = 0
    for level in _admissible_levels(ds, depth):
        x = level.astype(np.float64)
        total += float(np.sum(np.exp(-sigma * np.log(x))))
        count += x.size
    # per element: log, scaling and exp each cost a few ulps relative to
    # sigma*log(n); numpy's pairwise sum adds at most ~(128 + log2 count) ulps
    per_term = sigma * depth * math.log(ds.base) + 8
    summation = 128 + math.log2(count + 1) + depth
    rounding = 2 * total * (per_term + summation) * np.finfo(np.float64).eps
    rho = ds.N / ds.base**sigma
    tail = ds.N1 * rho**depth / (1 - rho) * (1 + 1e-12)
    return Bracket(float(total - rounding), float(total + rounding + tail))


def _closed_form_float(b: int, s: float, m: int) -> float:
    def g(k):
        x = float(b) ** (s + k)
        return x / (x - b)

    if m == 0:
        return g(0)
    acc = g(0) / (m + 1) - g(1) / 2
    falling = Fraction(m)
    for k in range(1, m // 2 + 1):
        if k > 1:
            falling *= (m - 2 * k + 3) * (m - 2 * k + 2)
        coef = float(falling * bernoulli(2 * k) / math.factorial(2 * k))
        acc += coef * g(2 * k)
    return acc


def _recurrence_float(b: int, s: float, m: int) -> float:
    S = [b] + [sum(float(a) ** j for a in range(b)) for j in range(1, m + 1)]
    bs = float(b) ** s
    c = [1.0]
    for k in range(1, m + 1):
        d = 1.0
        acc = 0.0
        for j in range(1, k + 1):
            d = d * (s + k - j + 1) / j
            acc += d * S[j] * c[k - j]
        c.append(acc / (bs * float(b) ** k - b))
    poch = 1.0
    for k in range(1, m + 1):
        poch *= (s + k) / k
    return bs / (bs - b) * c[m] / poch


def double_precision_closed_form_demo(b: int, s, m: int) -> tuple[float, float]:
    """Relative errors of ``u_m(s)`` from the closed form and from the recurrence, in binary64.

    The reference is the recurrence at 100 significant digits.
    """
    from .moments import build_moment_table  # high-precision truth only

    s_exact = ComplexParameter.of(s)
    if not s_exact.is_real:
        raise ValueError("demo runs on real s")
    ctx = PrecisionContext(100, 20)
    truth = build_moment_table(DigitSet.full(b), s_exact, m, ctx).u(m)
    sf = float(s_exact.sigma)
    cf = _closed_form_float(b, sf, m)
    rec = _recurrence_float(b, sf, m)
    mp = ctx.mp
    return (float(abs((mp.mpf(cf) - truth) / truth)), float(abs((mp.mpf(rec) - truth) / truth)))
