"""Arbitrary-precision plumbing on top of :mod:`mpmath`.

Every computation runs in a private :class:`mpmath.MPContext` owned by a
:class:`PrecisionContext`, so the global ``mpmath.mp`` state is never
touched and independent evaluations can run side by side.

Error bounds are carried as low-precision ``mpf`` values from :data:`BOUND`
(64-bit mantissa, unbounded exponent), which keeps bounds like ``10**-3000``
representable where a double would underflow.
"""
from __future__ import annotations

import cmath
import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Union

import mpmath

from .errors import DomainError

__all__ = [
    "BOUND",
    "PrecisionContext",
    "ComplexParameter",
    "BernoulliCache",
    "bernoulli",
    "complex_pow",
    "log_abs_gamma",
    "log_pochhammer_ratio_bound",
    "pochhammer_ratio_bound",
    "to_mp",
    "inflate",
]

BOUND = mpmath.MPContext()
BOUND.prec = 64

# relative slack applied to every bound evaluated in BOUND
_BOUND_SLACK = 1 + BOUND.mpf(2) ** -40

Real = Union[Fraction, "mpmath.mpf"]


def inflate(x):
    """Push a 64-bit bound value up by a few ulps to absorb its own rounding."""
    return BOUND.mpf(x) * _BOUND_SLACK


def to_mp(x, mp):
    """Round ``x`` (Fraction, int, float, mpf or str) into context ``mp``."""
    if isinstance(x, Rational) and not isinstance(x, int):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


@dataclass(frozen=True)
class PrecisionContext:
    """Target and working precision, both in decimal digits."""

    target_digits: int = 50
    guard_digits: int = 20

    def __post_init__(self) -> None:
        if self.target_digits < 1:
            raise ValueError("target_digits must be positive")
        if self.guard_digits < 10:
            raise ValueError("guard_digits must be at least 10")

    @property
    def working_digits(self) -> int:
        return self.target_digits + self.guard_digits

    @cached_property
    def mp(self) -> mpmath.MPContext:
        ctx = mpmath.MPContext()
        ctx.dps = self.working_digits
        return ctx

    @property
    def eps(self):
        return BOUND.mpf(10) ** -self.target_digits

    @property
    def ulp(self):
        """Unit roundoff of the working precision, as a bound value."""
        return BOUND.mpf(2) ** (1 - self.mp.prec)

    @staticmethod
    def required_guard(terms: int, base: int, level: int = 1) -> int:
        return 10 + math.ceil(math.log10(terms + 1)) + math.ceil(level * math.log10(base))

    @classmethod
    def for_terms(cls, target_digits: int, terms: int, base: int, level: int = 1,
                  extra: int = 0) -> "PrecisionContext":
        return cls(target_digits, cls.required_guard(terms, base, level) + max(0, extra))


_S_GRAMMAR = re.compile(r"^(\d+(?:\.\d*)?|\.\d+)(?:([+-])(\d+(?:\.\d*)?|\.\d+)i)?$")


def _exact(x) -> Real:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise DomainError(f"non-finite parameter {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if hasattr(x, "_mpf_"):
        man, exp = x.man_exp
        return Fraction(int(man)) * Fraction(2) ** int(exp)
    raise TypeError(f"cannot interpret {x!r} as a real number")


@dataclass(frozen=True)
class ComplexParameter:
    """The Dirichlet-series argument ``s = sigma + i t``.

    Both parts are stored exactly (``Fraction``); values rounded to a working
    precision are produced on demand by :meth:`value`.  ``t`` may also be an
    ``mpf`` when it is irrational, e.g. a shift by ``2*pi/log(b)``.
    """

    sigma: Fraction
    t: Real = Fraction(0)

    @classmethod
    def of(cls, s) -> "ComplexParameter":
        if isinstance(s, ComplexParameter):
            return s
        if isinstance(s, str):
            return cls.parse(s)
        if isinstance(s, complex):
            return cls(_exact(s.real), _exact(s.imag))
        if hasattr(s, "_mpc_"):
            return cls(_exact(s.real), _exact(s.imag))
        return cls(_exact(s), Fraction(0))

    @classmethod
    def parse(cls, text: str) -> "ComplexParameter":
        """Parse ``"<sigma>"``, ``"<sigma>+<t>i"`` or ``"<sigma>-<t>i"`` (decimal literals)."""
        m = _S_GRAMMAR.match(text.strip())
        if m is None:
            raise ValueError(f"cannot parse s={text!r}; expected e.g. 2, 2.5, 2+10i or 3-0.5i")
        sigma = Fraction(m.group(1))
        t = Fraction(0) if m.group(3) is None else Fraction(m.group(3))
        if m.group(2) == "-":
            t = -t
        return cls(sigma, t)

    @property
    def is_real(self) -> bool:
        return self.t == 0

    def value(self, mp):
        sigma = to_mp(self.sigma, mp)
        if self.is_real:
            return sigma
        return mp.mpc(sigma, to_mp(self.t, mp))

    def shifted(self, dt) -> "ComplexParameter":
        """Same ``sigma``, imaginary part moved by ``dt`` (kept to 200 digits if irrational)."""
        if isinstance(dt, (int, Fraction)) and isinstance(self.t, Fraction):
            return ComplexParameter(self.sigma, self.t + dt)
        return ComplexParameter(self.sigma, to_mp(self.t, _HP) + to_mp(dt, _HP))

    def __complex__(self) -> complex:
        return complex(float(self.sigma), float(self.t))

    def __str__(self) -> str:
        sig = _short(self.sigma)
        if self.is_real:
            return sig
        t = self.t
        sign = "-" if t < 0 else "+"
        return f"{sig}{sign}{_short(abs(t))}i"


_HP = mpmath.MPContext()
_HP.dps = 200


def _short(x) -> str:
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return repr(float(x)) if float(x) == x else str(x)
    return mpmath.nstr(x, 20)


class BernoulliCache:
    """Exact rational Bernoulli numbers ``B_0, B_1 = -1/2, B_2, ...``, memoized."""

    def __init__(self) -> None:
        self._values: list[Fraction] = [Fraction(1), Fraction(-1, 2)]
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._values)

    def get(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("index must be non-negative")
        if n >= len(self._values):
            with self._lock:
                self._fill(n)
        return self._values[n]

    __getitem__ = get

    def _fill(self, n: int) -> None:
        vals = self._values
        for m in range(len(vals), n + 1):
            if m % 2:
                vals.append(Fraction(0))
                continue
            # sum_{j=0}^{m} C(m+1, j) B_j = 0, odd j > 1 vanish
            acc = Fraction(1) + (m + 1) * vals[1]
            for j in range(2, m, 2):
                acc += math.comb(m + 1, j) * vals[j]
            vals.append(-acc / (m + 1))


_DEFAULT_BERNOULLI = BernoulliCache()


def bernoulli(n: int, cache: BernoulliCache | None = None) -> Fraction:
    """Exact ``B_n`` (``B_1 = -1/2`` convention)."""
    return (cache if cache is not None else _DEFAULT_BERNOULLI).get(n)


def complex_pow(n, s, ctx: PrecisionContext):
    """``n**(-s)`` at working precision, as ``exp(-s log n)``; exactly 1 for ``n == 1``."""
    mp = ctx.mp
    if n == 1:
        return mp.one
    if n <= 0:
        raise ValueError("base must be positive")
    if isinstance(s, ComplexParameter):
        s = s.value(mp)
    return mp.exp(-s * mp.log(n))


# Stirling coefficients B_{2k} / (2k (2k-1)) for k = 1..6
_STIRLING = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360)


def log_abs_gamma(z: complex) -> float:
    """``log |Gamma(z)|`` for ``Re z > 0`` in double precision (shifted Stirling series)."""
    z = complex(z)
    if z.real <= 0:
        raise ValueError("log_abs_gamma needs Re z > 0")
    shift = 0.0
    while abs(z) < 16:
        shift += math.log(abs(z))
        z += 1
    w = 1 / z
    w2 = w * w
    series = 0j
    p = w
    for c in _STIRLING:
        series += c * p
        p *= w2
    main = (z - 0.5) * cmath.log(z) - z + 0.5 * math.log(2 * math.pi) + series
    return main.real - shift


def log_pochhammer_ratio_bound(sigma, s) -> float:
    """Natural log of :func:`pochhammer_ratio_bound`, finite even where the ratio overflows."""
    sigma = float(sigma)
    if sigma <= 0:
        raise DomainError("real part must be positive")
    s = complex(s)
    if s.imag == 0:
        return 0.0
    # small additive slack covers the double-precision Stirling error
    return log_abs_gamma(sigma + 1) - log_abs_gamma(s + 1) + 1e-9 * (1 + abs(s))


def pochhammer_ratio_bound(sigma, s) -> float:
    """Upper estimate of ``Gamma(sigma+1) / |Gamma(s+1)|`` in double precision.

    ``|(s+1)_m| / (sigma+1)_m`` increases with ``m`` towards this value, so it
    bounds every Pochhammer ratio.  Used for term planning only; saturates to
    ``inf`` when the double-precision result overflows.
    """
    log_r = log_pochhammer_ratio_bound(sigma, s)
    try:
        return math.exp(log_r)
    except OverflowError:
        return math.inf
