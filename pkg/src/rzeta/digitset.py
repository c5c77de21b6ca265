"""Radix and admissible-digit configuration.

An integer is *admissible* when every digit of its minimal radix-``b``
representation belongs to the chosen digit set.  Nothing here ever builds
words explicitly: blocks of admissible integers are produced by an odometer
over digit positions, and the digit set enters the moment recurrence only
through its power sums.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import DigitSpecError

__all__ = [
    "DigitSet",
    "parse_digit_spec",
    "admissible_in_block",
    "admissible_below",
    "power_sums",
    "iter_block",
]

_ITEM = re.compile(r"^\s*(\d+)\s*(?:-\s*(\d+)\s*)?$")


@dataclass(frozen=True)
class DigitSet:
    """Radix ``base`` together with the sorted tuple of admissible ``digits``."""

    base: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.base, int) or self.base < 2:
            raise DigitSpecError(f"radix must be an integer >= 2, got {self.base!r}")
        digits = tuple(sorted(set(int(d) for d in self.digits)))
        if not digits:
            raise DigitSpecError("digit set is empty")
        if digits[0] < 0 or digits[-1] >= self.base:
            raise DigitSpecError(f"digits must lie in 0..{self.base - 1}, got {digits}")
        if digits == (0,):
            raise DigitSpecError("digit set must not be reduced to {0}")
        object.__setattr__(self, "digits", digits)

    @classmethod
    def full(cls, base: int) -> "DigitSet":
        return cls(base, tuple(range(base)))

    @property
    def N(self) -> int:
        return len(self.digits)

    @property
    def N1(self) -> int:
        return sum(1 for d in self.digits if d)

    @property
    def f(self) -> int:
        return self.digits[-1]

    @property
    def lam(self) -> Fraction:
        """Largest digit divided by ``base - 1``; the decay base of rescaled moments."""
        return Fraction(self.f, self.base - 1)

    @property
    def is_full(self) -> bool:
        return self.N == self.base

    @property
    def abscissa(self) -> float:
        """``log_b N``: the restricted series converges iff ``Re s`` exceeds it."""
        return math.log(self.N) / math.log(self.base)

    def is_admissible(self, n: int) -> bool:
        if n < 0:
            return False
        allowed = set(self.digits)
        while n:
            n, d = divmod(n, self.base)
            if d not in allowed:
                return False
        return True

    def spec(self) -> str:
        """Canonical digit-spec string (ranges collapsed)."""
        if self.is_full:
            return "all"
        items = []
        for _, run in itertools.groupby(enumerate(self.digits), lambda p: p[1] - p[0]):
            run = [d for _, d in run]
            items.append(str(run[0]) if len(run) == 1 else f"{run[0]}-{run[-1]}")
        return ",".join(items)


def parse_digit_spec(spec: str, base: int) -> DigitSet:
    """Parse ``"all"`` or a comma list of digits and inclusive ranges.

    >>> parse_digit_spec("0-8", 10).N
    9
    """
    if not isinstance(base, int) or base < 2:
        raise DigitSpecError(f"radix must be an integer >= 2, got {base!r}")
    text = spec.strip()
    if text == "all":
        return DigitSet.full(base)
    if not text:
        raise DigitSpecError("empty digit specification")
    digits: set[int] = set()
    for item in text.split(","):
        m = _ITEM.match(item)
        if m is None:
            raise DigitSpecError(f"malformed digit spec item {item!r}")
        lo = int(m.group(1))
        hi = int(m.group(2)) if m.group(2) is not None else lo
        if hi < lo:
            raise DigitSpecError(f"descending range {item.strip()!r}")
        if hi >= base:
            raise DigitSpecError(f"digit {hi} is not below the radix {base}")
        digits.update(range(lo, hi + 1))
    return DigitSet(base, tuple(digits))


def iter_block(base: int, digits: Sequence[int], level: int) -> Iterator[int]:
    """Integers with exactly ``level`` digits, all drawn from ``digits``, ascending.

    No validation of ``digits`` beyond sortedness, so sets such as ``{0}``
    (which :class:`DigitSet` refuses) can be enumerated as well.
    """
    digits = sorted(digits)
    lead = [d for d in digits if d]
    if level < 1 or not lead:
        return
    weights = [base ** (level - 1 - i) for i in range(level)]
    # the product over sorted digits is an odometer: lexicographic == numeric order
    for word in itertools.product(lead, *([digits] * (level - 1))):
        yield sum(d * w for d, w in zip(word, weights))


def admissible_in_block(ds: DigitSet, level: int) -> Iterator[int]:
    """Admissible ``n`` with ``b**(level-1) <= n < b**level``, ascending (lazy)."""
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    return iter_block(ds.base, ds.digits, level)


def admissible_below(ds: DigitSet, level: int) -> Iterator[int]:
    """Admissible ``n`` with ``0 < n < b**(level-1)``, ascending (lazy)."""
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    return itertools.chain.from_iterable(
        iter_block(ds.base, ds.digits, lv) for lv in range(1, level)
    )


def power_sums(ds: DigitSet, m_max: int) -> list[int]:
    """Exact ``S_j = sum(a**j for a in A)`` for ``j = 0..m_max`` (with ``0**0 = 1``)."""
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    sums = [0] * (m_max + 1)
    for a in ds.digits:
        p = 1
        for j in range(m_max + 1):
            sums[j] += p
            p *= a
    return sums
