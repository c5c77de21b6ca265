"""Exponential moment generating function of the word measure.

``E(t) = sum_m u_m(s) t^m / m!`` is computed here from its product series,
never from the moment recurrence, so it serves as an independent check on
the moment tables.  ``F(t)`` is the ``t -> b t`` invariant limit of
``(b^k t)^s exp(-lam b^k t) E(b^k t)``; its mean over one multiplicative
period is ``Gamma(s)/log b * sum_{n in B*} (n + lam)^-s``, where ``B*`` are
the integers written with digits ``max(A) - a``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .digitset import DigitSet, iter_block
from .errors import DomainError
from .moments import check_convergence
from .numerics import BOUND, ComplexParameter, PrecisionContext, inflate, to_mp

__all__ = [
    "MgfEvaluation",
    "LimitFunctionEvaluation",
    "FourierEvaluation",
    "alpha",
    "evaluate_E",
    "functional_equation_residual",
    "taylor_coefficients",
    "evaluate_F",
    "rescaled_mgf",
    "fourier_coefficient",
    "fourier_coefficient_quadrature",
    "gauss_legendre",
]


@dataclass(frozen=True)
class MgfEvaluation:
    t: object
    J: int
    value: object
    error_bound: object


@dataclass(frozen=True)
class LimitFunctionEvaluation:
    t: object
    J_pos: int
    value: object
    error_bound: object


@dataclass(frozen=True)
class FourierEvaluation:
    k: int
    depth: int
    value: object
    error_bound: object


def _num(x, mp):
    if isinstance(x, (int, float)):
        return mp.mpf(x)
    if isinstance(x, complex):
        return mp.mpc(x)
    return mp.convert(x)


def alpha(ds: DigitSet, t, ctx: PrecisionContext):
    """``sum_{a in A} exp(a t)``; closed form ``(e^{bt}-1)/(e^t-1)`` for the full set."""
    mp = ctx.mp
    t = _num(t, mp)
    if ds.is_full and abs(t) > 2**-8:
        return mp.expm1(ds.base * t) / mp.expm1(t)
    e = mp.exp(t)
    return mp.fsum(e**a for a in ds.digits)


def evaluate_E(ds: DigitSet, s, t, ctx: PrecisionContext, *, J: int | None = None,
               eps=None) -> MgfEvaluation:
    """``1 + sum_{j=1..J} b^{-js} prod_{i=1..j} alpha(t / b^i)``."""
    s = ComplexParameter.of(s)
    check_convergence(ds, s)
    mp = ctx.mp
    t = _num(t, mp)
    eps = ctx.eps if eps is None else BOUND.mpf(eps)
    rho = ds.N / BOUND.power(ds.base, to_mp(s.sigma, BOUND))
    growth = BOUND.exp(max(BOUND.zero, BOUND.mpf(mp.re(t))))

    def tail(j):
        return inflate(growth * rho ** (j + 1) / (1 - rho))

    if J is None:
        J = 1
        while tail(J) >= eps:
            J += 1
    sv = s.value(mp)
    step = mp.power(ds.base, -sv)
    weight = mp.one
    prod = mp.one
    total = mp.one
    arg = t
    for _ in range(J):
        arg = arg / ds.base
        prod = prod * alpha(ds, arg, ctx)
        weight = weight * step
        total += weight * prod
    return MgfEvaluation(t, J, total, tail(J))


def functional_equation_residual(ds: DigitSet, s, t, ctx: PrecisionContext, *, eps=None):
    """``|E(t) - 1 - b^{-s} alpha(t/b) E(t/b)|``."""
    mp = ctx.mp
    s = ComplexParameter.of(s)
    t = _num(t, mp)
    lhs = evaluate_E(ds, s, t, ctx, eps=eps).value
    inner = evaluate_E(ds, s, t / ds.base, ctx, eps=eps).value
    rhs = 1 + mp.power(ds.base, -s.value(mp)) * alpha(ds, t / ds.base, ctx) * inner
    return abs(lhs - rhs)


def taylor_coefficients(ds: DigitSet, s, count: int, ctx: PrecisionContext, *,
                        radius=1, points: int = 64) -> list:
    """First ``count`` Taylor coefficients of ``E`` at 0 by a discrete Cauchy integral.

    Multiply coefficient ``m`` by ``m!`` to compare with the raw moment ``u_m(s)``.
    Aliasing error is of the size of coefficient ``m + points`` times ``radius**points``.
    """
    if count > points:
        raise ValueError("need at least as many nodes as coefficients")
    mp = ctx.mp
    r = mp.mpf(radius)
    nodes = [mp.expjpi(mp.mpf(2 * k) / points) for k in range(points)]
    values = [evaluate_E(ds, s, r * w, ctx, eps=ctx.eps * BOUND.mpf(10) ** -5).value for w in nodes]
    out = []
    for m in range(count):
        acc = mp.fsum(v * nodes[(-k * m) % points] for k, v in enumerate(values))
        out.append(acc / points / r**m)
    return out


def _reflected_digits(ds: DigitSet) -> list[int]:
    return sorted(ds.f - a for a in ds.digits)


def _phi(base: int, digits: list[int], q, q_abs, mp, eps):
    """``sum_{n admissible for digits} q^n`` (0 included) and its truncation bound."""
    n_total = len(digits)
    lead = sum(1 for d in digits if d)
    total = mp.one
    if lead == 0:
        return total, BOUND.zero
    qa = BOUND.mpf(q_abs)
    level = 0
    while True:
        level += 1
        lo = base ** (level - 1)
        nxt = lead * n_total ** level * qa ** (base**level)
        here = lead * n_total ** (level - 1) * qa**lo
        if here < eps * BOUND.mpf(10) ** -3 and nxt < here / 2:
            return total, inflate(2 * here)
        total += mp.fsum(q**n for n in iter_block(base, digits, level))


def evaluate_F(ds: DigitSet, s, t, ctx: PrecisionContext, *, eps=None) -> LimitFunctionEvaluation:
    """Multiplicatively periodic limit function, ``Re t > 0``."""
    s = ComplexParameter.of(s)
    check_convergence(ds, s)
    mp = ctx.mp
    t = _num(t, mp)
    if not mp.re(t) > 0:
        raise DomainError("F is defined for Re t > 0 only")
    eps = ctx.eps if eps is None else BOUND.mpf(eps)
    sv = s.value(mp)
    lam = to_mp(ds.lam, mp)
    digits = _reflected_digits(ds)

    def power_part(x):
        return mp.exp(sv * mp.log(x) - lam * x)

    q = mp.exp(-t)
    phi, phi_err = _phi(ds.base, digits, q, abs(q), mp, eps)
    lead = power_part(t)
    lead_abs = BOUND.mpf(abs(lead))
    e_eps = eps / (4 * max(BOUND.one, lead_abs * (BOUND.mpf(abs(phi)) + phi_err)))
    E = evaluate_E(ds, s, t, ctx, eps=e_eps)
    value = lead * phi * E.value
    err = lead_abs * (BOUND.mpf(abs(phi)) * E.error_bound + phi_err * (BOUND.mpf(abs(E.value)) + E.error_bound))

    j = 0
    x = t
    prev = None
    while True:
        j += 1
        x = x * ds.base
        head = power_part(x)
        mag = BOUND.mpf(abs(head))
        if mag < eps * BOUND.mpf(10) ** -3 and prev is not None and mag < prev / 2:
            # double-exponential decay: the rest is below twice this term
            err += inflate(4 * mag)
            j -= 1
            break
        qj = mp.exp(-x)
        ph, ph_err = _phi(ds.base, digits, qj, abs(qj), mp, eps * BOUND.mpf(10) ** -3)
        value += head * ph
        err += mag * ph_err
        prev = mag
    return LimitFunctionEvaluation(t, j, value, inflate(err))


def rescaled_mgf(ds: DigitSet, s, t, k: int, ctx: PrecisionContext):
    """``(b^k t)^s exp(-lam b^k t) E(b^k t)``, which tends to ``F(t)`` as ``k`` grows."""
    s = ComplexParameter.of(s)
    mp = ctx.mp
    x = _num(t, mp) * ds.base**k
    sv = s.value(mp)
    lam = to_mp(ds.lam, mp)
    pre = mp.exp(sv * mp.log(x) - lam * x)
    eps = ctx.eps / max(BOUND.one, BOUND.mpf(abs(pre)))
    return pre * evaluate_E(ds, s, x, ctx, eps=eps).value


def fourier_coefficient(ds: DigitSet, s, k: int, ctx: PrecisionContext, *, eps=None,
                        max_depth: int = 16, max_count: int = 200_000) -> FourierEvaluation:
    """``Gamma(z)/log b * sum_{n in B*} (n + lam)^-z`` with ``z = s - 2 pi i k / log b``.

    The sum runs over reflected-digit integers of at most ``depth`` digits;
    the omitted ones are bounded by a geometric series of ratio ``N/b^sigma``.
    ``depth`` is the smallest meeting ``eps`` unless that would pass
    ``max_depth`` or enumerate more than ``max_count`` integers; the reported
    ``error_bound`` is then larger than ``eps``.
    """
    s = ComplexParameter.of(s)
    check_convergence(ds, s)
    mp = ctx.mp
    eps = ctx.eps if eps is None else BOUND.mpf(eps)
    log_b = mp.log(ds.base)
    z = s.value(mp) - 2j * mp.pi * k / log_b
    gamma_over_log = mp.gamma(z) / log_b
    g_abs = BOUND.mpf(abs(gamma_over_log))
    digits = _reflected_digits(ds)
    lead = sum(1 for d in digits if d)
    rho = ds.N / BOUND.power(ds.base, to_mp(s.sigma, BOUND))

    def tail(depth):
        if lead == 0:
            return BOUND.zero
        return inflate(g_abs * lead * rho**depth / (1 - rho))

    depth, count = 0, 0
    while depth < max_depth and tail(depth) >= eps:
        nxt = lead * len(digits) ** depth
        if count + nxt > max_count:
            break
        depth += 1
        count += nxt
    lam = to_mp(ds.lam, mp)
    parts = [mp.power(lam, -z)]
    for level in range(1, depth + 1):
        parts.append(mp.fsum(mp.exp(-z * mp.log(n + lam)) for n in iter_block(ds.base, digits, level)))
    return FourierEvaluation(k, depth, gamma_over_log * mp.fsum(parts), tail(depth))


def gauss_legendre(n: int, mp) -> list[tuple]:
    """Nodes and weights on ``[-1, 1]`` by Newton iteration on ``P_n``."""
    out = []
    for i in range(1, n + 1):
        x = mp.cos(mp.pi * (i - mp.mpf(1) / 4) / (n + mp.mpf(1) / 2))
        for _ in range(100):
            p0, p1 = mp.one, x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < mp.eps * 4:
                break
        p0, p1 = mp.one, x
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = n * (x * p1 - p0) / (x * x - 1)
        out.append((x, 2 / ((1 - x * x) * dp * dp)))
    return out


def fourier_coefficient_quadrature(ds: DigitSet, s, k: int, ctx: PrecisionContext, *,
                                   tol=1e-20, nodes: int = 12, max_panels: int = 64):
    """``int_0^1 F(b^u) exp(-2 pi i k u) du`` by composite Gauss-Legendre.

    Panels are doubled until two successive estimates agree within ``tol``.
    Returns ``(value, last_difference, panels)``.
    """
    mp = ctx.mp
    rule = gauss_legendre(nodes, mp)

    def integrand(u):
        return evaluate_F(ds, s, mp.power(ds.base, u), ctx).value * mp.expjpi(-2 * k * u)

    def composite(panels):
        h = mp.one / panels
        acc = []
        for p in range(panels):
            mid = (p + mp.mpf(1) / 2) * h
            for x, w in rule:
                acc.append(w * integrand(mid + x * h / 2))
        return mp.fsum(acc) * h / 2

    panels = 1
    prev = composite(panels)
    diff = BOUND.inf
    while panels < max_panels:
        panels *= 2
        cur = composite(panels)
        diff = abs(cur - prev)
        if diff < tol:
            return cur, diff, panels
        prev = cur
    return prev, diff, panels
