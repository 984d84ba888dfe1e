"""Chebyshev polynomials of the second kind, exactly over the rationals.

``U_0 = 1``, ``U_1 = 2x``, ``U_{n+1} = 2x U_n - U_{n-1}``, and for ``t != 0, +-1``

    U_n((t + 1/t) / 2) = (t**(n+1) - t**(-n-1)) / (t - 1/t).

Identities that would involve ``sqrt(q)`` are restated in the variable
``w = sqrt(q) z`` so that every check stays in ``Q``.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .polynomial import RationalPolynomial

_U_CACHE: list[RationalPolynomial] = [RationalPolynomial((1,)), RationalPolynomial((0, 2))]
_TWO_X = RationalPolynomial((0, 2))


def chebyshev_u(n: int) -> RationalPolynomial:
    """``U_n`` from the three-term recurrence (memoised)."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    while len(_U_CACHE) <= n:
        _U_CACHE.append(_TWO_X * _U_CACHE[-1] - _U_CACHE[-2])
    return _U_CACHE[n]


def cogrowth_kernel_poly(n: int, q: int) -> RationalPolynomial:
    """``C_n = U_n - U_{n-2} / q`` for ``n >= 2``; ``U_n`` for ``n < 2``.

    Only degrees congruent to ``n`` mod 2 occur.
    """
    if n < 2:
        return chebyshev_u(n)
    return chebyshev_u(n) - chebyshev_u(n - 2).scale(Fraction(1, q))


def closed_form_check(n: int, t) -> bool:
    """Exact check of ``U_n((t + 1/t)/2) == (t^(n+1) - t^-(n+1)) / (t - 1/t)``."""
    t = Fraction(t)
    if t in (0, 1, -1):
        raise ValueError("t must avoid 0, 1 and -1")
    lhs = chebyshev_u(n)((t + 1 / t) / 2)
    rhs = (t ** (n + 1) - t ** (-n - 1)) / (t - 1 / t)
    return lhs == rhs


def generating_identity_check(order: int) -> bool:
    """``sum_n U_n(x) w^n == 1 / (1 - 2xw + w^2)`` through ``w**order``.

    The right side is expanded as the geometric series
    ``sum_k (2xw - w^2)^k`` with polynomial-in-``x`` coefficients, which does
    not use the recurrence.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    zero = RationalPolynomial()
    step = [zero, RationalPolynomial((0, 2)), RationalPolynomial((-1,))]
    total = [RationalPolynomial((1,))] + [zero] * order
    power = [RationalPolynomial((1,))] + [zero] * order
    for _ in range(order):
        nxt = [zero] * (order + 1)
        for i, a in enumerate(power):
            if a.is_zero():
                continue
            for j, b in enumerate(step):
                if i + j <= order and not b.is_zero():
                    nxt[i + j] = nxt[i + j] + a * b
        power = nxt
        total = [s + p for s, p in zip(total, power)]
    return all(total[n] == chebyshev_u(n) for n in range(order + 1))


_SQRT_BITS = 256


def _sqrt_upper(v: Fraction) -> Fraction:
    """Rational upper bound for ``sqrt(v)``, exact when ``v`` is a rational square."""
    if v < 0:
        raise ValueError("negative radicand")
    a, b = v.numerator, v.denominator
    n = a * b
    s = isqrt(n)
    if s * s == n:
        return Fraction(s, b)
    scale = 1 << _SQRT_BITS
    return Fraction(isqrt(n * scale * scale) + 1, b * scale)


def growth_bound_check(m: int, x) -> bool:
    """``|U_m(x)| <= m+1`` on ``[0, 1]`` and ``<= (m+1)(x + sqrt(x^2-1))^m`` for ``x >= 1``.

    The majorant is rounded up (``sqrt`` bounded above by a 256-bit rational),
    so an exact-arithmetic failure can't come from rounding.
    """
    x = Fraction(x)
    if x < 0:
        raise ValueError("growth bound is stated for x >= 0")
    lhs = abs(chebyshev_u(m)(x))
    if x <= 1:
        return lhs <= m + 1
    return lhs <= (m + 1) * (x + _sqrt_upper(x * x - 1)) ** m


def chebyshev_u_value(m: int, x: float) -> float:
    """Floating-point ``U_m(x)`` by the recurrence."""
    if m == 0:
        return 1.0
    a, b = 1.0, 2.0 * x
    for _ in range(m - 1):
        a, b = b, 2.0 * x * b - a
    return b
