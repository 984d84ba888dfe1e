"""Exact power series and rational functions for cogrowth generating functions.

Everything here is over ``Q``.  Relations involving ``sqrt(q)`` are used in
rationalised form.  The two central ones:

* return counts and cogrowth: with ``mu*n(e) = W_n / (2 sqrt q)**n``,
  ``mu*n(e) * (2 sqrt q z / (q z^2 + 1))**(n+1) / (2 sqrt q)``
  is exactly ``W_n z**(n+1) / (q z^2 + 1)**(n+1)``, because the powers of
  ``2 sqrt q`` cancel.  Hence

      z/(1-z^2) * sum gamma_n z^n  ==  sum W_n z^(n+1) / (q z^2 + 1)^(n+1).

* moments: ``gamma_n = q^(n/2) * integral (U_n - U_{n-2}/q) d sigma`` with
  ``integral x^k d sigma = W_k / (2 sqrt q)^k``; the Chebyshev combination
  only has monomials ``x^k`` with ``k = n (mod 2)``, so
  ``gamma_n = sum_k c_{n,k} W_k q^((n-k)/2) / 2^k`` is rational term by term.

For a finite quotient the spectral measure is atomic at the adjacency
eigenvalues ``lambda / (2 sqrt q)`` with weights ``mult / |G|``, and

    gamma(z) = (1 - z^2)/|G| * sum_lambda 1 / (1 - lambda z + q z^2)
             = (1 - z^2)/(|G| z) * p'(u) / p(u),    u = (q z^2 + 1)/z,

``p`` the characteristic polynomial of the adjacency matrix.  No eigenvalue
is ever extracted to build ``gamma``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce as _fold
from math import gcd, isqrt, lcm
from typing import Sequence

import mpmath

from .chebyshev import cogrowth_kernel_poly
from .counting import CountTable
from .marked_groups import MarkedGroup, NotFiniteError
from .polynomial import RationalPolynomial, poly_gcd, squarefree_decomposition

P = RationalPolynomial


class PowerSeries:
    """Truncated power series ``c_0 + ... + c_N z^N`` over ``Q``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence, order: int | None = None):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        if order is not None:
            cs = (cs + [Fraction(0)] * (order + 1))[: order + 1]
        self.coeffs = cs

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def __eq__(self, other):
        return isinstance(other, PowerSeries) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"PowerSeries({[str(c) for c in self.coeffs]})"

    def _check(self, other: "PowerSeries"):
        if other.order != self.order:
            raise ValueError("series truncation orders differ")

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        self._check(other)
        return PowerSeries([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        self._check(other)
        return PowerSeries([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PowerSeries([c * other for c in self.coeffs])
        self._check(other)
        n = self.order
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return PowerSeries(out)

    __rmul__ = __mul__

    def reciprocal(self) -> "PowerSeries":
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("constant term must be nonzero")
        n = self.order
        out = [Fraction(0)] * (n + 1)
        out[0] = 1 / c0
        for k in range(1, n + 1):
            acc = sum((self.coeffs[j] * out[k - j] for j in range(1, k + 1)), Fraction(0))
            out[k] = -acc / c0
        return PowerSeries(out)

    def __truediv__(self, other: "PowerSeries") -> "PowerSeries":
        return self * other.reciprocal()

    def shift(self, k: int) -> "PowerSeries":
        """Multiply by ``z**k`` keeping the truncation order."""
        return PowerSeries(([Fraction(0)] * k + self.coeffs)[: self.order + 1])

    @classmethod
    def from_poly(cls, p: RationalPolynomial, order: int) -> "PowerSeries":
        return cls(p.coeffs, order=order)


class RationalFunction:
    """``num / den`` in lowest terms with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: RationalPolynomial, den: RationalPolynomial | None = None):
        if den is None:
            den = P((1,))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = num, P((1,))
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        lead = den.leading
        self.num = num.scale(1 / lead)
        self.den = den.scale(1 / lead)

    @classmethod
    def from_ints(cls, num: Sequence[int], den: Sequence[int]) -> "RationalFunction":
        return cls(P(num), P(den))

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction(({self.num}) / ({self.den}))"

    def __add__(self, other):
        other = _as_rf(other)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_rf(other))

    def __mul__(self, other):
        other = _as_rf(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other)
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def substitute_reciprocal(self, c) -> "RationalFunction":
        """``f(c / z)`` as a rational function of ``z``."""
        c = Fraction(c)
        m = max(self.num.degree, self.den.degree)

        def flip(p: RationalPolynomial) -> RationalPolynomial:
            out = [Fraction(0)] * (m + 1)
            for k, a in enumerate(p.coeffs):
                out[m - k] = a * c ** k
            return P(out)

        return RationalFunction(flip(self.num), flip(self.den))

    def taylor(self, n: int) -> list[Fraction]:
        """Coefficients ``f_0..f_n`` from the linear recurrence of the denominator."""
        d = self.den.coeffs
        if d[0] == 0:
            raise ZeroDivisionError("rational function has a pole at 0")
        a = self.num
        out: list[Fraction] = []
        for k in range(n + 1):
            acc = a[k]
            for j in range(1, min(k, len(d) - 1) + 1):
                acc -= d[j] * out[k - j]
            out.append(acc / d[0])
        return out

    def to_dict(self) -> dict:
        """Integer coefficient lists (ascending), common content removed."""
        cs = self.num.coeffs + self.den.coeffs
        den = _fold(lcm, (c.denominator for c in cs), 1)
        num_i = [int(c * den) for c in self.num.coeffs]
        den_i = [int(c * den) for c in self.den.coeffs]
        g = _fold(gcd, num_i + den_i, 0) or 1
        return {"numerator": [v // g for v in num_i], "denominator": [v // g for v in den_i]}

    @classmethod
    def from_dict(cls, d: dict) -> "RationalFunction":
        return cls.from_ints([int(v) for v in d["numerator"]], [int(v) for v in d["denominator"]])


def _as_rf(v) -> RationalFunction:
    if isinstance(v, RationalFunction):
        return v
    if isinstance(v, RationalPolynomial):
        return RationalFunction(v)
    return RationalFunction(P((v,)))


# --- identity checks on count tables -------------------------------------------------


@dataclass(frozen=True)
class Residual:
    """Largest absolute coefficient difference and the first order where one occurs."""

    value: Fraction
    first_order: int | None

    def __bool__(self):
        return self.value == 0


def grigorchuk_identity_check(t: CountTable, order: int) -> Residual:
    """Compare both sides of the return-count/cogrowth relation through ``z**order``.

    Coefficients up to ``z**order`` involve ``gamma_0..gamma_{order-1}`` and
    ``W_0..W_{order-1}``, so ``order`` may be at most ``t.n_max + 1``.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if order > t.n_max + 1:
        raise ValueError(f"order {order} needs counts to n={order - 1}, table stops at {t.n_max}")
    q = t.q
    lhs = [Fraction(0)] * (order + 1)
    for k in range(1, order + 1):
        lhs[k] = Fraction(sum(t.gamma[j] for j in range(k - 1, -1, -2)))

    # z / (1 + q z^2), raised to successive powers
    step = PowerSeries.from_poly(P((0, 1)), order) / PowerSeries.from_poly(P((1, 0, q)), order)
    power = step
    rhs = PowerSeries([0], order=order)
    for n in range(order):
        if t.walk[n]:
            rhs = rhs + power * t.walk[n]
        power = power * step

    diffs = [a - b for a, b in zip(lhs, rhs.coeffs)]
    first = next((k for k, d in enumerate(diffs) if d != 0), None)
    return Residual(max(abs(d) for d in diffs), first)


def chebyshev_moment_value(t: CountTable, n: int) -> Fraction:
    """``q^(n/2) * sum_k c_{n,k} * m_k`` with the moments ``m_k = W_k/(2 sqrt q)^k``."""
    if not 2 <= n <= t.n_max:
        raise ValueError(f"need 2 <= n <= n_max, got n={n}")
    q = t.q
    cpoly = cogrowth_kernel_poly(n, q)
    if cpoly.parity_support() - {n % 2}:
        raise AssertionError(f"U_n - U_(n-2)/q has monomials of the wrong parity for n={n}")
    total = Fraction(0)
    for k, c in enumerate(cpoly.coeffs):
        if c:
            total += c * t.walk[k] * q ** ((n - k) // 2) / 2 ** k
    return total


def chebyshev_moment_check(t: CountTable, n: int) -> bool:
    return chebyshev_moment_value(t, n) == t.gamma[n]


# --- finite quotients ---------------------------------------------------------------


def adjacency_matrix(G: MarkedGroup, budget: int = 100_000):
    """Right-multiplication adjacency ``A[x][x s]`` over the generated group,
    as sparse rows ``[(column, count), ...]``, and the element list."""
    elements = G.elements(budget)
    index = {x: i for i, x in enumerate(elements)}
    rows = []
    for x in elements:
        row: dict[int, int] = {}
        for c in range(2 * G.rank):
            j = index[G.step(x, c)]
            row[j] = row.get(j, 0) + 1
        rows.append(sorted(row.items()))
    return rows, elements


def charpoly_sparse(rows) -> RationalPolynomial:
    """Characteristic polynomial ``det(u I - A)`` by Faddeev-LeVerrier in integers."""
    n = len(rows)
    c = [0] * (n + 1)
    c[n] = 1
    M = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        AM = [[0] * n for _ in range(n)]
        for i, row in enumerate(rows):
            out = AM[i]
            for j, a in row:
                Mj = M[j]
                for col in range(n):
                    v = Mj[col]
                    if v:
                        out[col] += a * v
        # M_k = A M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(A M_k)/k
        for i in range(n):
            AM[i][i] += c[n - k + 1]
        M = AM
        tr = 0
        for i, row in enumerate(rows):
            for j, a in row:
                tr += a * M[j][i]
        num = -tr
        if num % k:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")
        c[n - k] = num // k
    return P(c)


def charpoly(matrix: Sequence[Sequence[int]]) -> RationalPolynomial:
    rows = [[(j, v) for j, v in enumerate(r) if v] for r in matrix]
    return charpoly_sparse(rows)


@dataclass
class Spectrum:
    """Adjacency spectrum of a finite quotient.

    ``atoms`` lists ``(eigenvalue, multiplicity)``; integer eigenvalues are
    exact ``Fraction`` values, the rest ``mpmath.mpf`` roots of squarefree
    factors.  ``irrational_factors`` are those factors with their multiplicity.
    """

    order: int
    q: int
    charpoly: RationalPolynomial
    atoms: list
    irrational_factors: list = field(default_factory=list)

    @property
    def top(self):
        return max((abs(lam) for lam, _ in self.atoms), key=_mpf)


_ROOT_DPS = 50


def eigenvalue_atoms(p: RationalPolynomial, bound: int):
    """Roots of a monic integer polynomial whose roots are real with ``|root| <= bound``.

    Returns ``(atoms, irrational_factors)``.
    """
    rest = p
    atoms = []
    for v in range(-bound, bound + 1):
        lin = P((-v, 1))
        mult = 0
        while rest.degree >= 1:
            quo, rem = rest.divmod(lin)
            if not rem.is_zero():
                break
            rest = quo
            mult += 1
        if mult:
            atoms.append((Fraction(v), mult))
    factors = squarefree_decomposition(rest) if rest.degree >= 1 else []
    with mpmath.workdps(_ROOT_DPS):
        for f, mult in factors:
            desc = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(f.coeffs)]
            for root in mpmath.polyroots(desc, maxsteps=500, extraprec=400):
                atoms.append((mpmath.re(root), mult))
    return atoms, factors


def finite_spectrum(G: MarkedGroup, budget: int = 100_000) -> Spectrum:
    rows, elements = adjacency_matrix(G, budget)
    p = charpoly_sparse(rows)
    atoms, factors = eigenvalue_atoms(p, 2 * G.rank)
    return Spectrum(len(elements), G.q, p, atoms, factors)


def _kernel_denominators(p: RationalPolynomial, q: int):
    """``z^d p(u)`` and ``z^(d-1) p'(u)`` at ``u = (q z^2 + 1)/z``."""
    d = p.degree
    u_num = P((1, 0, q))
    z = P((0, 1))

    def homogenise(poly, deg):
        out = P()
        for k, c in enumerate(poly.coeffs):
            if c:
                out = out + (u_num ** k * z ** (deg - k)).scale(c)
        return out

    return homogenise(p, d), homogenise(p.derivative(), d - 1)


def cogrowth_series_finite(G: MarkedGroup, spectrum: Spectrum | None = None) -> RationalFunction:
    """Exact ``gamma(z)`` of a finite quotient via the resolvent trace ``p'/p``."""
    if not G.is_finite:
        raise NotFiniteError(f"{G.name}: cogrowth series needs a finite backend")
    if spectrum is None:
        rows, elements = adjacency_matrix(G)
        p, order = charpoly_sparse(rows), len(elements)
    else:
        p, order = spectrum.charpoly, spectrum.order
    p0, p1 = _kernel_denominators(p, G.q)
    return RationalFunction(P((1, 0, -1)) * p1, p0.scale(order))


def kernel_sum(terms, q: int) -> RationalFunction:
    """``(1 - z^2) * sum_i w_i / (1 - lam_i z + q z^2)`` for exact ``(lam_i, w_i)``."""
    acc = RationalFunction(P())
    for lam, w in terms:
        acc = acc + RationalFunction(P((Fraction(w),)), P((1, -Fraction(lam), q)))
    return acc * RationalFunction(P((1, 0, -1)))


def phi(gamma: RationalFunction) -> RationalFunction:
    """``z gamma(z) / (1 - z^2)``."""
    return gamma * RationalFunction(P((0, 1)), P((1, 0, -1)))


def functional_equation_check(gamma: RationalFunction, q: int) -> bool:
    """``Phi(1/(q z)) == Phi(z)`` as canonical rational functions."""
    f = phi(gamma)
    return f.substitute_reciprocal(Fraction(1, q)) == f


# --- singularities --------------------------------------------------------------------


@dataclass
class Pole:
    value: complex
    kind: str  # "circle" | "real" | "unexplained"
    eigenvalue: object = None
    exact: Fraction | None = None
    multiplicity: int = 1


@dataclass
class SingularityReport:
    q: int
    gamma_exponent: Fraction | None
    gamma_exponent_float: float
    interval: tuple
    poles: list[Pole]
    inner_terms: list
    outer_terms: list
    gamma0: RationalFunction | None = None
    gamma1: RationalFunction | None = None

    @property
    def circle_poles(self) -> list[Pole]:
        return [p for p in self.poles if p.kind == "circle"]

    @property
    def real_poles(self) -> list[Pole]:
        return [p for p in self.poles if p.kind == "real"]

    @property
    def unexplained_poles(self) -> list[Pole]:
        return [p for p in self.poles if p.kind == "unexplained"]

    @property
    def ok(self) -> bool:
        return not self.unexplained_poles

    def evaluate_parts(self, z: complex) -> tuple[complex, complex]:
        """Numerical ``(gamma0(z), gamma1(z))`` from the eigenvalue terms."""
        q = self.q

        def part(terms):
            return (1 - z * z) * sum(
                float(w) / (1 - complex(float(lam)) * z + q * z * z) for lam, w in terms
            )

        return part(self.inner_terms), part(self.outer_terms)

    def summary(self) -> dict:
        def show(p: Pole):
            if p.exact is not None:
                return str(p.exact)
            v = complex(p.value)
            return f"{v.real:.12g}{v.imag:+.12g}j" if v.imag else f"{v.real:.12g}"

        return {
            "q": self.q,
            "gamma_exponent": str(self.gamma_exponent) if self.gamma_exponent is not None
            else self.gamma_exponent_float,
            "interval": [str(v) for v in self.interval],
            "circle_poles": [show(p) for p in self.circle_poles],
            "real_poles": [show(p) for p in self.real_poles],
            "unexplained_poles": [show(p) for p in self.unexplained_poles],
        }


def _rational_sqrt(v: Fraction) -> Fraction | None:
    if v < 0:
        return None
    a, b = isqrt(v.numerator), isqrt(v.denominator)
    if a * a == v.numerator and b * b == v.denominator:
        return Fraction(a, b)
    return None


def _mpf(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


def cogrowth_exponent_from_top(top, q: int):
    """``sqrt(q)(rho + sqrt(rho^2 - 1))`` with ``rho = top/(2 sqrt q)``,
    i.e. ``(top + sqrt(top^2 - 4q))/2``.

    Returns ``(exact, approx)``: ``exact`` is a ``Fraction`` when the square
    root is rational (else ``None``), ``approx`` an ``mpmath.mpf``.
    """
    with mpmath.workdps(_ROOT_DPS):
        if isinstance(top, Fraction):
            s = _rational_sqrt(top * top - 4 * q)
            if s is not None:
                val = (top + s) / 2
                return val, _mpf(val)
        t = _mpf(top)
        return None, (t + mpmath.sqrt(t * t - 4 * q)) / 2


def _poly_roots(p: RationalPolynomial):
    with mpmath.workdps(_ROOT_DPS):
        desc = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(p.coeffs)]
        if len(desc) == 2:
            return [-desc[1] / desc[0]]
        return list(mpmath.polyroots(desc, maxsteps=500, extraprec=400))


def singularity_analysis(gamma: RationalFunction, q: int, spectrum: Spectrum) -> SingularityReport:
    """Classify every pole of a finite-quotient ``gamma(z)``.

    Each eigenvalue ``lam`` contributes the factor ``1 - lam z + q z^2``.  When
    ``lam^2 <= 4q`` its roots are complex conjugates with product ``1/q``, so
    they sit on ``|z| = q^(-1/2)`` exactly; otherwise they are real and must
    lie in ``+-[1/gamma, gamma/q]``.  Factors are removed from the reduced
    denominator by exact division wherever the eigenvalue is rational; what is
    left after all eigenvalue factors have been accounted for is unexplained.
    """
    gexp, gexp_mp = cogrowth_exponent_from_top(spectrum.top, q)
    if gexp is not None:
        lo, hi = 1 / gexp, gexp / q
    else:
        with mpmath.workdps(_ROOT_DPS):
            lo, hi = 1 / gexp_mp, gexp_mp / q
    rest = gamma.den
    poles: list[Pole] = []

    def in_interval(v) -> bool:
        if isinstance(v, Fraction) and isinstance(lo, Fraction):
            return lo <= abs(v) <= hi
        with mpmath.workdps(_ROOT_DPS):
            tol = mpmath.mpf(10) ** -30
            return _mpf(lo) - tol <= abs(_mpf(v)) <= _mpf(hi) + tol

    def classify_real(value, lam, exact=None):
        kind = "real" if in_interval(exact if exact is not None else value) else "unexplained"
        poles.append(Pole(complex(float(value)), kind, lam, exact))

    for lam, _ in spectrum.atoms:
        if not isinstance(lam, Fraction):
            continue
        quad = P((1, -lam, q))
        disc = lam * lam - 4 * q
        s = _rational_sqrt(disc)
        if disc <= 0:
            while rest.degree >= 2 and quad.divides(rest):
                rest = rest // quad
                if disc == 0:
                    root = lam / (2 * q)
                    poles.append(Pole(complex(float(root)), "circle", lam, root))
                    poles.append(Pole(complex(float(root)), "circle", lam, root))
                else:
                    im = (float(-disc) ** 0.5) / (2 * q)
                    re = float(lam) / (2 * q)
                    poles.append(Pole(complex(re, im), "circle", lam))
                    poles.append(Pole(complex(re, -im), "circle", lam))
        elif s is not None:
            for root in {(lam + s) / (2 * q), (lam - s) / (2 * q)}:
                lin = P((-root, 1))
                while rest.degree >= 1 and rest(root) == 0:
                    rest = rest // lin
                    classify_real(root, lam, exact=root)
        else:
            while rest.degree >= 2 and quad.divides(rest):
                rest = rest // quad
                with mpmath.workdps(_ROOT_DPS):
                    sq = mpmath.sqrt(mpmath.mpf(disc.numerator) / disc.denominator)
                    lm = mpmath.mpf(lam.numerator) / lam.denominator
                    for root in ((lm + sq) / (2 * q), (lm - sq) / (2 * q)):
                        classify_real(root, lam)

    for f, _ in spectrum.irrational_factors:
        p0, _ = _kernel_denominators(f, q)
        while rest.degree >= 1:
            g = poly_gcd(rest, p0)
            if g.degree < 1:
                break
            rest = rest // g
            for z in _poly_roots(g):
                with mpmath.workdps(_ROOT_DPS):
                    lam = (q * z * z + 1) / z
                    if abs(mpmath.im(z)) > mpmath.mpf(10) ** -25:
                        ok = abs(abs(z) ** 2 - mpmath.mpf(1) / q) < mpmath.mpf(10) ** -25
                        poles.append(Pole(complex(z), "circle" if ok else "unexplained", complex(lam)))
                    else:
                        lam_r = mpmath.re(lam)
                        if lam_r * lam_r <= 4 * q:
                            poles.append(Pole(complex(z), "circle", float(lam_r)))
                        else:
                            classify_real(mpmath.re(z), float(lam_r))

    if rest.degree >= 1:
        for z in _poly_roots(rest):
            poles.append(Pole(complex(z), "unexplained"))

    inner, outer = [], []
    for lam, mult in spectrum.atoms:
        w = Fraction(mult, spectrum.order)
        (inner if lam * lam <= 4 * q else outer).append((lam, w))

    def exact_part(terms):
        if all(isinstance(lam, Fraction) for lam, _ in terms):
            return kernel_sum(terms, q)
        return None

    return SingularityReport(
        q=q,
        gamma_exponent=gexp,
        gamma_exponent_float=float(gexp_mp),
        interval=(lo, hi),
        poles=poles,
        inner_terms=inner,
        outer_terms=outer,
        gamma0=exact_part(inner),
        gamma1=exact_part(outer),
    )
