"""Floating-point estimators for the limits behind the exact counts.

Exactness lives upstream; here big-integer counts are turned into estimates
of the spectral radius ``rho`` of the (non-normalised) walk measure, the
cogrowth exponent ``gamma`` and the even-ratio limit, and into diagnostics of
the Chebyshev integral representation for finite quotients.  Estimators use
even indices only, so bipartite Cayley graphs (``W_odd = 0``) need no special
case.  Atomic sums are evaluated with mpmath at ``WORK_DPS`` digits and
reported as floats; results are deterministic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .counting import CountTable
from .exact_series import Spectrum, _rational_sqrt

WORK_DPS = 40
DEFAULT_TOLERANCE = 1e-6
DEFAULT_WINDOW = 5
# amenability verdict thresholds on the relative gap (q - gamma_hat)/q
AMENABLE_GAP = 0.05
NONAMENABLE_GAP = 0.10


class InsufficientData(ValueError):
    pass


class TrivialKernel(ValueError):
    """All even cogrowth coefficients beyond gamma_0 vanish in the table."""


@dataclass(frozen=True)
class Estimate:
    value: float
    n: int  # index 2n of the (last) even coefficient used
    method: str


def _ratio(a: int, b: int) -> float:
    # int / int is correctly rounded even for huge operands
    return a / b


def _root(v: int, k: int) -> float:
    return math.exp(math.log(v) / k)


def spectral_radius_estimate(t: CountTable, method: str = "even_ratio") -> Estimate:
    """``rho`` from return counts: ``W_2n^(1/2n)`` or ``sqrt(W_2n+2/W_2n)``, over ``2 sqrt q``."""
    if t.n_max < 4:
        raise InsufficientData("need counts up to n >= 4")
    norm = 2 * math.sqrt(t.q)
    top = t.n_max // 2
    if method == "root":
        for n in range(top, 0, -1):
            if t.walk[2 * n]:
                return Estimate(_root(t.walk[2 * n], 2 * n) / norm, 2 * n, method)
    elif method == "even_ratio":
        for n in range(top - 1, 0, -1):
            if t.walk[2 * n] and t.walk[2 * n + 2]:
                return Estimate(math.sqrt(_ratio(t.walk[2 * n + 2], t.walk[2 * n])) / norm,
                                2 * n + 2, method)
    else:
        raise ValueError(f"unknown method {method!r}")
    raise InsufficientData("no nonzero even return counts")


def _has_kernel(t: CountTable) -> bool:
    return any(t.gamma[2 * n] for n in range(1, t.n_max // 2 + 1))


def cogrowth_exponent_estimate(t: CountTable, method: str = "even_ratio") -> Estimate:
    """``gamma_2n^(1/2n)`` (``root``) or ``sqrt(gamma_2n+2 / gamma_2n)`` (``even_ratio``)."""
    if not _has_kernel(t):
        raise TrivialKernel(f"{t.group}: gamma_2n = 0 for 0 < 2n <= {t.n_max}")
    top = t.n_max // 2
    if method == "root":
        for n in range(top, 0, -1):
            if t.gamma[2 * n]:
                return Estimate(_root(t.gamma[2 * n], 2 * n), 2 * n, method)
    elif method == "even_ratio":
        for n in range(top - 1, 0, -1):
            if t.gamma[2 * n] and t.gamma[2 * n + 2]:
                return Estimate(math.sqrt(_ratio(t.gamma[2 * n + 2], t.gamma[2 * n])),
                                2 * n + 2, method)
        raise InsufficientData("no two consecutive nonzero even coefficients")
    else:
        raise ValueError(f"unknown method {method!r}")
    raise TrivialKernel(t.group)


def grigorchuk_exponent(rho: float, q: int) -> float:
    """``sqrt(q) (rho + sqrt(rho^2 - 1))``; NaN when ``rho < 1``."""
    if rho < 1:
        return math.nan
    return math.sqrt(q) * (rho + math.sqrt(rho * rho - 1))


def h_function(x: float, q: int) -> float:
    """``((x + s)^2 - 1/q) / (2 s (x + s))`` with ``s = sqrt(x^2 - 1)``, ``x > 1``."""
    s = math.sqrt(x * x - 1)
    t = x + s
    return (t * t - 1 / q) / (2 * s * t)


@dataclass
class SpectralData:
    """Moments of the spectral measure plus ``rho`` and the quantities built from it.

    ``atoms`` (finite quotients only) is the folded measure: pairs
    ``(x, weight)`` with ``x = |lambda| / (2 sqrt q)`` and the weights of
    ``+-x`` merged.  ``rho_sq`` is ``rho^2`` as a Fraction when known exactly.
    """

    q: int
    normalization: float
    moments: list[float]
    rho: float
    rho_n: int | None = None
    atoms: list[tuple[float, float]] | None = None
    rho_sq: Fraction | None = None

    @property
    def rho0(self) -> float:
        return (1 + self.rho) / 2

    @property
    def cogrowth_exponent(self) -> float:
        return grigorchuk_exponent(self.rho, self.q)

    @property
    def h_rho0(self) -> float:
        return h_function(self.rho0, self.q)

    def predicted_ratio(self) -> float:
        """``q (rho + sqrt(rho^2 - 1))^2``, exactly rounded when ``rho^2`` is exact
        and ``rho^2 (rho^2 - 1)`` is a rational square."""
        if self.rho_sq is not None:
            r = _rational_sqrt(self.rho_sq * (self.rho_sq - 1))
            if r is not None:
                return float(self.q * (2 * self.rho_sq - 1 + 2 * r))
        t = self.rho + math.sqrt(self.rho * self.rho - 1)
        return self.q * t * t


def spectral_data(t: CountTable, spectrum: Spectrum | None = None,
                  method: str = "even_ratio") -> SpectralData:
    q = t.q
    norm = 2 * math.sqrt(q)
    moments = [w / (4 * q) ** (k // 2) / (norm if k % 2 else 1) for k, w in enumerate(t.walk)]
    if spectrum is None:
        est = spectral_radius_estimate(t, method)
        return SpectralData(q, norm, moments, est.value, est.n)
    folded: dict = {}
    for lam, mult in spectrum.atoms:
        key = abs(lam)
        folded[key] = folded.get(key, 0) + Fraction(mult, spectrum.order)
    with mpmath.workdps(WORK_DPS):
        sq = mpmath.sqrt(4 * q)
        atoms = sorted(
            (float(_mp(lam) / sq), float(w)) for lam, w in folded.items()
        )
    top = spectrum.top
    rho_sq = Fraction(top) ** 2 / (4 * q) if isinstance(top, Fraction) else None
    with mpmath.workdps(WORK_DPS):
        rho = float(_mp(top) / mpmath.sqrt(4 * q))
    return SpectralData(q, norm, moments, rho, None, atoms, rho_sq)


def _mp(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


def supermultiplicativity_violations(t: CountTable) -> list[tuple[int, int]]:
    """Pairs ``(2k, 2j)`` with ``W_2(k+j) < W_2k W_2j`` (there should be none)."""
    top = t.n_max // 2
    bad = []
    for k in range(top + 1):
        for j in range(k, top + 1 - k):
            if t.walk[2 * (k + j)] < t.walk[2 * k] * t.walk[2 * j]:
                bad.append((2 * k, 2 * j))
    return bad


@dataclass
class RatioRow:
    n: int  # the row compares gamma_{2n+2} with gamma_{2n}
    gamma_2n: int
    ratio: float
    prediction: float
    deviation: float
    root_estimate: float


@dataclass
class RatioTable:
    rows: list[RatioRow]
    prediction: float
    window: int

    @property
    def trailing_max_deviation(self) -> float:
        tail = self.rows[-self.window:]
        return max((r.deviation for r in tail), default=math.nan)

    def window_maxima(self) -> list[float]:
        """Max deviation over each consecutive window of rows."""
        w = self.window
        devs = [r.deviation for r in self.rows]
        return [max(devs[i:i + w]) for i in range(len(devs) - w + 1)]


def ratio_limit_experiment(t: CountTable, rho, window: int = DEFAULT_WINDOW) -> RatioTable:
    """Tabulate ``gamma_{2n+2}/gamma_{2n}`` against ``q (rho + sqrt(rho^2-1))^2``.

    ``rho`` is a float or a :class:`SpectralData` (whose exact data, if any,
    make the prediction exactly rounded).
    """
    if isinstance(rho, SpectralData):
        prediction = rho.predicted_ratio()
    else:
        tt = rho + math.sqrt(rho * rho - 1)
        prediction = t.q * tt * tt
    rows = []
    for n in range(1, (t.n_max - 2) // 2 + 1):
        a, b = t.gamma[2 * n], t.gamma[2 * n + 2]
        if not a:
            continue
        ratio = _ratio(b, a)
        rows.append(RatioRow(n, a, ratio, prediction, abs(ratio - prediction), _root(a, 2 * n)))
    return RatioTable(rows, prediction, window)


@dataclass
class AmenabilityVerdict:
    verdict: str  # consistent-with-amenable | nonamenable-indicated | inconclusive | trivial kernel
    q: int
    gamma_hat: float | None
    gamma_root: float | None
    gap: float | None
    rho_hat: float | None
    gamma_from_rho: float | None
    n_used: int | None
    finite_n: bool = True
    note: str = ""


def amenability_diagnostic(t: CountTable, q: int | None = None,
                           amenable_gap: float = AMENABLE_GAP,
                           nonamenable_gap: float = NONAMENABLE_GAP) -> AmenabilityVerdict:
    """Compare the finite-n cogrowth estimate with ``q = 2r - 1``.

    The verdict only describes the data: a relative gap ``(q - gamma_hat)/q``
    at most ``amenable_gap`` is *consistent with amenable*, one of at least
    ``nonamenable_gap`` *indicates non-amenability*, anything between is
    inconclusive.  Nothing here is a proof.
    """
    q = t.q if q is None else q
    rho_est = spectral_radius_estimate(t, "even_ratio")
    try:
        est = cogrowth_exponent_estimate(t, "even_ratio")
    except TrivialKernel:
        return AmenabilityVerdict("trivial kernel", q, None, None, None, rho_est.value,
                                  grigorchuk_exponent(rho_est.value, q), None,
                                  note="no nontrivial kernel words in range; no estimate")
    root = cogrowth_exponent_estimate(t, "root").value
    gap = q - est.value
    rel = gap / q
    if rel <= amenable_gap:
        verdict = "consistent-with-amenable"
    elif rel >= nonamenable_gap:
        verdict = "nonamenable-indicated"
    else:
        verdict = "inconclusive"
    return AmenabilityVerdict(
        verdict, q, est.value, root, gap, rho_est.value,
        grigorchuk_exponent(rho_est.value, q), est.n,
        note=f"finite-n estimate from coefficients up to {est.n}; not a proof",
    )


@dataclass
class SplitDiagnostics:
    n: int
    rho: float
    rho0: float
    I_n: float
    I_n1: float
    I_n2: float
    I_tilde2: float
    majorant: float
    excluded_atoms: list[float] = field(default_factory=list)
    relative_gap: float = math.nan  # |I_n2 / I~_n2 - 1|, formed before rounding to float


def _u_mp(m: int, x):
    if m < 0:
        return mpmath.mpf(0)
    a, b = mpmath.mpf(1), 2 * x
    if m == 0:
        return a
    for _ in range(m - 1):
        a, b = b, 2 * x * b - a
    return b


def integral_split_diagnostics(s: SpectralData, n: int) -> SplitDiagnostics:
    """Atomic versions of the folded Chebyshev integral and its split at ``rho0``.

    ``I_n`` sums ``U_2n - U_{2n-2}/q`` over all folded atoms; ``I_n1`` over
    atoms in ``[0, rho0]`` and ``I_n2`` over ``(rho0, rho]``.  ``I~_n2`` replaces
    the Chebyshev combination by ``t^2n (t^2 - 1/q) / (2 sqrt(x^2-1) t)``,
    ``t = x + sqrt(x^2 - 1)``; atoms at ``x = 1`` would make that singular and
    are listed in ``excluded_atoms`` instead.
    """
    if s.atoms is None:
        raise ValueError("integral split needs the atoms of a finite quotient")
    if n < 1:
        raise ValueError("n must be >= 1")
    q = s.q
    with mpmath.workdps(WORK_DPS):
        rho = _mp(s.rho_sq).sqrt() if s.rho_sq is not None else mpmath.mpf(s.rho)
        rho0 = (1 + rho) / 2
        I1 = mpmath.mpf(0)
        I2 = mpmath.mpf(0)
        It = mpmath.mpf(0)
        excluded = []
        for x, w in s.atoms:
            xm, wm = mpmath.mpf(x), mpmath.mpf(w)
            val = wm * (_u_mp(2 * n, xm) - _u_mp(2 * n - 2, xm) / q)
            if xm <= rho0:
                I1 += val
                continue
            I2 += val
            if xm == 1:
                excluded.append(x)
                continue
            sq = mpmath.sqrt(xm * xm - 1)
            tt = xm + sq
            It += wm * tt ** (2 * n) * (tt * tt - mpmath.mpf(1) / q) / (2 * sq * tt)
        t0 = rho0 + mpmath.sqrt(rho0 * rho0 - 1)
        majorant = 2 * (2 * n + 1) * t0 ** (2 * n)
        gap = abs(I2 / It - 1) if It else mpmath.mpf("nan")
        return SplitDiagnostics(n, float(rho), float(rho0), float(I1 + I2), float(I1),
                                float(I2), float(It), float(majorant), excluded, float(gap))


def nonincreasing(values: Sequence[float], slack: float = 1e-15) -> bool:
    """``values[i+1] <= values[i] + slack`` throughout."""
    return all(b <= a + slack for a, b in zip(values, values[1:]))


def lemma_ratios(f_values: Sequence[float], weights: Sequence[float], n_max: int) -> list[float]:
    """``int f^(n+1) d mu / int f^n d mu`` for ``n = 0..n_max``, discrete ``mu``."""
    if not f_values or len(f_values) != len(weights):
        raise ValueError("need matching nonempty atom lists")
    if any(f <= 0 for f in f_values) or any(w <= 0 for w in weights):
        raise ValueError("values and weights must be positive")
    top = max(f_values)
    g = [f / top for f in f_values]
    out = []
    for n in range(n_max + 1):
        num = sum(w * gi ** (n + 1) for gi, w in zip(g, weights))
        den = sum(w * gi ** n for gi, w in zip(g, weights))
        out.append(top * (num / den))
    return out


def discrete_ratio_lemma_check(f_values: Sequence[float], weights: Sequence[float],
                               n_max: int, tol: float = DEFAULT_TOLERANCE) -> bool:
    """Whether the moment ratio at ``n_max`` is within ``tol`` of ``max f``."""
    return abs(lemma_ratios(f_values, weights, n_max)[-1] - max(f_values)) <= tol


@dataclass
class RemarkProbe:
    rows: list[tuple[int, float]]  # (n, L_n)
    h_rho0: float
    epsilon: float

    @property
    def holds(self) -> bool:
        return all(L <= self.h_rho0 + self.epsilon for _, L in self.rows)

    @property
    def inf_L(self) -> float:
        return min(L for _, L in self.rows)


def remark_bound_probe(t: CountTable, s: SpectralData, n_max: int | None = None,
                       epsilon: float = 1e-9) -> RemarkProbe:
    """``L_n = (gamma_2n / mu*2n(e)) (rho / (sqrt(q)(rho + sqrt(rho^2-1))))^2n`` against ``h(rho0)``.

    Observational: reports whether ``L_n <= h(rho0) + epsilon`` over the range
    and the smallest ``L_n`` seen.
    """
    q = s.q
    top = t.n_max // 2 if n_max is None else n_max
    if 2 * top > t.n_max:
        raise ValueError(f"need counts up to {2 * top}")
    rows = []
    with mpmath.workdps(WORK_DPS):
        rho = _mp(s.rho_sq).sqrt() if s.rho_sq is not None else mpmath.mpf(s.rho)
        tt = rho + mpmath.sqrt(rho * rho - 1)
        log_factor = mpmath.log(rho / (mpmath.sqrt(q) * tt))
        for n in range(1, top + 1):
            g, w = t.gamma[2 * n], t.walk[2 * n]
            if not g:
                rows.append((n, 0.0))
                continue
            log_l = (mpmath.log(g) - mpmath.log(w) + n * mpmath.log(4 * q) + 2 * n * log_factor)
            rows.append((n, float(mpmath.exp(log_l))))
        rho0 = (1 + rho) / 2
        s0 = mpmath.sqrt(rho0 * rho0 - 1)
        t0 = rho0 + s0
        h = float((t0 * t0 - mpmath.mpf(1) / q) / (2 * s0 * t0))
    return RemarkProbe(rows, h, epsilon)
