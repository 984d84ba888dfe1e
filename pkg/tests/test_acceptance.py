"""Acceptance criteria, one test each.  Every test records a PASS/FAIL line that
is printed in the terminal summary (see conftest.py)."""
import json
import math
import random
import time
from fractions import Fraction

import pytest

from cogrowth.asymptotics import (
    discrete_ratio_lemma_check,
    grigorchuk_exponent,
    integral_split_diagnostics,
    lemma_ratios,
    nonincreasing,
    ratio_limit_experiment,
    remark_bound_probe,
    spectral_data,
    spectral_radius_estimate,
)
from cogrowth.chebyshev import closed_form_check, cogrowth_kernel_poly, chebyshev_u, \
    generating_identity_check, growth_bound_check
from cogrowth.cli import main
from cogrowth.counting import CountTable, count_table, gamma_bruteforce, gamma_dp
from cogrowth.exact_series import (
    RationalFunction,
    chebyshev_moment_check,
    chebyshev_moment_value,
    cogrowth_series_finite,
    finite_spectrum,
    functional_equation_check,
    grigorchuk_identity_check,
    singularity_analysis,
)
from cogrowth.marked_groups import PRESETS, load_preset

from conftest import FINITE, ORACLE_PRESETS

RESULTS: list[str] = []


def record(number: int, title: str, ok: bool, detail: str = ""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}" + (f" ({detail})" if detail else "")
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_criterion_01_oracle_equivalence():
    start = time.perf_counter()
    ok = all(gamma_dp(load_preset(name), 10) == [gamma_bruteforce(load_preset(name), n)
                                                 for n in range(11)]
             for name in ORACLE_PRESETS)
    elapsed = time.perf_counter() - start
    record(1, "DP equals brute force for n <= 10", ok and elapsed < 60, f"{elapsed:.1f}s")


def test_criterion_02_return_count_identity(tables):
    start = time.perf_counter()
    residuals = {name: grigorchuk_identity_check(tables(name, 20), 20).value for name in PRESETS}
    elapsed = time.perf_counter() - start
    ok = all(v == 0 for v in residuals.values())
    record(2, "return-count identity residual 0 to order 20", ok and elapsed < 30,
           f"{elapsed:.1f}s")


def test_criterion_03_chebyshev_moments(tables):
    start = time.perf_counter()
    ok = all(chebyshev_moment_check(tables(name, 20), n)
             for name in PRESETS for n in range(2, 21))
    v4 = tables("z2xz2", 20)
    m2 = Fraction(v4.walk[2], 12)
    worked = m2 == Fraction(8, 12) and chebyshev_moment_value(v4, 2) == 4 == v4.gamma[2]
    elapsed = time.perf_counter() - start
    record(3, "moment formula for 2 <= n <= 20; gamma_2(Z/2xZ/2)=4 from m_2=8/12",
           ok and worked and elapsed < 30, f"{elapsed:.1f}s")


def test_criterion_04_finite_series_oracle(tables):
    ok = all(cogrowth_series_finite(load_preset(name)).taylor(30) == tables(name).gamma[:31]
             for name in FINITE)
    closed = cogrowth_series_finite(load_preset("trivial")) == \
        RationalFunction.from_ints([1, 1], [1, -3])
    record(4, "finite-quotient Taylor coefficients equal DP for n <= 30; trivial = (1+z)/(1-3z)",
           ok and closed)


def test_criterion_05_functional_equation_and_poles():
    ok = True
    for name in FINITE:
        G = load_preset(name)
        sp = finite_spectrum(G)
        gamma = cogrowth_series_finite(G, sp)
        rep = singularity_analysis(gamma, G.q, sp)
        ok &= functional_equation_check(gamma, G.q) and not rep.unexplained_poles
    G = load_preset("z2xz2")
    sp = finite_spectrum(G)
    rep = singularity_analysis(cogrowth_series_finite(G, sp), 3, sp)
    real = sorted(p.exact for p in rep.real_poles)
    circle = sorted((complex(p.value) for p in rep.circle_poles), key=lambda c: c.imag)
    exact_circle = (len(circle) == 2
                    and all(abs(c.real) < 1e-15 for c in circle)
                    and abs(circle[0].imag + 3 ** -0.5) < 1e-15
                    and abs(circle[1].imag - 3 ** -0.5) < 1e-15)
    ok &= real == [Fraction(-1, 3), Fraction(1, 3)] and exact_circle and rep.gamma_exponent == 3
    record(5, "functional equation exact; no unexplained poles; Z/2xZ/2 poles {+-i/sqrt3, +-1/3}",
           ok)


def test_criterion_06_ratio_limit():
    coeffs = cogrowth_series_finite(load_preset("z2xz2")).taylor(42)
    dev = abs(float(coeffs[42] / coeffs[40]) - 9)
    triv = cogrowth_series_finite(load_preset("trivial")).taylor(80)
    exact_nine = all(triv[2 * n + 2] / triv[2 * n] == 9 for n in range(1, 40))
    record(6, "Z/2xZ/2 |gamma_42/gamma_40 - 9| <= 1e-6; trivial ratio exactly 9",
           dev <= 1e-6 and exact_nine, f"deviation {dev:.2e}")


def test_criterion_07_spectral_consistency(tables):
    target = 4 / (2 * math.sqrt(3))
    ok = True
    worst = 0.0
    for name in FINITE:
        t = tables(name)
        cut = CountTable(t.group, t.rank, t.gamma[:41], t.walk[:41])
        est = spectral_radius_estimate(cut).value
        worst = max(worst, abs(est - target))
        s = spectral_data(t, finite_spectrum(load_preset(name)))
        tail = [spectral_radius_estimate(CountTable(t.group, t.rank, t.gamma[:m + 1],
                                                    t.walk[:m + 1])).value
                for m in range(20, 51, 2)]
        ok &= abs(est - target) <= 1e-9 and s.rho > 1 and all(v > 1 for v in tail)
        ok &= abs(grigorchuk_exponent(s.rho, 3) - 3) <= 1e-9
        ok &= abs(grigorchuk_exponent(est, 3) - 3) <= 1e-9
    record(7, "rho within 1e-9 of (q+1)/(2 sqrt q) by n=40; rho > 1; exponent relation gives q",
           ok, f"max |rho_hat - rho| {worst:.1e}")


def test_criterion_08_integral_split(tables):
    ok = True
    for name in FINITE:
        t = tables(name)
        s = spectral_data(t, finite_spectrum(load_preset(name)))
        for n in range(1, 21):
            d = integral_split_diagnostics(s, n)
            ok &= abs(t.gamma[2 * n] / 3 ** n - d.I_n) <= 1e-9 * abs(d.I_n)
            ok &= abs(d.I_n1) <= d.majorant
        gaps = [integral_split_diagnostics(s, n).relative_gap for n in range(5, 26)]
        ok &= nonincreasing(gaps)
    record(8, "gamma_2n = q^n I_n (rel 1e-9); majorant holds; split gap nonincreasing on [5, 25]",
           ok)


def test_criterion_09_chebyshev_suite():
    rng = random.Random(2024)
    points = []
    while len(points) < 20:
        t = Fraction(rng.randint(-40, 40), rng.randint(1, 25))
        if t not in (0, 1, -1):
            points.append(t)
    ok = all(closed_form_check(n, t) for t in points for n in range(51))
    ok &= generating_identity_check(25)
    ok &= all(chebyshev_u(n).parity_support() <= {n % 2}
              and cogrowth_kernel_poly(n, 3).parity_support() <= {n % 2} for n in range(51))
    xs = [Fraction(k, 7) for k in range(0, 30)]
    ok &= all(growth_bound_check(m, x) for m in range(51) for x in xs)
    record(9, "Chebyshev closed form, generating identity, parity and growth bound", ok)


def test_criterion_10_ratio_lemma():
    two = discrete_ratio_lemma_check([0.5, 0.9], [0.7, 0.3], 40, tol=1e-6)
    single = all(v == 0.75 for v in lemma_ratios([0.75], [1.0], 60))
    record(10, "moment-ratio lemma: two atoms within 1e-6 by n=40; one atom exact", two and single)


def test_criterion_11_fault_injection(tmp_path, capsys):
    t = count_table(load_preset("z2xz2"), 20)
    base = t.to_dict()
    path = tmp_path / "corrupt.json"
    failures = []

    def verify_with(d):
        path.write_text(json.dumps(d))
        code = main(["verify", "--counts", str(path), "--format", "json"])
        report = json.loads(capsys.readouterr().out)
        return code, {r["check"]: r for r in report["results"]}

    for key in ("gamma", "walk"):
        for n in range(len(base[key])):
            d = json.loads(json.dumps(base))
            d[key][n] = str(int(d[key][n]) + 1)
            code, res = verify_with(d)
            g = res["grigorchuk-identity"]
            ok = code == 1 and g["status"] == "fail" and g["index"] == n and g["failed_order"] == n + 1
            if n >= 2 or key == "walk":
                c = res["chebyshev-moment"]
                want = n if n >= 2 else n + 2
                ok &= c["status"] == "fail" and c["index"] == want
            if not ok:
                failures.append(f"{key}[{n}]")
    record(11, "every single-entry corruption fails verify with the right tag and index",
           not failures, f"{2 * len(base['gamma'])} corruptions"
           + (f"; missed {failures}" if failures else ""))


def test_criterion_12_remark_probe(tables):
    ok = True
    infs = []
    for name in FINITE:
        t = tables(name, 100)
        s = spectral_data(t, finite_spectrum(load_preset(name)))
        probe = remark_bound_probe(t, s, n_max=50)
        ok &= probe.holds
        infs.append(f"{name}: inf L_n={probe.inf_L:.6g}, h(rho0)={probe.h_rho0:.6g}")
    record(12, "L_n <= h(rho0) + 1e-9 for n <= 50", ok, "; ".join(infs))
