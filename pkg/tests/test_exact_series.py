from fractions import Fraction

import pytest
import sympy

from cogrowth.counting import CountTable, count_table
from cogrowth.exact_series import (
    PowerSeries,
    RationalFunction,
    adjacency_matrix,
    charpoly,
    charpoly_sparse,
    chebyshev_moment_check,
    chebyshev_moment_value,
    cogrowth_series_finite,
    finite_spectrum,
    functional_equation_check,
    grigorchuk_identity_check,
    kernel_sum,
    singularity_analysis,
)
from cogrowth.marked_groups import NotFiniteError, from_spec, load_preset
from cogrowth.polynomial import RationalPolynomial as P

from conftest import FINITE

SL23 = {"rank": 2, "backend": {"type": "integer_matrix", "dimension": 2, "modulus": 3},
        "images": [[1, 1, 0, 1], [1, 0, 1, 1]]}
S4 = {"rank": 2, "backend": {"type": "permutation", "degree": 4},
      "images": [[1, 2, 3, 0], [1, 0, 2, 3]]}


def extra_groups():
    return [from_spec(SL23, "sl23"), from_spec(S4, "s4")]


def test_power_series_arithmetic():
    geo = PowerSeries([1, -1], order=8).reciprocal()
    assert geo.coeffs == [1] * 9
    assert (geo * PowerSeries([1, -1], order=8)).coeffs == [1] + [0] * 8


def test_rational_function_canonical_and_taylor():
    f = RationalFunction.from_ints([1, 1], [1, -3])
    g = RationalFunction(P((2, 2)) * P((1, 5)), P((2, -6)) * P((1, 5)))
    assert f == g and hash(f) == hash(g)
    assert f.taylor(5) == [1, 4, 12, 36, 108, 324]
    assert RationalFunction.from_dict(f.to_dict()) == f
    assert f(Fraction(1, 7)) == Fraction(8, 4)


@pytest.mark.parametrize("name", FINITE + ("sl23", "s4"))
def test_charpoly_against_sympy(name):
    G = load_preset(name) if name in FINITE else from_spec(SL23 if name == "sl23" else S4)
    rows, elements = adjacency_matrix(G)
    n = len(elements)
    dense = [[0] * n for _ in range(n)]
    for i, row in enumerate(rows):
        for j, c in row:
            dense[i][j] += c
    lam = sympy.Symbol("lam")
    expected = sympy.Matrix(dense).charpoly(lam).all_coeffs()[::-1]
    assert charpoly_sparse(rows).integer_coefficients() == [int(c) for c in expected]
    if n <= 24:
        assert charpoly(dense) == charpoly_sparse(rows)


@pytest.mark.parametrize("name", FINITE)
def test_series_oracle_matches_dp(name, tables):
    G = load_preset(name)
    gamma = cogrowth_series_finite(G)
    assert gamma.taylor(30) == tables(name).gamma[:31]


def test_series_oracle_nonabelian_extras():
    for G in extra_groups():
        assert cogrowth_series_finite(G).taylor(16) == count_table(G, 16).gamma


def test_trivial_series_closed_form():
    gamma = cogrowth_series_finite(load_preset("trivial"))
    assert gamma == RationalFunction.from_ints([1, 1], [1, -3])


def test_series_is_a_kernel_sum():
    # (1/4)[(1+z)/(1-3z) + 2(1-z^2)/(1+3z^2) + (1-z)/(1+3z)] for Z/2 x Z/2
    v4 = kernel_sum([(4, Fraction(1, 4)), (0, Fraction(1, 2)), (-4, Fraction(1, 4))], 3)
    assert cogrowth_series_finite(load_preset("z2xz2")) == v4


def test_infinite_group_has_no_finite_series():
    with pytest.raises(NotFiniteError):
        cogrowth_series_finite(load_preset("sl2z"))


@pytest.mark.parametrize("name", FINITE)
def test_functional_equation(name):
    G = load_preset(name)
    assert functional_equation_check(cogrowth_series_finite(G), G.q)


def test_functional_equation_detects_asymmetry():
    assert not functional_equation_check(RationalFunction.from_ints([1, 2], [1, -3]), 3)
    for G in extra_groups():
        assert functional_equation_check(cogrowth_series_finite(G), G.q)


def test_singularities_z2xz2():
    G = load_preset("z2xz2")
    sp = finite_spectrum(G)
    rep = singularity_analysis(cogrowth_series_finite(G, sp), 3, sp)
    assert rep.ok and rep.gamma_exponent == 3
    assert sorted(p.exact for p in rep.real_poles) == [Fraction(-1, 3), Fraction(1, 3)]
    circle = sorted(complex(p.value).imag for p in rep.circle_poles)
    assert circle == pytest.approx([-3 ** -0.5, 3 ** -0.5], abs=1e-15)
    assert all(abs(complex(p.value).real) < 1e-15 for p in rep.circle_poles)


@pytest.mark.parametrize("name", FINITE)
def test_no_unexplained_poles(name):
    G = load_preset(name)
    sp = finite_spectrum(G)
    rep = singularity_analysis(cogrowth_series_finite(G, sp), G.q, sp)
    assert rep.unexplained_poles == []
    for p in rep.circle_poles:
        assert abs(complex(p.value)) == pytest.approx(G.q ** -0.5, abs=1e-12)


def test_irrational_spectra_classified():
    for G in extra_groups():
        sp = finite_spectrum(G)
        assert sp.irrational_factors
        rep = singularity_analysis(cogrowth_series_finite(G, sp), G.q, sp)
        assert rep.ok
        for p in rep.real_poles:
            assert 1 / 3 - 1e-12 <= abs(complex(p.value).real) <= 1 + 1e-12


@pytest.mark.parametrize("name", ["trivial", "zsquared", "z2xz2", "s3", "sl2z", "free2"])
def test_grigorchuk_identity(name, tables):
    t = tables(name, 20)
    res = grigorchuk_identity_check(t, 21)
    assert res and res.value == 0 and res.first_order is None


def test_grigorchuk_order_limits(tables):
    t = tables("s3", 10)
    with pytest.raises(ValueError):
        grigorchuk_identity_check(t, 12)
    with pytest.raises(ValueError):
        grigorchuk_identity_check(t, 0)


def test_moment_formula_worked_value(tables):
    t = tables("z2xz2", 20)
    # m_2 = W_2 / (2 sqrt 3)^2 = 8/12
    assert Fraction(t.walk[2], 12) == Fraction(8, 12)
    assert chebyshev_moment_value(t, 2) == 4 == t.gamma[2]


@pytest.mark.parametrize("name", ["trivial", "zsquared", "z2xz2", "s3", "sl2z", "free2"])
def test_moment_formula(name, tables):
    t = tables(name, 20)
    assert all(chebyshev_moment_check(t, n) for n in range(2, 21))


def test_corruption_located(tables):
    t = tables("s3", 12)
    bad = CountTable(t.group, t.rank, list(t.gamma), list(t.walk))
    bad.gamma[6] += 1
    res = grigorchuk_identity_check(bad, 13)
    assert not res and res.first_order == 7
    assert not chebyshev_moment_check(bad, 6) and chebyshev_moment_check(bad, 4)
