"""Exact identity checks relating gamma_n and W_n.

Both checks stay inside the rationals: the return-count identity is
rewritten so no square root of q appears, and the Chebyshev moment formula
only uses monomials of the right parity.
"""
from fractions import Fraction

from cogrowth.counting import count_table
from cogrowth.exact_series import (
    chebyshev_moment_check,
    chebyshev_moment_value,
    grigorchuk_identity_check,
)
from cogrowth.marked_groups import load_preset

for name in ("zsquared", "s3", "sl2z"):
    t = count_table(load_preset(name), 20)
    res = grigorchuk_identity_check(t, 21)
    moments = all(chebyshev_moment_check(t, n) for n in range(2, 21))
    print(f"{name:9s} return-count residual = {res.value}, moment formula holds: {moments}")

# worked example: Z/2 x Z/2 has W_2 = 8, so m_2 = 8/12, and gamma_2 = 4
t = count_table(load_preset("z2xz2"), 10)
print("m_2 =", Fraction(t.walk[2], 12), " gamma_2 from moments =", chebyshev_moment_value(t, 2))

# a single wrong entry is located exactly
t.gamma[6] += 1
res = grigorchuk_identity_check(t, 11)
print("after corrupting gamma_6: first failing order", res.first_order,
      "| moment check at 6:", chebyshev_moment_check(t, 6))
