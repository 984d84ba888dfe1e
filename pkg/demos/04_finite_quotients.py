"""Exact cogrowth series of finite groups.

For a finite marked group the generating function of gamma_n is rational and
comes from the characteristic polynomial of the Cayley graph.  It satisfies
a symmetry under z -> 1/(qz), and its poles sit either on |z| = q^(-1/2) or
on the real axis in a controlled range.
"""
from cogrowth.exact_series import (
    cogrowth_series_finite,
    finite_spectrum,
    functional_equation_check,
    singularity_analysis,
)
from cogrowth.marked_groups import from_spec, load_preset

print("trivial group:", cogrowth_series_finite(load_preset("trivial")))

G = load_preset("z2xz2")
spectrum = finite_spectrum(G)
gamma = cogrowth_series_finite(G, spectrum)
print("Z/2 x Z/2 eigenvalues:", [(str(lam), m) for lam, m in spectrum.atoms])
print("Taylor coefficients:", [int(c) for c in gamma.taylor(12)])
print("symmetric under z -> 1/(3z):", functional_equation_check(gamma, G.q))
print("poles:", singularity_analysis(gamma, G.q, spectrum).summary())

# SL(2, F_3) has irrational eigenvalues; poles are then classified numerically
sl23 = from_spec({"rank": 2, "backend": {"type": "integer_matrix", "dimension": 2, "modulus": 3},
                  "images": [[1, 1, 0, 1], [1, 0, 1, 1]]}, name="sl23")
sp = finite_spectrum(sl23)
rep = singularity_analysis(cogrowth_series_finite(sl23, sp), sl23.q, sp)
print(f"SL(2,3): order {sp.order}, {len(rep.circle_poles)} poles on the circle, "
      f"{len(rep.real_poles)} real, unexplained: {rep.unexplained_poles}")
