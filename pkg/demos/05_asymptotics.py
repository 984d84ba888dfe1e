"""Growth of gamma_n: ratio limits, spectral radius and an amenability hint.

For finite groups the ratios gamma_{2n+2}/gamma_{2n} approach q^2; for an
infinite group the finite-n estimate can only be suggestive.
"""
from cogrowth.asymptotics import (
    amenability_diagnostic,
    integral_split_diagnostics,
    ratio_limit_experiment,
    remark_bound_probe,
    spectral_data,
)
from cogrowth.counting import count_table
from cogrowth.exact_series import finite_spectrum
from cogrowth.marked_groups import load_preset

G = load_preset("z2xz2")
t = count_table(G, 60)
s = spectral_data(t, finite_spectrum(G))
table = ratio_limit_experiment(t, s)
print(f"rho = {s.rho:.12f}, predicted ratio limit = {table.prediction}")
for row in table.rows[::5]:
    print(f"  2n={2 * row.n:3d}  ratio={row.ratio:.12f}  deviation={row.deviation:.2e}")

d = integral_split_diagnostics(s, 10)
print(f"gamma_20 / 3^10 = {t.gamma[20] / 3 ** 10:.6f}, spectral integral = {d.I_n:.6f}")

probe = remark_bound_probe(t, s, n_max=30)
print(f"L_n bound h(rho0) = {probe.h_rho0:.6f} holds: {probe.holds}; inf L_n = {probe.inf_L:.6f}")

for name in ("zsquared", "sl2z", "free2"):
    v = amenability_diagnostic(count_table(load_preset(name), 24))
    print(f"{name:9s} {v.verdict:26s} gamma_hat={v.gamma_hat}")
