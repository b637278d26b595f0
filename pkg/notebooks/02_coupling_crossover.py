"""
Coupling strength across the cutoff
===================================

g_n grows like sqrt(omega_n) below omega_cutoff and falls like 1/sqrt(omega_n)
above it; at high frequency it no longer depends on L_c.
"""

import numpy as np

from multimode_cqed import PUBLISHED, coupling_strength, derive, modes_exact
from multimode_cqed.coupling import qubit_persistent_current
from multimode_cqed.figures import coupling_vs_frequency

d = derive(PUBLISHED)
results = [coupling_strength(PUBLISHED, d, m) for m in modes_exact(d, 400)]
w = np.array([r.mode.omega for r in results])
g = np.array([r.g for r in results])

print(f"I_qubit = {qubit_persistent_current(PUBLISHED) * 1e9:.1f} nA")
print(f"g_0/2pi = {g[0] / 2 / np.pi / 1e9:.3f} GHz")
peak = g.argmax()
print(f"peak at n={peak}, omega/omega_c = {w[peak] / d.omega_cutoff:.3f}")

# %% the two power laws
low = w < d.omega_cutoff / 5
high = w > 5 * d.omega_cutoff
print("spread of g/sqrt(w) below omega_c/5:", np.ptp(g[low] / np.sqrt(w[low])) / (g[0] / np.sqrt(w[0])))
print("spread of g*sqrt(w) above 5 omega_c:", np.ptp(g[high] * np.sqrt(w[high])) / (g[-1] * np.sqrt(w[-1])))

# %% three coupling inductances, one qubit current
columns, rows = coupling_vs_frequency(PUBLISHED, n_max=300)
data = np.array(rows)
for nc in (5.0, 15.0, 50.0):
    sel = data[data[:, 0] == nc]
    print(f"n_cutoff={nc:4.0f}: g_0/g_ref = {sel[0, 3]:.3f}, g_300/g_ref = {sel[-1, 3]:.4f}")
