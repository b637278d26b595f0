"""
Mode spectrum of the qubit-loaded resonator
===========================================

The coupling inductance shortens the grounded end of the quarter-wave line
a little, so the modes are no longer exact odd multiples of the fundamental.
"""

import math

import numpy as np

from multimode_cqed import PUBLISHED, derive, freq_ratio, mode_k_exact, modes_exact
from multimode_cqed.modes import exact_freq_ratio, mode_k_high_approx, mode_k_low_third_order
from multimode_cqed.params import params_for_ratio

d = derive(PUBLISHED)
print(f"L_c2/(Xl)      = {d.L_c2 / d.Xl:.5f}")
print(f"n_cutoff       = {d.n_cutoff:.3f}")
print(f"omega0/2pi     = {d.omega0 / 2 / math.pi / 1e9:.4f} GHz")
print(f"omega_c/2pi    = {d.omega_cutoff / 2 / math.pi / 1e9:.3f} GHz")

# %% exact roots: one per branch, kX in (n pi, n pi + pi/2)
modes = modes_exact(d, 60)
kX = np.array([m.kX for m in modes])
print("\nfirst offsets kX - n pi:", np.round(kX[:5] - np.pi * np.arange(5), 5))
print("offset far above cutoff:", round(kX[60] - 60 * np.pi, 5), "(pi/2 would be a bare line)")

# %% the low-frequency pattern omega_n/omega_0 - (2n+1)
target = params_for_ratio(math.pi * 13.2 / 2)
dt = derive(target)
for n in (1, 2, 3):
    ideal, series = freq_ratio(dt, n)
    exact = exact_freq_ratio(dt, n)
    print(f"n={n}: exact {exact - ideal:.5f}   cubic series {series - ideal:.5f}")

# %% asymptotic forms against the exact root
for n in (0, 2, 4):
    m3 = mode_k_low_third_order(d, n, warn=False)
    print(f"n={n:3d} low third order rel. error {abs(m3.kX / mode_k_exact(d, n).kX - 1):.2e}")
for n in (100, 400, 1600):
    mh = mode_k_high_approx(d, n)
    print(f"n={n:4d} high-frequency rel. error {abs(mh.kX / mode_k_exact(d, n).kX - 1):.2e}")
