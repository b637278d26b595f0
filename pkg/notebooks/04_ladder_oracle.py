"""
Discrete ladder as a cross-check
================================

Cut the line into N LC cells, linearize around the stationary flux and
compare the lowest modes with the continuum roots.
"""

import warnings

import numpy as np

from multimode_cqed import PUBLISHED, build_ladder, convergence_study, derive, ground_state_solve
from multimode_cqed.ladder import DYNAMIC, FROZEN, current_suppression_check, ladder_modes
from multimode_cqed.params import PHI0

gs = ground_state_solve(PUBLISHED)
print(f"Phi_GS = {gs.Phi_GS / PHI0:.6f} Phi0, stable: {gs.stable}, residual {gs.residual:.1e}")

# %% frozen qubit: node 0 sees L_c || L_2
table = convergence_study(PUBLISHED, [500, 1000, 2000, 4000], qubit=FROZEN)
print("\nrelative error, frozen qubit")
for N, row in zip(table.N, table.rel_error):
    print(f"N={N:5d}", " ".join(f"{e:.2e}" for e in row))
print("Richardson orders:", np.round(table.richardson_order, 4).tolist())

# the full-cell lumping at the open end drops to first order
full_cell = convergence_study(PUBLISHED, [500, 1000, 2000, 4000], lumping="full-cell")
print("full-cell lumping orders:", np.round(full_cell.richardson_order, 3).tolist())

# %% dynamic qubit: the near-resonant modes carry qubit weight
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    spectrum = ladder_modes(build_ladder(PUBLISHED, 2000, qubit=DYNAMIC), 25)
print("\nflagged near-resonant modes:", spectrum.near_resonance().tolist())
print("largest qubit weight:", spectrum.qubit_weight.max().round(3))

# %% current at the qubit position
d = derive(PUBLISHED)
fine = ladder_modes(build_ladder(PUBLISHED, 8000, qubit=FROZEN, include_cr=False), 60)
rows = current_suppression_check(fine, d, n_max=50)
for r in rows[::10]:
    print(f"n={r.mode:2d}  I(0)/I_peak {r.measured:.4f}  sin(kX) {r.predicted:.4f}")
