"""
Multimode Lamb shift
====================

Summing (g_n/omega_n)^2 over all modes converges because of the decoupling
above omega_cutoff; the idealized sum has a digamma closed form.
"""

import math

import numpy as np

from multimode_cqed import (PUBLISHED, derive, lamb_sum_asymptotic, lamb_sum_odd,
                            lamb_sum_partial, modes_exact, renormalized_gap)
from multimode_cqed.coupling import couplings

for nc in (1.0, 13.2, 100.0, 1e3):
    closed = lamb_sum_odd(nc).value
    asym = lamb_sum_asymptotic(nc).value
    print(f"n_cutoff={nc:7.1f}  closed {closed:.6f}  asymptotic {asym:.6f}")

partial = lamb_sum_partial(100.0, "odd", 10**7)
print(f"\n1e7 terms: {partial.value:.12f}, tail bound {partial.tail_bound:.2e}")
print(f"closed form - partial sum = {lamb_sum_odd(100.0).value - partial.value:.2e}")

# %% exponent from the exact per-mode couplings
d = derive(PUBLISHED)
results = couplings(PUBLISHED, d, modes_exact(d, math.ceil(200 * d.n_cutoff)))
terms = np.array([(r.g / r.mode.omega) ** 2 for r in results])
running = 2 * np.cumsum(terms)
for n in (10, 100, 1000, len(terms) - 1):
    print(f"modes 0..{n:5d}: exponent {running[n]:.6f}")

# the exponent is large for this device: the gap is strongly renormalized
gap = renormalized_gap(2 * math.pi * 5e9, [(r.g, r.mode.omega) for r in results])
print(f"\nDelta/Delta0 = {gap.delta / gap.delta0:.3e}")
