"""Flux qubit inductively coupled to a quarter-wave transmission-line resonator.

Normal modes, coupling strengths, high-frequency decoupling and the
multimode Lamb shift, with a discrete LC-ladder model as cross-check.
"""

__version__ = "0.1.0"

from .params import (CONSTANTS, PHI0, HBAR, PUBLISHED, CircuitParams, DerivedParams,
                     ParameterError, cr_from_q, derive, q_factor_from_cr, validate)
from .modes import (Mode, ModeProfile, current_profile, freq_ratio, mode_k_exact,
                    mode_k_exact_cr, mode_k_high_approx, mode_k_low_approx,
                    mode_k_low_third_order, modes_exact)
from .coupling import (CouplingResult, coupling_high_freq_approx, coupling_low_freq_approx,
                       coupling_strength, couplings, qubit_persistent_current, suppression_factor,
                       zero_point_amplitude, zero_point_current)
from .digamma import complex_digamma
from .lamb import (LambSum, RenormalizedGap, lamb_sum_all, lamb_sum_asymptotic, lamb_sum_odd,
                   lamb_sum_partial, renormalized_gap)
from .ladder import (LadderSpectrum, LadderSystem, StationaryState, build_ladder,
                     convergence_study, current_suppression_check, ground_state_solve,
                     ladder_modes)
