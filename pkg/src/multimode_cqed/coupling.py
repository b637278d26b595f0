"""Zero-point fluctuations and qubit-mode coupling strengths.

The coupling of the qubit to mode n is the shared inductance times the
qubit persistent current times the mode's zero-point current at x = 0:

    hbar g_n = L_c * I_qubit * I_zp(omega_n).

On the exact roots the zero-point current equals
sqrt(hbar omega_n / (Xl)) / sqrt(1 + (omega_n/omega_cutoff)^2), so g_n grows
as sqrt(omega_n) below the cutoff and falls as 1/sqrt(omega_n) above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .modes import Mode
from .params import HBAR, PHI0, CircuitParams, DerivedParams


@dataclass(frozen=True)
class CouplingResult:
    mode: Mode
    u_c_rms: float
    I_zp: float
    g: float
    suppression: float
    I_qubit: float
    i_qubit_source: str  # "formula" or "override"

    @property
    def g_hz(self) -> float:
        return self.g / (2 * math.pi)


def suppression_factor(x):
    """1/sqrt(1 + x^2) with x = omega/omega_cutoff."""
    if x < 0:
        raise ValueError("x must be >= 0")
    if math.isinf(x):
        return 0.0
    return 1.0 / math.sqrt(1.0 + x * x)


def _x(derived, omega):
    if derived.cutoff_unbounded:
        return 0.0
    return omega / derived.omega_cutoff


def zero_point_amplitude(derived: DerivedParams, omega_n) -> float:
    """u_c,rms = sqrt(hbar / (X c omega_n)) [Wb]."""
    if not omega_n > 0:
        raise ValueError("omega_n must be > 0")
    return math.sqrt(HBAR / (derived.Xc * omega_n))


def zero_point_current(derived: DerivedParams, mode: Mode) -> float:
    """RMS zero-point current at x = 0, from the mode shape: u_rms k sin(kX) / l."""
    u = zero_point_amplitude(derived, mode.omega)
    return u * mode.k * math.sin(mode.offset) / derived.l


def zero_point_current_closed(derived: DerivedParams, omega_n) -> float:
    """Closed form (1/Xl) sqrt(hbar pi Z0 / 2) sqrt((omega/omega0) / (1 + (omega/omega_c)^2)).

    Identical to :func:`zero_point_current` on exact roots.
    """
    x = _x(derived, omega_n)
    return (math.sqrt(HBAR * math.pi * derived.Z0 / 2) / derived.Xl
            * math.sqrt((omega_n / derived.omega0) / (1 + x * x)))


def qubit_persistent_current(params: CircuitParams) -> float:
    """Order-of-magnitude persistent current Phi0 / (pi (L_c + L_2))."""
    total = params.L_c + params.L_2
    if total <= 0:
        raise ValueError("L_c + L_2 must be > 0")
    return PHI0 / (math.pi * total)


def coupling_strength(params: CircuitParams, derived: DerivedParams, mode: Mode,
                      i_qubit=None) -> CouplingResult:
    """Coupling of the qubit to ``mode``; ``g`` is an angular frequency.

    ``i_qubit`` overrides the persistent-current estimate.
    """
    if i_qubit is None:
        I_q, source = qubit_persistent_current(params), "formula"
    else:
        I_q, source = float(i_qubit), "override"
    u_rms = zero_point_amplitude(derived, mode.omega)
    I_zp = u_rms * mode.k * math.sin(mode.offset) / derived.l
    g = params.L_c * I_q * I_zp / HBAR
    return CouplingResult(
        mode=mode,
        u_c_rms=u_rms,
        I_zp=I_zp,
        g=g,
        suppression=suppression_factor(_x(derived, mode.omega)),
        I_qubit=I_q,
        i_qubit_source=source,
    )


def couplings(params, derived, modes, i_qubit=None) -> list[CouplingResult]:
    return [coupling_strength(params, derived, m, i_qubit) for m in modes]


def coupling_low_freq_approx(params: CircuitParams, derived: DerivedParams, mode: Mode,
                             i_qubit=None) -> float:
    """g ~ L_c I_qubit sqrt(hbar omega/(Xl)) (1 - (omega/omega_c)^2 / 2) / hbar."""
    I_q = qubit_persistent_current(params) if i_qubit is None else i_qubit
    x = _x(derived, mode.omega)
    return (params.L_c * I_q * math.sqrt(HBAR * mode.omega / derived.Xl)
            * (1 - 0.5 * x * x) / HBAR)


def coupling_high_freq_approx(params: CircuitParams, derived: DerivedParams, mode: Mode,
                              i_qubit=None) -> float:
    """g ~ I_qubit sqrt(2 hbar Z0 omega0 / (pi omega)) / hbar.

    Independent of L_c; this form takes L_c2 ~ L_c, i.e. assumes L_c << L_2.
    """
    I_q = qubit_persistent_current(params) if i_qubit is None else i_qubit
    return I_q * math.sqrt(2 * HBAR * derived.Z0 * derived.omega0 / (math.pi * mode.omega)) / HBAR
