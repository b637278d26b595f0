"""Circuit parameters of the qubit + quarter-wave resonator system.

All quantities are SI. ``CircuitParams`` holds the raw inputs, ``derive``
turns them into the invariant combinations used by the mode, coupling and
Lamb-shift code (series-parallel inductance, impedance, fundamental and
cutoff frequencies).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from scipy import constants as _const

HBAR = _const.hbar
PLANCK = _const.h
PHI0 = _const.h / (2 * _const.e)
EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA constants used throughout (not configurable)."""

    hbar: float = HBAR
    h: float = PLANCK
    Phi0: float = PHI0


CONSTANTS = PhysicalConstants()


class ParameterError(ValueError):
    """Raised when a circuit parameter violates a hard invariant."""

    def __init__(self, field, rule):
        super().__init__(f"{field} {rule}")
        self.field = field
        self.rule = rule


@dataclass(frozen=True)
class CircuitParams:
    """Raw physical inputs.

    Attributes
    ----------
    X : float
        Resonator length [m].
    l, c : float
        Inductance [H/m] and capacitance [F/m] per unit length.
    L_c : float
        Shared coupling inductance [H].
    L_2 : float
        Remaining qubit-loop inductance [H].
    C_q : float
        Junction capacitance [F].
    E_J : float
        Josephson energy [J].
    C_R : float
        Termination capacitance at the open end [F].
    Phi_ext : float
        External flux through the qubit loop [Wb].
    """

    X: float
    l: float
    c: float
    L_c: float
    L_2: float
    C_q: float = 0.0
    E_J: float = 0.0
    C_R: float = 0.0
    Phi_ext: float = 0.0

    def replace(self, **changes) -> "CircuitParams":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)

    @property
    def critical_current(self) -> float:
        return 2 * math.pi * self.E_J / PHI0


FIELDS = tuple(f.name for f in dataclasses.fields(CircuitParams))


def josephson_energy(I_c):
    """E_J = I_c Phi0 / (2 pi)."""
    return I_c * PHI0 / (2 * math.pi)


@dataclass(frozen=True)
class DerivedParams:
    """Invariant combinations computed by :func:`derive`.

    ``L_c2 = 0`` (no coupling inductance) is a legal degenerate case: the
    resonator is then grounded at the qubit end, and ``omega_cutoff`` and
    ``n_cutoff`` are ``inf``.
    """

    L_c2: float
    Z0: float
    omega0: float
    omega_cutoff: float
    n_cutoff: float
    Xl: float
    Xc: float
    params: CircuitParams

    @property
    def X(self) -> float:
        return self.params.X

    @property
    def l(self) -> float:
        return self.params.l

    @property
    def c(self) -> float:
        return self.params.c

    @property
    def ratio(self) -> float:
        """Xl / L_c2, the right-hand side of the dimensionless mode equation."""
        if self.L_c2 == 0:
            return math.inf
        return self.Xl / self.L_c2

    @property
    def cutoff_unbounded(self) -> bool:
        return math.isinf(self.omega_cutoff)

    def omega_from_kX(self, kX):
        """Angular frequency of a standing wave with dimensionless wavenumber kX."""
        return kX * (2 * self.omega0 / math.pi)


def _check(params: CircuitParams) -> None:
    for name in ("X", "l", "c", "L_2"):
        value = getattr(params, name)
        if not (math.isfinite(value) and value > 0):
            raise ParameterError(name, "must be > 0")
    for name in ("L_c", "C_q", "C_R", "E_J"):
        value = getattr(params, name)
        if not (math.isfinite(value) and value >= 0):
            raise ParameterError(name, "must be >= 0")
    if not math.isfinite(params.Phi_ext):
        raise ParameterError("Phi_ext", "must be finite")


def series_parallel(L_c, L_2):
    """L_c || L_2."""
    if L_c == 0:
        return 0.0
    return L_c * L_2 / (L_c + L_2)


def derive(params: CircuitParams) -> DerivedParams:
    """Compute the derived constants.

    Raises
    ------
    ParameterError
        If a required field is non-positive (or negative, for the fields
        that may vanish). The error names the field.
    """
    _check(params)
    X, l, c = params.X, params.l, params.c
    L_c2 = series_parallel(params.L_c, params.L_2)
    Z0 = math.sqrt(l / c)
    omega0 = math.pi / (2 * X * math.sqrt(c * l))
    if L_c2 == 0:
        omega_cutoff = math.inf
        n_cutoff = math.inf
    else:
        omega_cutoff = Z0 / L_c2
        n_cutoff = 2 * X * l / (math.pi * L_c2)
    return DerivedParams(
        L_c2=L_c2,
        Z0=Z0,
        omega0=omega0,
        omega_cutoff=omega_cutoff,
        n_cutoff=n_cutoff,
        Xl=X * l,
        Xc=X * c,
        params=params,
    )


def params_for_ratio(ratio, X=1.0, l=1.0, c=1.0, L_2_over_L_c=math.inf, **extra):
    """Convenience constructor hitting a prescribed Xl/L_c2.

    With the default ``L_2_over_L_c = inf`` this is approximated by a very
    large ``L_2``; pass a finite value to split L_c2 into L_c and L_2.
    """
    if math.isinf(ratio):
        # shorted end: no coupling inductance at all
        return CircuitParams(X=X, l=l, c=c, L_c=0.0, L_2=1.0, **extra)
    L_c2 = X * l / ratio
    if math.isinf(L_2_over_L_c):
        s = 1e12
    else:
        s = L_2_over_L_c
    # L_c2 = L_c * s / (1 + s)
    L_c = L_c2 * (1 + s) / s
    return CircuitParams(X=X, l=l, c=c, L_c=L_c, L_2=s * L_c, **extra)


@dataclass(frozen=True)
class Violation:
    field: str
    rule: str
    severity: str = "error"  # or "advisory"

    def __str__(self):
        return f"{self.field} {self.rule}" + (" (advisory)" if self.severity == "advisory" else "")


def validate(params: CircuitParams) -> list[Violation]:
    """Collect every invariant violation instead of raising on the first."""
    found = []
    for name in ("X", "l", "c", "L_2"):
        value = getattr(params, name)
        if not math.isfinite(value) or value <= 0:
            found.append(Violation(name, "must be > 0"))
    for name in ("C_q", "C_R", "E_J", "L_c"):
        value = getattr(params, name)
        if not math.isfinite(value) or value < 0:
            found.append(Violation(name, "must be >= 0"))
    if not math.isfinite(params.Phi_ext):
        found.append(Violation("Phi_ext", "must be finite"))
    if any(v.severity == "error" for v in found):
        return found

    if params.L_c == 0:
        found.append(Violation("L_c", "= 0: qubit decoupled, omega_cutoff unbounded", "advisory"))
    elif params.L_c > params.L_2:
        found.append(Violation(
            "L_c", "> L_2: weak-coupling approximations assume L_c << L_2", "advisory"))
    return found


def q_factor_from_ratio(cr_ratio):
    """Q_TLR = (Xc/C_R)^2 / (2 pi) given C_R/(Xc)."""
    if cr_ratio == 0:
        return math.inf
    return 1.0 / (2 * math.pi * cr_ratio**2)


def cr_ratio_from_q(Q):
    """C_R/(Xc) = 1/sqrt(2 pi Q)."""
    if math.isinf(Q):
        return 0.0
    if Q <= 0:
        raise ValueError("Q must be > 0")
    return 1.0 / math.sqrt(2 * math.pi * Q)


def q_factor_from_cr(params: CircuitParams) -> float:
    """Quality factor when all dissipation is through C_R.

    Returns ``math.inf`` for ``C_R = 0`` (lossless termination).
    """
    _check(params)
    return q_factor_from_ratio(params.C_R / (params.X * params.c))


def cr_from_q(params: CircuitParams, Q) -> float:
    """Termination capacitance giving quality factor ``Q`` for this line."""
    return cr_ratio_from_q(Q) * params.X * params.c


PUBLISHED = CircuitParams(
    X=10.75e-3,
    l=437e-9,
    c=162e-12,
    L_c=231e-12,
    L_2=823e-12,
    C_q=4.0e-15,
    E_J=josephson_energy(0.5e-6),
    C_R=3.46e-16,
    Phi_ext=0.5 * PHI0,
)
"""Device parameters used throughout the examples and tests.

X, l, c, L_c, L_2 and C_R are the device's design values. The qubit block
(C_q, E_J, Phi_ext) is a representative choice: a 4 fF junction, 0.5 uA
critical current and half a flux quantum of bias.
"""
