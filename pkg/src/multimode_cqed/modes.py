"""Normal modes of the quarter-wave resonator terminated by the qubit.

With the qubit flux held at its stationary value, the resonator sees the
parallel combination L_c2 = L_c || L_2 to ground at x = 0 and an open end
at x = X. Its modes are u(x) = u_c cos(k[x - X]) with

    kX tan(kX) = Xl / L_c2,

which has exactly one root on every branch (n pi, n pi + pi/2). The same
equation with Xc / C_R on the right describes the bare resonator closed by
a finite end capacitance.

Roots are handled through the branch offset delta = kX - n pi, because
``tan`` is pi-periodic: the branch equation becomes

    (n pi + delta) sin(delta) - r cos(delta) = 0,    0 < delta < pi/2,

whose left side is strictly increasing in delta. Working with delta keeps
full relative precision for very high branches, where kX itself is large
and delta is tiny.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .params import CircuitParams, DerivedParams, derive

QUBIT_TERMINATED = "qubit-terminated"
CR_TERMINATED = "cr-terminated"

HALF_PI = 0.5 * math.pi
_EPS = 1e-12 * math.pi


class RootFindingError(RuntimeError):
    """Branch root search failed to converge."""

    def __init__(self, n, lo, hi):
        super().__init__(f"no convergence on branch n={n}: bracket [{lo!r}, {hi!r}]")
        self.n = n
        self.bracket = (lo, hi)


@dataclass(frozen=True)
class Mode:
    """One resonator normal mode.

    ``offset`` is kX - n pi, kept separately so that sin/tan of kX can be
    evaluated without losing precision on high branches.
    """

    n: int
    k: float
    omega: float
    kX: float
    offset: float
    branch_kind: str = QUBIT_TERMINATED

    @property
    def sin_kX(self) -> float:
        """|sin(kX)|, the current at x=0 relative to the peak current."""
        return math.sin(self.offset)


def _branch_residual(n, delta, r):
    return (n * math.pi + delta) * np.sin(delta) - r * np.cos(delta)


def solve_branch(r, n, max_iter=200):
    """Offsets delta_n in (0, pi/2) of kX tan(kX) = r for branches ``n``.

    Vectorized over ``n``. Bisection on the guaranteed bracket, with a
    Newton step accepted whenever it stays inside the current bracket.
    ``r = inf`` returns pi/2 exactly and ``r = 0`` returns 0.

    Raises
    ------
    RootFindingError
        If some branch has not converged after ``max_iter`` iterations.
    """
    n_arr = np.atleast_1d(np.asarray(n, dtype=float))
    if np.any(n_arr < 0):
        raise ValueError("branch index must be >= 0")
    if r < 0 or math.isnan(r):
        raise ValueError("right-hand side must be >= 0")
    if math.isinf(r):
        out = np.full_like(n_arr, HALF_PI)
        return out if np.ndim(n) else float(out[0])
    if r == 0:
        out = np.zeros_like(n_arr)
        return out if np.ndim(n) else float(out[0])

    a = n_arr * math.pi
    # start from the asymptotic form matching the branch's regime
    low = (a + HALF_PI) / (1 + r)
    guess = np.where(a + HALF_PI < r, HALF_PI - low, np.arctan(r / np.maximum(a, 1e-300)))
    lo = np.full_like(n_arr, 0.0)
    hi = np.full_like(n_arr, HALF_PI)
    x = np.clip(guess, _EPS, HALF_PI - _EPS)
    converged = np.zeros(n_arr.shape, dtype=bool)

    for _ in range(max_iter):
        s, co = np.sin(x), np.cos(x)
        f = (a + x) * s - r * co
        lo = np.where(f < 0, x, lo)
        hi = np.where(f > 0, x, hi)
        df = s + (a + x) * co + r * s
        step = f / df
        x_new = x - step
        outside = ~((x_new > lo) & (x_new < hi))
        x_new = np.where(outside, 0.5 * (lo + hi), x_new)
        done = (np.abs(x_new - x) <= 4e-16 * np.abs(x_new)) | (f == 0) | (hi - lo <= 4e-16 * hi)
        x = np.where(converged, x, x_new)
        converged |= done
        if converged.all():
            break
    else:
        bad = int(np.argmin(converged))
        raise RootFindingError(int(n_arr[bad]), float(a[bad] + lo[bad]), float(a[bad] + hi[bad]))

    return x if np.ndim(n) else float(x[0])


def _mode(derived, n, offset, kind):
    kX = n * math.pi + offset
    return Mode(n=int(n), k=kX / derived.X, omega=derived.omega_from_kX(kX),
                kX=kX, offset=offset, branch_kind=kind)


def mode_k_exact(derived: DerivedParams, n: int) -> Mode:
    """Exact root of kX tan(kX) = Xl/L_c2 on branch ``n``."""
    return _mode(derived, n, solve_branch(derived.ratio, n), QUBIT_TERMINATED)


def modes_exact(derived: DerivedParams, n_max: int) -> list[Mode]:
    """Branches 0..n_max in one vectorized solve."""
    n = np.arange(n_max + 1)
    offsets = solve_branch(derived.ratio, n)
    return [_mode(derived, i, float(d), QUBIT_TERMINATED) for i, d in zip(n, offsets)]


def cr_ratio(params: CircuitParams) -> float:
    """Xc / C_R (inf for C_R = 0)."""
    if params.C_R == 0:
        return math.inf
    return params.X * params.c / params.C_R


def mode_k_exact_cr(params: CircuitParams, n: int) -> Mode:
    """Bare resonator (no qubit) closed by C_R: kX tan(kX) = Xc/C_R."""
    derived = derive(params)
    return _mode(derived, n, solve_branch(cr_ratio(params), n), CR_TERMINATED)


def modes_exact_cr(params: CircuitParams, n_max: int) -> list[Mode]:
    derived = derive(params)
    offsets = solve_branch(cr_ratio(params), np.arange(n_max + 1))
    return [_mode(derived, i, float(d), CR_TERMINATED) for i, d in enumerate(offsets)]


def _from_kX(derived, n, kX):
    offset = kX - n * math.pi
    return _mode(derived, n, offset, QUBIT_TERMINATED)


def _warn_regime(derived, n, low):
    if derived.cutoff_unbounded:
        return
    kX = n * math.pi + HALF_PI
    omega_est = derived.omega_from_kX(kX)
    if low and omega_est > 0.5 * derived.omega_cutoff:
        warnings.warn(f"low-frequency formula used at n={n}, omega ~ "
                      f"{omega_est / derived.omega_cutoff:.2g} omega_cutoff", stacklevel=3)
    if not low and omega_est < 2 * derived.omega_cutoff:
        warnings.warn(f"high-frequency formula used at n={n}, omega ~ "
                      f"{omega_est / derived.omega_cutoff:.2g} omega_cutoff", stacklevel=3)


def mode_k_low_approx(derived: DerivedParams, n: int, warn=True) -> Mode:
    """kX ~ (n pi + pi/2)(1 - L_c2/(Xl)); meant for omega << omega_cutoff."""
    if warn:
        _warn_regime(derived, n, low=True)
    inv = 0.0 if derived.cutoff_unbounded else 1.0 / derived.ratio
    return _from_kX(derived, n, (n * math.pi + HALF_PI) * (1 - inv))


def mode_k_low_third_order(derived: DerivedParams, n: int, warn=True) -> Mode:
    """Low-frequency root including the cubic term of the cotangent expansion."""
    if warn:
        _warn_regime(derived, n, low=True)
    a = n * math.pi + HALF_PI
    if derived.cutoff_unbounded:
        return _from_kX(derived, n, a)
    r = derived.ratio
    kX = a * (1 - 1 / (1 + r) + (r / (1 + r) ** 4) * a**2 / 3)
    return _from_kX(derived, n, kX)


def mode_k_high_approx(derived: DerivedParams, n: int, warn=True) -> Mode:
    """kX ~ n pi + Xl/(n pi L_c2); meant for omega >> omega_cutoff, n >= 1."""
    if n < 1:
        raise ValueError("high-frequency approximation needs n >= 1")
    if warn:
        _warn_regime(derived, n, low=False)
    return _from_kX(derived, n, n * math.pi + derived.ratio / (n * math.pi))


def freq_ratio(derived: DerivedParams, n: int):
    """(ideal, corrected) omega_n/omega_0 for the low modes.

    The ideal quarter-wave pattern is 2n+1; the correction induced by the
    qubit boundary is (2n+1)(1 + 8(n^2+n)/(3 pi n_cutoff^3)).
    """
    ideal = 2 * n + 1
    if derived.cutoff_unbounded:
        return float(ideal), float(ideal)
    return float(ideal), ideal * (1 + 8 * (n * n + n) / (3 * math.pi * derived.n_cutoff**3))


def freq_ratio_cr(cr_over_xc, n):
    """Same correction with C_R/(Xc) in place of L_c2/(Xl)."""
    return (2 * n + 1) * (1 + (math.pi**2 / 3) * cr_over_xc**3 * (n * n + n))


def exact_freq_ratio(derived: DerivedParams, n: int) -> float:
    """omega_n / omega_0 from the exact roots (omega_0 the exact fundamental)."""
    return mode_k_exact(derived, n).kX / mode_k_exact(derived, 0).kX


def branch_for_frequency(derived: DerivedParams, omega, n_hi=1 << 20):
    """Smallest branch index whose exact frequency is >= ``omega``."""
    lo, hi = 0, n_hi
    while lo < hi:
        mid = (lo + hi) // 2
        if mode_k_exact(derived, mid).omega < omega:
            lo = mid + 1
        else:
            hi = mid
    return lo


def modes_in_window(derived: DerivedParams, omega_lo, omega_hi) -> list[Mode]:
    first = branch_for_frequency(derived, omega_lo)
    last = branch_for_frequency(derived, omega_hi)
    out = modes_exact(derived, last)[first:]
    return [m for m in out if m.omega <= omega_hi]


@dataclass(frozen=True)
class ModeProfile:
    """Sampled mode shape with unit peak |u| (plotting normalization)."""

    mode: Mode
    u_c: float
    x: np.ndarray
    u: np.ndarray
    current: np.ndarray
    current_amplitude: float

    @property
    def current_ratio(self) -> float:
        """|I(0)| over the standing-wave current amplitude u_c k / l.

        Equals sin(kX). For the fundamental the largest |I| on [0, X] is
        I(0) itself, so the amplitude is the meaningful reference.
        """
        return float(abs(self.current[0]) / self.current_amplitude)


def current_profile(derived: DerivedParams, mode: Mode, grid_points=201) -> ModeProfile:
    """u(x) and I(x) = (1/l) du/dx on a uniform grid over [0, X].

    The sign convention is I(x) = (u_c k / l) sin(k[X - x]) for the
    qubit-terminated branch, which vanishes at the open end; the bare C_R
    branch uses u = u_c sin(kx).
    """
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    X, l, k = derived.X, derived.l, mode.k
    x = np.linspace(0.0, X, grid_points)
    u_c = 1.0
    if mode.branch_kind == CR_TERMINATED:
        u = u_c * np.sin(k * x)
        current = (u_c * k / l) * np.cos(k * x)
    else:
        u = u_c * np.cos(k * (x - X))
        current = (u_c * k / l) * np.sin(k * (X - x))
    return ModeProfile(mode=mode, u_c=u_c, x=x, u=u, current=current,
                       current_amplitude=u_c * k / l)
