"""Discrete LC-ladder model of the circuit, used as an independent check.

The resonator is cut into N segments of length dx = X/N: node j carries the
flux phi_j, neighbouring nodes are joined by l dx, and every node has a
capacitance to ground. Node 0 is tied to ground through L_c and to the
qubit flux Phi through L_2; node N carries the termination C_R.

The circuit is linearized around its stationary state. With v the vector
of deviations (dPhi, dphi_0, ..., dphi_N) the equations of motion are
M v'' = -K v with M diagonal and K tridiagonal, so the normal modes come
from a symmetric tridiagonal eigenproblem.

Qubit models
------------
``"dynamic"``  the qubit flux is a full degree of freedom (mass C_q).
``"frozen"``   dPhi is dropped from the resonator equations: node 0 sees
               L_c || L_2 to ground. This is the boundary condition of the
               continuum mode equation.
``"absent"``   no qubit: node 0 is grounded directly (phi_0 = 0).

Lumping
-------
``"trapezoid"`` gives the two end nodes half a cell of capacitance, which
keeps the discretization second order in dx. ``"full-cell"`` gives every node
a full c dx, exactly as the circuit Lagrangian is written; the extra half
cell at the open end then acts as a stray capacitance c dx/2 and the
convergence drops to first order.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from .modes import cr_ratio, mode_k_exact, solve_branch
from .params import PHI0, CircuitParams, DerivedParams, derive

DYNAMIC, FROZEN, ABSENT = "dynamic", "frozen", "absent"
QUBIT_WEIGHT_WARN = 0.1


class StationaryStateError(RuntimeError):
    def __init__(self, message, last_iterate):
        super().__init__(message)
        self.last_iterate = last_iterate


@dataclass(frozen=True)
class StationaryState:
    Phi_GS: float
    phi_GS: float
    residual: float
    reduced_residual: float
    curvature: float
    stable: bool
    iterations: int

    @property
    def effective_curvature(self):
        """Curvature of the qubit potential after eliminating phi (units 1/H)."""
        return self.curvature


def _josephson_terms(params, Phi):
    two_pi = 2 * math.pi / PHI0
    arg = two_pi * (Phi - params.Phi_ext)
    dU = params.E_J * two_pi * math.sin(arg)
    d2U = params.E_J * two_pi**2 * math.cos(arg)
    return dU, d2U


def josephson_curvature(params: CircuitParams, Phi) -> float:
    """d^2 U_q / dPhi^2 = E_J (2 pi/Phi0)^2 cos(2 pi (Phi - Phi_ext)/Phi0)."""
    return _josephson_terms(params, Phi)[1]


def stationarity_residuals(params: CircuitParams, Phi, phi):
    """Dimensionless residuals of the qubit and node-0 stationarity equations.

    The qubit current balance is multiplied by L_2/Phi0 and the node-0
    balance by L_c2/Phi0 (which keeps L_c = 0 regular).
    """
    dU, _ = _josephson_terms(params, Phi)
    L_c, L_2 = params.L_c, params.L_2
    f_qubit = (L_2 * dU + (Phi - phi)) / PHI0
    f_node = (phi - L_c * Phi / (L_c + L_2)) / PHI0
    return f_qubit, f_node


def ground_state_solve(params: CircuitParams, initial_guess=0.25 * PHI0,
                       tol=1e-14, max_iter=100) -> StationaryState:
    """Stationary flux configuration by damped Newton iteration.

    The qubit potential generally has two minima; which one is returned is
    selected by ``initial_guess`` (a qubit flux in Wb). All resonator nodes
    sit at the same flux phi_GS.

    Raises
    ------
    StationaryStateError
        If the iteration has not converged after ``max_iter`` steps.
    """
    derive(params)
    L_c, L_2 = params.L_c, params.L_2
    share = L_c / (L_c + L_2)
    y = np.array([initial_guess, initial_guess * share]) / PHI0

    def F(y):
        return np.array(stationarity_residuals(params, y[0] * PHI0, y[1] * PHI0))

    f = F(y)
    for it in range(1, max_iter + 1):
        d2U = _josephson_terms(params, y[0] * PHI0)[1]
        jac = np.array([[L_2 * d2U + 1.0, -1.0], [-share, 1.0]])
        step = np.linalg.solve(jac, f)
        norm = np.max(np.abs(f))
        lam = 1.0
        while True:
            trial = y - lam * step
            f_trial = F(trial)
            if np.max(np.abs(f_trial)) <= norm or lam < 1e-6:
                break
            lam *= 0.5
        y, f = trial, f_trial
        if np.max(np.abs(f)) <= tol:
            break
    else:
        raise StationaryStateError(f"ground state not converged after {max_iter} iterations",
                                   (y[0] * PHI0, y[1] * PHI0))

    Phi, phi = y * PHI0
    dU, d2U = _josephson_terms(params, Phi)
    reduced = (dU + Phi / (L_2 + L_c)) * (L_2 + L_c) / PHI0
    stable = d2U + 1.0 / (L_2 + L_c) > 0
    if not stable:
        warnings.warn("stationary point is a saddle of the qubit potential", stacklevel=2)
    return StationaryState(Phi_GS=Phi, phi_GS=phi, residual=float(np.max(np.abs(f))),
                           reduced_residual=abs(reduced), curvature=d2U, stable=stable,
                           iterations=it)


def potential_gradient(params: CircuitParams, N, Phi, phi_nodes):
    """Gradient of the full nonlinear potential, scaled by L_2/Phi0.

    ``phi_nodes`` holds phi_0..phi_N. Returns (dU/dPhi, dU/dphi_0, ...).
    """
    phi = np.asarray(phi_nodes, dtype=float)
    dx = params.X / N
    dU, _ = _josephson_terms(params, Phi)
    grad = np.zeros(N + 2)
    grad[0] = dU + (Phi - phi[0]) / params.L_2
    seg = (phi[:-1] - phi[1:]) / (params.l * dx)
    grad[1:] += np.concatenate([seg, [0.0]]) - np.concatenate([[0.0], seg])
    grad[1] += (phi[0] / params.L_c if params.L_c > 0 else 0.0) - (Phi - phi[0]) / params.L_2
    return grad * params.L_2 / PHI0


@dataclass(frozen=True)
class LadderSystem:
    """Linearized N-segment circuit: M v'' = -K v, K tridiagonal.

    Matrices are stored in SI units (``mass`` in F, stiffness in 1/H) over
    the variables listed in ``labels``.
    """

    params: CircuitParams
    N: int
    dx: float
    qubit: str
    lumping: str
    include_cr: bool
    mass: np.ndarray
    k_diag: np.ndarray
    k_off: np.ndarray
    labels: tuple
    state: StationaryState | None = None

    @property
    def size(self):
        return len(self.mass)

    @property
    def qubit_index(self):
        return 0 if self.qubit == DYNAMIC else None

    @property
    def node0_index(self):
        """Index of phi_0, or None when node 0 is grounded."""
        return self.labels.index("phi_0") if "phi_0" in self.labels else None

    def stiffness(self) -> np.ndarray:
        """Dense K (for small systems and tests)."""
        return (np.diag(self.k_diag) + np.diag(self.k_off, 1) + np.diag(self.k_off, -1))

    def mass_matrix(self) -> np.ndarray:
        return np.diag(self.mass)


def build_ladder(params: CircuitParams, N=2000, gs: StationaryState | None = None,
                 qubit=DYNAMIC, lumping="trapezoid", include_cr=True) -> LadderSystem:
    """Assemble the linearized ladder.

    Parameters
    ----------
    gs : StationaryState, optional
        Linearization point for the dynamic qubit; solved for if omitted.
    qubit : {"dynamic", "frozen", "absent"}
    lumping : {"trapezoid", "full-cell"}
    include_cr : bool
        Put C_R on the last node; otherwise the open end is bare.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    if qubit not in (DYNAMIC, FROZEN, ABSENT):
        raise ValueError(f"unknown qubit model {qubit!r}")
    if lumping not in ("trapezoid", "full-cell"):
        raise ValueError(f"unknown lumping {lumping!r}")
    derive(params)
    X, l, c = params.X, params.l, params.c
    L_c, L_2 = params.L_c, params.L_2
    dx = X / N
    link = 1.0 / (l * dx)
    cell = c * dx
    end = 0.5 * cell if lumping == "trapezoid" else cell

    # resonator nodes; node 0 is dropped when it is grounded
    grounded = qubit == ABSENT or L_c == 0
    first = 1 if grounded else 0
    nodes = np.arange(first, N + 1)
    mass = np.full(len(nodes), cell)
    mass[-1] = end + (params.C_R if include_cr else 0.0)
    diag = np.full(len(nodes), 2 * link)
    diag[-1] = link
    off = np.full(len(nodes) - 1, -link)
    if not grounded:
        mass[0] = end
        diag[0] = link + 1.0 / L_c + 1.0 / L_2
    labels = tuple(f"phi_{j}" for j in nodes)

    if qubit == DYNAMIC:
        if params.C_q <= 0:
            raise ValueError("dynamic qubit needs C_q > 0")
        if gs is None:
            gs = ground_state_solve(params)
        k_qq = gs.curvature + 1.0 / L_2
        mass = np.concatenate([[params.C_q], mass])
        diag = np.concatenate([[k_qq], diag])
        off = np.concatenate([[0.0 if grounded else -1.0 / L_2], off])
        labels = ("Phi",) + labels

    return LadderSystem(params=params, N=N, dx=dx, qubit=qubit, lumping=lumping,
                        include_cr=include_cr, mass=mass, k_diag=diag, k_off=off,
                        labels=labels, state=gs)


@dataclass(frozen=True)
class LadderSpectrum:
    """Normal modes of a :class:`LadderSystem`, ascending in frequency.

    ``vectors[:, i]`` is mode i, normalized so that v^T M v = Xc (M in SI);
    ``qubit_weight`` is the fraction of the mode's capacitive energy held
    by the qubit capacitance.
    """

    system: LadderSystem
    omega: np.ndarray
    vectors: np.ndarray
    qubit_weight: np.ndarray

    def tlr_like(self, threshold=0.5):
        """Indices of modes whose energy sits mainly in the resonator."""
        return np.flatnonzero(self.qubit_weight < threshold)

    def near_resonance(self, threshold=QUBIT_WEIGHT_WARN):
        """Resonator-like modes with a non-negligible qubit share."""
        w = self.qubit_weight
        return np.flatnonzero((w > threshold) & (w < 0.5))

    def node_currents(self, i):
        """(I(0), segment currents) for mode ``i``.

        I(0) is the current through the coupling inductances at x = 0, the
        segment currents (phi_j - phi_{j+1}) / (l dx) sit at mid-cells.
        """
        sys = self.system
        p = sys.params
        v = self.vectors[:, i]
        j0 = sys.node0_index
        qi = sys.qubit_index
        nodes = v[1:] if qi is not None else v
        if j0 is None:
            phi = np.concatenate([[0.0], nodes])
        else:
            phi = nodes
        seg = (phi[:-1] - phi[1:]) / (p.l * sys.dx)
        if j0 is None:
            i0 = seg[0]
        else:
            dPhi = v[qi] if qi is not None else 0.0
            i0 = phi[0] / p.L_c + (phi[0] - dPhi) / p.L_2
        return i0, seg


def ladder_modes(system: LadderSystem, n_modes=None) -> LadderSpectrum:
    """Lowest ``n_modes`` eigenpairs of K v = omega^2 M v (all if None).

    The problem is symmetrized with M^{-1/2} and made dimensionless (K in
    units of 1/Xl, M in units of Xc) before the tridiagonal solve.
    """
    p = system.params
    Xl, Xc = p.X * p.l, p.X * p.c
    m = system.mass / Xc
    if np.any(m <= 0):
        raise ValueError("mass matrix must be positive")
    s = 1.0 / np.sqrt(m)
    d = system.k_diag * Xl * s * s
    e = system.k_off * Xl * s[:-1] * s[1:]
    size = len(d)
    if n_modes is None or n_modes >= size:
        kwargs = {}
    else:
        kwargs = {"select": "i", "select_range": (0, n_modes - 1)}
    try:
        lam, y = eigh_tridiagonal(d, e, **kwargs)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise RuntimeError(f"tridiagonal eigensolver failed: {exc}") from exc
    if np.any(lam < -1e-10 * np.max(np.abs(lam))):
        warnings.warn("negative eigenvalue: linearization point is not a minimum", stacklevel=2)
    omega = np.sqrt(np.clip(lam, 0.0, None) / (Xl * Xc))
    vectors = y * s[:, None]
    if system.qubit == DYNAMIC:
        weight = m[0] * vectors[0] ** 2
    else:
        weight = np.zeros(len(lam))
    spectrum = LadderSpectrum(system=system, omega=omega, vectors=vectors, qubit_weight=weight)
    flagged = spectrum.near_resonance()
    if len(flagged):
        warnings.warn(f"modes {flagged.tolist()} have qubit weight > {QUBIT_WEIGHT_WARN}: "
                      "the frozen-qubit approximation does not hold for them", stacklevel=2)
    return spectrum


def continuum_dynamic(params: CircuitParams, n_modes, gs: StationaryState | None = None,
                      step=math.pi / 512):
    """Lowest ``n_modes`` continuum frequencies with a dynamic qubit.

    Eliminating dPhi at frequency omega turns the node-0 condition into
    kX tan(kX) = Xl K_eff(omega) with

        K_eff = 1/L_c + 1/L_2 - (1/L_2)^2 / (K_qq - omega^2 C_q),

    K_qq = U''(Phi_GS) + 1/L_2. The equation is multiplied through by
    (K_qq - omega^2 C_q) and cos(kX) to remove its poles; the qubit-like
    root is included, so the result lines up with the full ladder spectrum.
    """
    derived = derive(params)
    if gs is None:
        gs = ground_state_solve(params)
    L_c, L_2, C_q = params.L_c, params.L_2, params.C_q
    K_qq = gs.curvature + 1.0 / L_2
    K_node = (1.0 / L_c if L_c > 0 else math.inf) + 1.0 / L_2
    if math.isinf(K_node):
        raise ValueError("dynamic continuum needs L_c > 0")

    def f(kX):
        w = derived.omega_from_kX(kX)
        detune = K_qq - w * w * C_q
        return (kX * math.sin(kX) * detune
                - derived.Xl * math.cos(kX) * (K_node * detune - 1.0 / L_2**2))

    roots = []
    a, fa = 0.0, f(0.0)
    while len(roots) < n_modes:
        b = a + step
        fb = f(b)
        if fa == 0.0:
            roots.append(a)
        elif fa * fb < 0:
            roots.append(brentq(f, a, b, xtol=1e-15, rtol=1e-15))
        a, fa = b, fb
    return derived.omega_from_kX(np.array(roots[:n_modes]))


def continuum_reference(params: CircuitParams, n_modes, qubit, include_cr,
                        gs: StationaryState | None = None):
    """Continuum frequencies the ladder is expected to approach.

    Frozen qubit: the qubit-terminated mode equation (C_R is ignored).
    Dynamic qubit: :func:`continuum_dynamic`, qubit-like root included.
    No qubit: the bare line, closed by C_R when ``include_cr`` is set.
    """
    derived = derive(params)
    n = np.arange(n_modes)
    if qubit == DYNAMIC:
        return continuum_dynamic(params, n_modes, gs)
    if qubit == ABSENT:
        r = cr_ratio(params) if include_cr else math.inf
        offsets = solve_branch(r, n)
    else:
        offsets = solve_branch(derived.ratio, n)
    return derived.omega_from_kX(n * math.pi + offsets)


def compared_modes(spectrum: LadderSpectrum, count):
    """Ladder modes matched against :func:`continuum_reference`.

    Resonator-like modes for the frozen/absent models; the lowest modes
    of the full spectrum for a dynamic qubit.
    """
    if spectrum.system.qubit == DYNAMIC:
        idx = np.arange(min(count, len(spectrum.omega)))
    else:
        idx = spectrum.tlr_like()[:count]
    if len(idx) < count:
        raise ValueError(f"only {len(idx)} comparable modes available")
    return idx


@dataclass(frozen=True)
class ConvergenceTable:
    N: np.ndarray
    omega: np.ndarray  # (len(N), n_track)
    continuum: np.ndarray
    rel_error: np.ndarray
    richardson_order: np.ndarray  # (len(N) - 2, n_track)
    fitted_order: np.ndarray  # slope of log error vs log N, per mode

    def rows(self):
        for i, N in enumerate(self.N):
            for n in range(self.omega.shape[1]):
                yield int(N), n, float(self.omega[i, n]), float(self.continuum[n]), \
                    float(self.rel_error[i, n])


def richardson_order(values, ratio=2.0):
    """Observed order from three successive refinements.

    p = log(|f_1 - f_2| / |f_2 - f_3|) / log(ratio), for every consecutive
    triple along axis 0.
    """
    v = np.asarray(values, dtype=float)
    d = np.diff(v, axis=0)
    return np.log(np.abs(d[:-1] / d[1:])) / math.log(ratio)


def tlr_frequencies(spectrum: LadderSpectrum, count):
    return spectrum.omega[compared_modes(spectrum, count)]


def convergence_study(params: CircuitParams, N_list, n_track=5, qubit=FROZEN,
                      include_cr=False, lumping="trapezoid") -> ConvergenceTable:
    """Ladder frequencies of the lowest ``n_track`` resonator modes vs N.

    ``N_list`` must be ascending; the Richardson order assumes a constant
    refinement ratio between successive entries.
    """
    N_arr = np.asarray(N_list, dtype=int)
    if np.any(np.diff(N_arr) <= 0):
        raise ValueError("N_list must be strictly ascending")
    extra = 1 if qubit == DYNAMIC else 0
    gs = ground_state_solve(params) if qubit == DYNAMIC else None
    omega = np.empty((len(N_arr), n_track))
    for i, N in enumerate(N_arr):
        system = build_ladder(params, int(N), gs=gs, qubit=qubit, lumping=lumping,
                              include_cr=include_cr)
        spectrum = ladder_modes(system, n_track + extra + 2)
        omega[i] = tlr_frequencies(spectrum, n_track)
    continuum = continuum_reference(params, n_track, qubit, include_cr, gs)
    rel = np.abs(omega - continuum) / continuum
    if len(N_arr) >= 3:
        ratios = N_arr[1:] / N_arr[:-1]
        rich = richardson_order(omega, float(np.mean(ratios)))
    else:
        rich = np.empty((0, n_track))
    slope = np.array([np.polyfit(np.log(N_arr), np.log(rel[:, n]), 1)[0] for n in range(n_track)]) \
        if len(N_arr) >= 2 else np.full(n_track, np.nan)
    return ConvergenceTable(N=N_arr, omega=omega, continuum=continuum, rel_error=rel,
                            richardson_order=rich, fitted_order=-slope)


@dataclass(frozen=True)
class SuppressionRow:
    mode: int
    measured: float
    predicted: float


def current_suppression_check(spectrum: LadderSpectrum, derived: DerivedParams,
                              n_max=50) -> list[SuppressionRow]:
    """Node-0 current over peak line current, against sin(k_n X).

    On exact roots sin(k_n X) = (omega_c/omega_n) / sqrt(1 + (omega_c/omega_n)^2).
    """
    idx = spectrum.tlr_like()[: n_max + 1]
    rows = []
    for n, i in enumerate(idx):
        i0, seg = spectrum.node_currents(i)
        peak = max(np.max(np.abs(seg)), abs(i0))
        predicted = mode_k_exact(derived, n).sin_kX
        rows.append(SuppressionRow(mode=n, measured=abs(i0) / peak, predicted=predicted))
    return rows
