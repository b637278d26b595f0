import math
import warnings

import numpy as np
import pytest
import sympy

from multimode_cqed.ladder import (ABSENT, DYNAMIC, FROZEN, StationaryStateError, build_ladder,
                                   continuum_dynamic, convergence_study,
                                   current_suppression_check, ground_state_solve, ladder_modes,
                                   potential_gradient, richardson_order, stationarity_residuals)
from multimode_cqed.modes import mode_k_exact, modes_exact_cr
from multimode_cqed.params import PHI0, PUBLISHED, derive

D = derive(PUBLISHED)


def quiet(func, *args, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return func(*args, **kwargs)


def circuit_matrices(params, N, lumping):
    """Independent symbolic assembly from the circuit Lagrangian, qubit first."""
    Phi = sympy.Symbol("Phi")
    phi = sympy.symbols(f"phi0:{N + 1}")
    X, l, c = (sympy.nsimplify(v) for v in (params.X, params.l, params.c))
    dx = X / N
    L_c, L_2 = sympy.nsimplify(params.L_c), sympy.nsimplify(params.L_2)
    U = (Phi - phi[0]) ** 2 / (2 * L_2) + phi[0] ** 2 / (2 * L_c)
    U += sum((phi[j] - phi[j + 1]) ** 2 / (2 * l * dx) for j in range(N))
    end = c * dx / 2 if lumping == "trapezoid" else c * dx
    caps = [end] + [c * dx] * (N - 1) + [end + sympy.nsimplify(params.C_R)]
    coords = (Phi,) + phi
    K = sympy.hessian(U, coords)
    M = sympy.diag(sympy.nsimplify(params.C_q), *caps)
    return K, M


@pytest.mark.parametrize("lumping", ["trapezoid", "full-cell"])
def test_two_segment_system_matches_characteristic_polynomial(lumping):
    params = PUBLISHED.replace(E_J=0.0)
    system = build_ladder(params, N=2, qubit=DYNAMIC, lumping=lumping)
    assert system.size == 4 and system.labels == ("Phi", "phi_0", "phi_1", "phi_2")
    K, M = circuit_matrices(params, 2, lumping)
    assert np.allclose(system.stiffness(), np.array(K, dtype=float), rtol=1e-12, atol=0)
    assert np.allclose(system.mass_matrix(), np.array(M, dtype=float), rtol=1e-12, atol=0)
    # exact rational rescaling to omega in units of 1/sqrt(Xl Xc)
    Xl = sympy.nsimplify(params.X) * sympy.nsimplify(params.l)
    Xc = sympy.nsimplify(params.X) * sympy.nsimplify(params.c)
    lam = sympy.Symbol("lam")
    poly = sympy.Poly((K * Xl - lam * M / Xc).det(), lam)
    roots = sorted(float(r) for r in sympy.real_roots(poly))
    assert len(roots) == 4
    omega = ladder_modes(system).omega * math.sqrt(params.X * params.l * params.X * params.c)
    assert omega == pytest.approx(np.sqrt(roots), rel=1e-9)


def test_stiffness_structure():
    system = build_ladder(PUBLISHED, N=50, qubit=DYNAMIC)
    K = system.stiffness()
    assert np.array_equal(K, K.T)
    inner = K[3:-1]
    assert np.allclose(inner.sum(axis=1), 0.0, atol=1e-6 * np.abs(inner).max())
    assert np.all(system.mass > 0)
    assert np.all(np.linalg.eigvalsh(K) > 0)


def test_qubit_decouples_for_huge_loop_inductance():
    system = build_ladder(PUBLISHED.replace(L_2=1e30, E_J=0.0), N=50, qubit=DYNAMIC)
    link = 1 / (PUBLISHED.l * system.dx)
    assert abs(system.k_off[0]) / link < 1e-25


def test_eigenvectors_mass_orthonormal_and_virial():
    system = build_ladder(PUBLISHED, N=400, qubit=DYNAMIC)
    spectrum = quiet(ladder_modes, system)
    V = spectrum.vectors
    Xc = PUBLISHED.X * PUBLISHED.c
    gram = V.T @ system.mass_matrix() @ V / Xc
    assert np.abs(gram - np.eye(len(gram))).max() <= 1e-10
    K = system.stiffness()
    for i in range(0, system.size, 37):
        kinetic = spectrum.omega[i] ** 2 * (V[:, i] @ system.mass_matrix() @ V[:, i])
        assert V[:, i] @ K @ V[:, i] == pytest.approx(kinetic, rel=1e-8)
    assert np.all(np.diff(spectrum.omega) > 0)


def test_bare_grounded_line_is_quarter_wave():
    params = PUBLISHED.replace(L_c=0.0, C_R=0.0, E_J=0.0)
    spectrum = ladder_modes(build_ladder(params, N=4000, qubit=ABSENT), 6)
    assert spectrum.omega / D.omega0 == pytest.approx(2 * np.arange(6) + 1, rel=1e-6)


def test_frozen_convergence_is_second_order():
    table = convergence_study(PUBLISHED, [500, 1000, 2000, 4000])
    assert np.all(np.diff(table.rel_error, axis=0) < 0)
    assert table.rel_error[2, 0] / table.rel_error[3, 0] == pytest.approx(4, rel=0.1)
    assert np.all(np.abs(table.richardson_order - 2) < 0.2)
    assert np.all(np.abs(table.fitted_order - 2) < 0.1)
    assert len(list(table.rows())) == 4 * 5


def test_full_cell_lumping_is_first_order():
    table = convergence_study(PUBLISHED, [500, 1000, 2000, 4000], lumping="full-cell")
    assert np.all(np.abs(table.richardson_order - 1) < 0.1)


def test_absent_qubit_converges_to_cr_roots():
    table = convergence_study(PUBLISHED, [1000, 2000, 4000], qubit=ABSENT, include_cr=True)
    cr = np.array([m.omega for m in modes_exact_cr(PUBLISHED, 4)])
    assert table.continuum == pytest.approx(cr, rel=1e-14)
    assert table.rel_error[-1].max() < 1e-6


def test_dynamic_qubit_converges_to_eliminated_continuum():
    table = quiet(convergence_study, PUBLISHED, [500, 1000, 2000, 4000], qubit=DYNAMIC)
    assert table.rel_error[-1].max() < 1e-6
    assert np.all(np.abs(table.richardson_order - 2) < 0.2)
    # a heavy qubit barely follows the line: roots approach the frozen ones
    heavy = continuum_dynamic(PUBLISHED.replace(C_q=1e-6), 6)[1:]
    frozen = np.array([mode_k_exact(D, n).omega for n in range(5)])
    assert heavy == pytest.approx(frozen, rel=1e-3)


def test_near_resonance_flag_and_qubit_weight_trend():
    system = build_ladder(PUBLISHED, N=2000, qubit=DYNAMIC, include_cr=False)
    with pytest.warns(UserWarning, match="qubit weight"):
        spectrum = ladder_modes(system, 80)
    flagged = spectrum.near_resonance()
    assert len(flagged) >= 1
    w = spectrum.qubit_weight
    qubit_mode = int(np.argmax(w))
    far = [i for i in range(qubit_mode + 1, 80)
           if spectrum.omega[i] > 2 * D.omega_cutoff]
    assert len(far) > 20
    assert np.all(np.diff(w[far]) < 0)


def test_current_suppression_matches_continuum():
    spectrum = ladder_modes(build_ladder(PUBLISHED, N=8000, qubit=FROZEN, include_cr=False), 60)
    rows = current_suppression_check(spectrum, D, n_max=50)
    assert len(rows) == 51
    assert max(abs(r.measured / r.predicted - 1) for r in rows) <= 0.01
    assert rows[0].measured > 0.99
    near = min(rows, key=lambda r: abs(mode_k_exact(D, r.mode).omega - D.omega_cutoff))
    assert near.predicted == pytest.approx(1 / math.sqrt(2), abs=0.05)
    n5 = min(range(51), key=lambda n: abs(mode_k_exact(D, n).omega - 5 * D.omega_cutoff))
    assert rows[n5].measured == pytest.approx(0.196, abs=0.01)


def test_open_end_gradient_vanishes_at_second_order():
    gaps = []
    for N in (4000, 16000):
        spectrum = ladder_modes(build_ladder(PUBLISHED.replace(C_R=0.0), N=N, qubit=FROZEN), 1)
        v = spectrum.vectors[:, 0]
        gaps.append(abs(v[-1] - v[-2]) / np.abs(v).max())
    assert gaps[1] <= 1e-8
    assert gaps[0] / gaps[1] == pytest.approx(16, rel=0.01)


def test_ground_state_examples():
    zero = ground_state_solve(PUBLISHED.replace(E_J=0.0))
    assert zero.Phi_GS == 0.0 and zero.phi_GS == 0.0
    gs = ground_state_solve(PUBLISHED)
    assert gs.Phi_GS / PHI0 == pytest.approx(0.25474290892775103, rel=1e-10)
    assert gs.stable and gs.residual <= 1e-12 and gs.reduced_residual <= 1e-12
    mirror = ground_state_solve(PUBLISHED, initial_guess=-0.25 * PHI0)
    assert mirror.Phi_GS == pytest.approx(-gs.Phi_GS, rel=1e-12)
    for state in (gs, mirror):
        assert state.phi_GS / state.Phi_GS == pytest.approx(D.L_c2 / PUBLISHED.L_2, rel=1e-10)


def test_full_potential_is_stationary():
    N = 200
    gs = ground_state_solve(PUBLISHED)
    grad = potential_gradient(PUBLISHED, N, gs.Phi_GS, np.full(N + 1, gs.phi_GS))
    assert np.abs(grad).max() <= 1e-12
    assert max(map(abs, stationarity_residuals(PUBLISHED, gs.Phi_GS, gs.phi_GS))) <= 1e-12


def test_saddle_is_flagged_and_nonconvergence_raises():
    with pytest.warns(UserWarning, match="saddle"):
        state = ground_state_solve(PUBLISHED, initial_guess=0.0)
    assert not state.stable
    with pytest.raises(StationaryStateError) as info:
        ground_state_solve(PUBLISHED.replace(Phi_ext=0.4 * PHI0), initial_guess=0.1 * PHI0,
                           max_iter=1)
    assert len(info.value.last_iterate) == 2


def test_richardson_order_on_synthetic_sequence():
    h = np.array([1, 0.5, 0.25, 0.125])
    assert richardson_order(3 + 7 * h**2) == pytest.approx([2, 2])
    assert richardson_order(3 + h) == pytest.approx([1, 1])


@pytest.mark.parametrize("kwargs", [{"N": 1}, {"qubit": "bogus"}, {"lumping": "bogus"}])
def test_build_rejects_bad_arguments(kwargs):
    args = {"N": 10, **kwargs}
    with pytest.raises(ValueError):
        build_ladder(PUBLISHED, **args)
