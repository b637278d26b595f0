"""Columnar data behind the mode-profile, suppression and coupling plots.

Every function returns ``(columns, rows)``; nothing here plots.
"""

from __future__ import annotations

import math

import numpy as np

from .coupling import coupling_strength, qubit_persistent_current, suppression_factor
from .modes import modes_exact, current_profile
from .params import CircuitParams, derive, params_for_ratio


def suppression_curve(x_max=10.0, points=201):
    xs = np.linspace(0.0, x_max, points)
    return ["x", "suppression"], [(float(x), suppression_factor(float(x))) for x in xs]


def current_profiles(ratio=28.0, n_modes=3, points=201):
    """I(x) of the lowest modes for a bare line and for Xl/L_c2 = ``ratio``.

    Lengths are in units of X and currents carry the unit-peak-u
    normalization, on a line with X = l = c = 1.
    """
    coupled = derive(params_for_ratio(ratio))
    bare = derive(params_for_ratio(math.inf))
    columns = ["x_over_X"]
    series = []
    for label, derived in (("bare", bare), ("qubit", coupled)):
        for mode in modes_exact(derived, n_modes - 1):
            prof = current_profile(derived, mode, points)
            columns.append(f"I_{label}_n{mode.n}")
            series.append(prof.current)
    x = np.linspace(0.0, 1.0, points)
    rows = [(float(x[i]),) + tuple(float(s[i]) for s in series) for i in range(points)]
    return columns, rows


def coupling_vs_frequency(params: CircuitParams, n_cutoffs=(5.0, 15.0, 50.0),
                          reference=50.0, n_max=200, l2_factor=100.0):
    """g_n / g_0(reference) against omega_n/omega_0 for several cutoffs.

    Only L_c changes between curves. L_2 is held at ``l2_factor`` times the
    largest L_c in the set so that L_c << L_2, and the qubit current is
    held at its value for the reference cutoff.
    """
    X, l = params.X, params.l
    values = sorted(set(n_cutoffs) | {reference})
    lc2 = {nc: 2 * X * l / (math.pi * nc) for nc in values}
    L_2 = l2_factor * max(lc2.values())

    def lc_for(nc):
        return lc2[nc] * L_2 / (L_2 - lc2[nc])

    ref_params = params.replace(L_c=lc_for(reference), L_2=L_2)
    i_q = qubit_persistent_current(ref_params)
    ref_derived = derive(ref_params)
    g_ref = coupling_strength(ref_params, ref_derived, modes_exact(ref_derived, 0)[0], i_q).g

    rows = []
    for nc in n_cutoffs:
        p = params.replace(L_c=lc_for(nc), L_2=L_2)
        d = derive(p)
        for mode in modes_exact(d, n_max):
            g = coupling_strength(p, d, mode, i_q).g
            rows.append((float(nc), mode.n, mode.omega / d.omega0, g / g_ref))
    return ["n_cutoff", "n", "omega_over_omega0", "g_over_g0_ref"], rows


def emit_figure_data(kind, params: CircuitParams | None = None, **options):
    """Dispatch on ``kind`` in {"fig2", "fig4", "fig5"}."""
    if kind == "fig2":
        if params is not None and "ratio" not in options:
            options["ratio"] = derive(params).ratio
        return current_profiles(**options)
    if kind == "fig4":
        return suppression_curve(**options)
    if kind == "fig5":
        if params is None:
            raise ValueError("fig5 needs circuit parameters")
        return coupling_vs_frequency(params, **options)
    raise ValueError(f"unknown figure kind {kind!r}")
