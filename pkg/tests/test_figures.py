import math

import numpy as np
import pytest

from multimode_cqed.figures import (coupling_vs_frequency, current_profiles, emit_figure_data,
                                    suppression_curve)
from multimode_cqed.params import PUBLISHED


def test_suppression_curve():
    columns, rows = suppression_curve()
    assert columns == ["x", "suppression"]
    assert rows[0] == (0.0, 1.0) and rows[-1][0] == 10.0
    assert rows[20][1] == pytest.approx(1 / math.sqrt(2))


def test_current_profiles_shape_and_suppression():
    columns, rows = current_profiles(ratio=28.0)
    data = np.array(rows)
    assert columns[0] == "x_over_X" and len(columns) == 7
    assert np.allclose(data[-1, 1:], 0.0, atol=1e-12)
    bare, coupled = data[0, 1:4], data[0, 4:7]
    assert np.all(np.abs(coupled) < np.abs(bare))


def test_coupling_vs_frequency_reference_normalization():
    columns, rows = coupling_vs_frequency(PUBLISHED, n_max=30)
    data = np.array(rows)
    assert columns == ["n_cutoff", "n", "omega_over_omega0", "g_over_g0_ref"]
    ref = data[(data[:, 0] == 50.0) & (data[:, 1] == 0)]
    assert ref[0, 3] == pytest.approx(1.0, rel=1e-12)
    # a smaller cutoff means a larger L_c and so a larger low-frequency coupling
    g0 = {nc: data[(data[:, 0] == nc) & (data[:, 1] == 0)][0, 3] for nc in (5.0, 15.0, 50.0)}
    assert g0[5.0] > g0[15.0] > g0[50.0]
    # high-frequency curves collapse
    hi = {nc: data[(data[:, 0] == nc) & (data[:, 1] == 30)][0, 3] for nc in (5.0, 15.0)}
    assert hi[5.0] == pytest.approx(hi[15.0], rel=0.1)


def test_dispatch():
    assert emit_figure_data("fig4")[0] == ["x", "suppression"]
    assert len(emit_figure_data("fig2", PUBLISHED)[1]) == 201
    with pytest.raises(ValueError):
        emit_figure_data("fig5")
    with pytest.raises(ValueError):
        emit_figure_data("fig9")
