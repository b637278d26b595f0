import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multimode_cqed.params import (CONSTANTS, PHI0, PUBLISHED, CircuitParams, ParameterError,
                                   cr_from_q, cr_ratio_from_q, derive, params_for_ratio,
                                   q_factor_from_cr, q_factor_from_ratio, series_parallel,
                                   validate)

positive = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False, allow_infinity=False)


def make(scale_X=1.0, scale_l=1.0, scale_c=1.0, L_c=1.0, L_2=1.0):
    return CircuitParams(X=scale_X, l=scale_l, c=scale_c, L_c=L_c, L_2=L_2)


def test_flux_quantum_matches_codata():
    assert PHI0 == pytest.approx(2.067833848e-15, rel=1e-9)
    assert CONSTANTS.Phi0 == PHI0


def test_published_derived_values():
    d = derive(PUBLISHED)
    # computed from the stated inputs; the quoted 0.048 / 13.2 / 2.5 GHz are not reproduced
    assert d.L_c2 / d.Xl == pytest.approx(0.0383955862434, rel=1e-10)
    assert d.n_cutoff == pytest.approx(16.5805456994753, rel=1e-10)
    assert d.omega0 / (2 * math.pi) == pytest.approx(2.76396996021e9, rel=1e-10)
    assert d.Xc == pytest.approx(1.7415e-12, rel=1e-12)
    assert PUBLISHED.C_R / d.Xc == pytest.approx(2e-4, rel=0.01)


@settings(max_examples=200, deadline=None)
@given(positive, positive, positive, positive, positive)
def test_derived_identities(X, l, c, L_c, L_2):
    d = derive(CircuitParams(X=X, l=l, c=c, L_c=L_c, L_2=L_2))
    assert d.omega0 * 2 * X * math.sqrt(c * l) == pytest.approx(math.pi, rel=1e-12)
    assert d.Xl / d.L_c2 == pytest.approx(math.pi / 2 * d.n_cutoff, rel=1e-12)
    assert d.omega_cutoff / d.omega0 == pytest.approx(d.n_cutoff, rel=1e-12)
    assert d.L_c2 < min(L_c, L_2)
    assert d.Z0 == pytest.approx(math.sqrt(l / c), rel=1e-15)


def test_zero_coupling_inductance_is_unbounded_cutoff():
    d = derive(PUBLISHED.replace(L_c=0.0))
    assert d.L_c2 == 0.0
    assert math.isinf(d.omega_cutoff) and math.isinf(d.n_cutoff)
    assert d.cutoff_unbounded and math.isinf(d.ratio)


@pytest.mark.parametrize("field, value", [("X", 0.0), ("l", -1.0), ("c", 0.0), ("L_2", 0.0),
                                          ("L_c", -1e-12), ("C_q", -1.0), ("E_J", -1.0),
                                          ("C_R", -1.0), ("Phi_ext", math.nan)])
def test_derive_names_the_bad_field(field, value):
    with pytest.raises(ParameterError) as info:
        derive(PUBLISHED.replace(**{field: value}))
    assert info.value.field == field


def test_validate_collects_violations():
    assert validate(PUBLISHED) == []
    found = validate(PUBLISHED.replace(l=0.0, c=-1.0))
    assert [(v.field, v.rule) for v in found] == [("l", "must be > 0"), ("c", "must be > 0")]
    assert str(found[0]) == "l must be > 0"


def test_validate_advisory_for_strong_coupling():
    found = validate(PUBLISHED.replace(L_c=2 * PUBLISHED.L_2))
    assert len(found) == 1 and found[0].severity == "advisory" and found[0].field == "L_c"


def test_q_factor_examples():
    assert cr_ratio_from_q(1e3) == pytest.approx(1 / math.sqrt(2 * math.pi * 1e3), rel=1e-15)
    assert q_factor_from_ratio(1.0) == pytest.approx(1 / (2 * math.pi))
    assert math.isinf(q_factor_from_cr(PUBLISHED.replace(C_R=0.0)))
    with pytest.raises(ValueError):
        cr_ratio_from_q(0.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1e12))
def test_q_round_trip(Q):
    p = PUBLISHED.replace(C_R=cr_from_q(PUBLISHED, Q))
    assert q_factor_from_cr(p) == pytest.approx(Q, rel=1e-12)


def test_series_parallel_and_ratio_constructor():
    assert series_parallel(0.0, 5.0) == 0.0
    assert series_parallel(1.0, 1.0) == 0.5
    d = derive(params_for_ratio(28.0, L_2_over_L_c=4.0))
    assert d.ratio == pytest.approx(28.0, rel=1e-14)
    assert d.params.L_2 == pytest.approx(4 * d.params.L_c)
    assert derive(params_for_ratio(math.inf)).cutoff_unbounded


def test_params_are_immutable_and_replaceable():
    with pytest.raises(Exception):
        PUBLISHED.X = 1.0
    q = PUBLISHED.replace(L_c=1e-10)
    assert q.L_c == 1e-10 and PUBLISHED.L_c == 231e-12
    assert set(q.as_dict()) == {"X", "l", "c", "L_c", "L_2", "C_q", "E_J", "C_R", "Phi_ext"}
