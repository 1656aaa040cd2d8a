import pytest
from hypothesis import given, settings, strategies as st

from braidwalk import drift_analytic as da

ps = st.floats(0.005, 0.495)


@pytest.mark.parametrize("p", [0.0, 0.5, 0.7, -0.1, float("nan")])
def test_domain(p):
    with pytest.raises(da.DomainError):
        da.drift_inverse_symmetric(p)
    with pytest.raises(da.DomainError):
        da.drift_positive_symmetric(p)


def test_simple_ak_domain():
    with pytest.raises(da.DomainError):
        da.drift_simple_Ak(2)
    rep = da.drift_simple_Ak(5)
    assert rep.gamma.value is None and rep.gamma.method is da.Method.UNAVAILABLE
    assert rep.gamma_delta.value == pytest.approx(-rep.gamma_sigma.value / 2)


def test_uniform_limits_are_continuous():
    for fn in (da.drift_inverse_symmetric, da.drift_positive_symmetric):
        at = fn(0.25).values()
        near = fn(0.25 + 1e-6).values()
        for key in at:
            assert near[key] == pytest.approx(at[key], abs=1e-5)


@given(ps)
@settings(max_examples=100, deadline=None)
def test_inverse_symmetric_identities(p):
    r = da.drift_inverse_symmetric(p)
    g = r.gamma_sigma.value
    assert r.gamma_delta.value == pytest.approx(-g / 2)
    assert r.gamma_splus.value == pytest.approx(1.5 * g)
    assert r.gamma.value == pytest.approx(g)
    assert r.gamma_delta.value < 0
    # reflection symmetry p <-> 1/2 - p
    assert da.drift_inverse_symmetric(0.5 - p).gamma.value == pytest.approx(r.gamma.value, abs=1e-10)


@given(st.floats(0.005, 0.2499))
@settings(max_examples=100, deadline=None)
def test_cubic_root_selection(p):
    u = da.inverse_symmetric_root(p)
    c = da.cubic_coefficients(p)
    assert 0 < u < 1
    assert abs(da._poly(c, u)) < 1e-12
    assert u == min(da.cubic_roots_in_unit_interval(p))


def test_cubic_reference_values():
    assert da.inverse_symmetric_root(0.1) == pytest.approx(0.182874, abs=1e-6)
    assert da.inverse_symmetric_root(0.2) == pytest.approx(0.230224, abs=1e-6)


@given(ps.filter(lambda p: abs(p - 0.25) > 1e-4))
@settings(max_examples=100, deadline=None)
def test_positive_symmetric_forms(p):
    R = da.R_positive_symmetric(p)
    assert 4 * (1 - 4 * p) * R * R + 2 * (4 * p - 3) * R + 1 == pytest.approx(0, abs=1e-12)
    # rationalized and unrationalized branches agree away from 1/4
    assert da.four_branch_max(p) == pytest.approx(da.four_branch_max(p, rationalized=False), abs=1e-9)
    assert da.four_branch_max(p) == pytest.approx(da.gamma_piecewise(p), abs=1e-9)


@given(ps)
@settings(max_examples=50, deadline=None)
def test_sigma_drift_solver_agrees(p):
    assert da.gamma_sigma_solver(p) == pytest.approx(da.drift_positive_symmetric(p).gamma_sigma.value, abs=1e-10)


def test_gamma_delta_sign_change():
    # gamma_delta changes sign in the positive family; gamma switches branch there
    assert da.gamma_delta_positive(0.3) < 0 < da.gamma_delta_positive(0.4)
    assert da.gamma_piecewise(0.4) == pytest.approx(0.6)
    assert da.gamma_piecewise(0.3) == pytest.approx(1.2 * da.R_positive_symmetric(0.3))


@given(ps.filter(lambda p: abs(p - 0.25) > 1e-4))
@settings(max_examples=50, deadline=None)
def test_printed_gamma_delta_is_negated(p):
    assert da.printed_gamma_delta_positive(p) == pytest.approx(-da.gamma_delta_positive(p), abs=1e-9)


def test_family_step_distribution():
    d = da.SymmetricFamily("positive-symmetric", 0.1).step_distribution()
    assert d == {"a": 0.1, "b": 0.1, "A": 0.4, "B": 0.4}
    with pytest.raises(da.DomainError):
        da.SymmetricFamily("simple-Ak", 0.1).step_distribution()
