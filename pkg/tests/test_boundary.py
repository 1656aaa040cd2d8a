from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from braidwalk.boundary import (
    BoundaryWord,
    ChainError,
    PositivityError,
    build_automaton,
    check_chain,
    continuations,
    cylinder_measure,
    entropy,
    exact_R,
    harmonic_green_ratio,
    log_cylinder_measure,
    printed_cylinder,
    rn_derivative,
    rn_truncated,
    sample_boundary,
    seneta_bound,
)
from braidwalk.braid_core import B3_MOD_Z, iota, normal_form
from braidwalk import drift_analytic as da
from braidwalk.montecarlo.walker import BatchWalk, sample_generators
from braidwalk.passage_green import StepDistribution, solve_q

GENERAL = StepDistribution(0.1, 0.2, 0.3, 0.4)


@pytest.fixture(scope="module")
def aut():
    return build_automaton(solve_q(GENERAL))


def test_chain_rule():
    check_chain(["a", "ab", "b"])
    with pytest.raises(ChainError):
        check_chain(["a", "b"])
    assert set(continuations("ab")) == {"b", "ba"}


def test_exact_R_matches_closed_forms():
    R = exact_R(solve_q(StepDistribution.positive_symmetric(0.3)))
    assert R["a"] == pytest.approx(da.R_positive_symmetric(0.3), abs=1e-10)
    R = exact_R(solve_q(StepDistribution.inverse_symmetric(0.1)))
    assert R["a"] == pytest.approx(da.inverse_symmetric_root(0.1), abs=1e-10)


def test_automaton_constants(aut):
    assert 0 < aut.delta < 1 and aut.K_const > 0
    assert seneta_bound(aut, 10) > seneta_bound(aut, 20) > 0


def test_cylinders_are_a_probability(aut):
    assert sum(cylinder_measure(aut, [u]) for u in ("a", "b", "ab", "ba")) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ChainError):
        cylinder_measure(aut, ["a", "b"])


def test_log_cylinder(aut):
    for w in (["a"], ["ab", "b", "ba"], ["b", "ba", "a", "a", "ab"]):
        assert log_cylinder_measure(aut, w) == pytest.approx(np.log(cylinder_measure(aut, w)), abs=1e-12)
    long = sample_boundary(aut, 2000, 4).extend(2000)
    assert np.isfinite(log_cylinder_measure(aut, long))


def test_printed_cylinder_is_double_in_positive_family():
    a = build_automaton(solve_q(StepDistribution.positive_symmetric(0.3)))
    for w in (["a"], ["a", "ab"], ["ba", "a", "a"]):
        assert printed_cylinder(a, w) == pytest.approx(2 * cylinder_measure(a, w), rel=1e-9)


def test_product_formula_spot_value():
    a = build_automaton(solve_q(StepDistribution.positive_symmetric(0.3)))
    assert cylinder_measure(a, ["a", "ab"]) == pytest.approx(0.124689, abs=1e-6)


def test_walk_limit_matches_cylinders(aut):
    rng = np.random.default_rng(5)
    n = 4000
    w = BatchWalk(B3_MOD_Z, n, capacity=256)
    for _ in range(400):
        w.step(sample_generators(rng, GENERAL.as_dict(), n))
    obs = Counter(w.element(i).word[:2] for i in range(n) if len(w.element(i).word) >= 3)
    keys = sorted(obs)
    exp = np.array([cylinder_measure(aut, k) for k in keys])
    total = sum(obs.values())
    assert exp.sum() == pytest.approx(1.0, abs=1e-9)
    assert stats.chisquare([obs[k] for k in keys], exp * total).pvalue > 1e-3
    sampled = Counter(tuple(sample_boundary(aut, 2, rng).extend(2)) for _ in range(n))
    assert stats.chisquare([sampled[k] for k in keys], exp * n).pvalue > 1e-3


def test_boundary_word_periodic():
    xi = BoundaryWord.periodic(["a", "ab", "ba"])
    assert [xi[i] for i in range(5)] == ["a", "ab", "ba", "a", "ab"]
    with pytest.raises(ChainError):
        BoundaryWord.periodic(["a", "ab"])


@given(st.text(alphabet="aAbB", min_size=1, max_size=6), st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_rn_certificate_contains_deep_truncation(u, seed):
    aut = build_automaton(solve_q(GENERAL))
    xi = sample_boundary(aut, 400, seed)
    g = normal_form(u)
    c = rn_derivative(aut, g, xi, 1e-8)
    assert c.lower <= c.value <= c.upper and c.half_width <= 1e-8
    shallow = rn_derivative(aut, g, xi, depth=min(c.n_used, 60))
    assert c.inside(shallow, 1e-12)
    assert c.contains(rn_truncated(aut, g, xi, c.n_used + 100), 1e-12)


def test_rn_swap_equivariance(aut):
    swapped = build_automaton(solve_q(GENERAL.swapped()))
    rng = np.random.default_rng(11)
    for u in ("a", "Ab", "bbA"):
        xi = sample_boundary(aut, 300, rng)
        ixi = BoundaryWord([iota(s) for s in xi.extend(300)])
        a = rn_derivative(aut, normal_form(u), xi, depth=250).value
        b = rn_derivative(swapped, iota(normal_form(u)), ixi, depth=250).value
        assert a == pytest.approx(b, rel=1e-9)


def test_rn_identity_is_one(aut):
    xi = sample_boundary(aut, 50, 0)
    assert rn_derivative(aut, normal_form(""), xi).value == 1.0
    with pytest.raises(ValueError):
        rn_derivative(aut, normal_form("a"), xi, target_eps=0)


def test_green_route_converges_to_rn():
    qv = solve_q(StepDistribution.uniform())
    aut = build_automaton(qv)
    xi = sample_boundary(aut, 40, 3)
    g = normal_form("ab")
    ref = rn_derivative(aut, g, xi).value
    assert harmonic_green_ratio(qv, xi, g, 8) == pytest.approx(ref, rel=0.05)


def test_entropy_uniform_value():
    nu = StepDistribution.uniform()
    rep = entropy(build_automaton(solve_q(nu)), nu, 1000, 1e-8, 1)
    assert rep.value == pytest.approx(np.log(2) / 4, abs=1e-9)
    assert set(rep.as_json()) >= {"value", "se", "bias"}


def test_automaton_rejects_bad_R():
    with pytest.raises(PositivityError):
        build_automaton(solve_q(GENERAL), R={"a": 0.0, "b": 0.5, "ab": 0.25, "ba": 0.25})
