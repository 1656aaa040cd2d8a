import pytest
from hypothesis import given, settings, strategies as st

from braidwalk.braid_core import (
    B3,
    B3_MOD_Z,
    SIGMA,
    Family,
    GroupContext,
    geodesic_length,
    identity,
    inverse,
    iota,
    multiply,
    normal_form,
    sigma_word,
    to_word,
    validate,
)
from braidwalk.montecarlo.burau import burau_oracle

words = st.text(alphabet="aAbB", max_size=24)
contexts = st.sampled_from([B3, B3_MOD_Z, GroupContext(Family.Ak, 4), GroupContext(Family.AkmodZ, 5)])


def test_braid_relation():
    assert normal_form("aba", B3) == normal_form("bab", B3)
    assert normal_form("aba", B3).word == () and normal_form("aba", B3).delta_exp == 1


def test_delta_squared_is_central_mod_z():
    assert normal_form("abaaba").is_identity()
    assert not normal_form("abaaba", B3).is_identity()


def test_sigma_alphabet():
    assert [str(s) for s in SIGMA] == ["a", "b", "ab", "ba", "aD", "bD", "abD", "baD"]


def test_inverse_generators_as_sigma():
    assert sigma_word(normal_form("A")) == [SIGMA[3]._replace(delta=True)]
    assert sigma_word(normal_form("B")) == [SIGMA[2]._replace(delta=True)]


def test_context_validation():
    with pytest.raises(ValueError):
        GroupContext(Family.B3, 4)
    with pytest.raises(ValueError):
        GroupContext(Family.Ak, 2)


def test_geodesic_small_cases():
    assert geodesic_length(identity(B3)) == 0
    assert geodesic_length(normal_form("aba", B3)) == 3
    assert geodesic_length(normal_form("AB", B3)) == 2
    assert geodesic_length(normal_form("aba")) == 3  # Delta in B3/Z


@given(words, contexts)
@settings(max_examples=200, deadline=None)
def test_normal_form_invariants(w, ctx):
    x = normal_form(w, ctx)
    validate(x)
    assert normal_form(to_word(x), ctx) == x


@given(words, words, contexts)
@settings(max_examples=200, deadline=None)
def test_multiply_is_concatenation(u, v, ctx):
    assert multiply(normal_form(u, ctx), normal_form(v, ctx)) == normal_form(u + v, ctx)


@given(words, contexts)
@settings(max_examples=200, deadline=None)
def test_inverse(w, ctx):
    x = normal_form(w, ctx)
    assert multiply(x, inverse(x)).is_identity()
    assert multiply(inverse(x), x).is_identity()


@given(words)
@settings(max_examples=100, deadline=None)
def test_iota_is_swap_automorphism(w):
    swapped = w.translate(str.maketrans("abAB", "baBA"))
    assert iota(normal_form(w, B3)) == normal_form(swapped, B3)


@given(words, words)
@settings(max_examples=200, deadline=None)
def test_normal_form_agrees_with_burau(u, v):
    same_nf = normal_form(u, B3) == normal_form(v, B3)
    assert same_nf == burau_oracle(u, v, modulo_center=False)


@given(words)
@settings(max_examples=100, deadline=None)
def test_geodesic_at_most_word_length(w):
    for ctx in (B3, B3_MOD_Z):
        assert geodesic_length(normal_form(w, ctx)) <= len(w)
