import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import words
from yoknot.algebra import AlgebraParams, CanonicalElement, canonical_basis, jm_elements, word_to_element
from yoknot.checks import random_trace_params, random_word
from yoknot.scalars import LaurentPoly, RatFunc, q_minus_qinv, ratfunc_equal
from yoknot.traces import (
    NestedElement,
    TraceParamError,
    TraceParams,
    element_to_nested,
    markov_trace,
    markov_trace_by_levels,
    nested_identity,
    nested_left_mul,
    nested_to_canonical,
    relative_trace,
    w_word,
    word_to_nested,
    zero_trace_canonical,
)


def single(params, tup):
    return NestedElement(params, {tup: RatFunc.const(params.ring, 1)})


def xtable(params, z=Fraction(2, 3)):
    """Distinct small rationals for every x(a, b)."""
    def x(a, b):
        return 1 if (a, b) == (0, 0) else Fraction(3 * a + b + 5, 7)

    return TraceParams(params, z, x)


# -- multiplication rules on the inductive basis --------------------------------


def test_mult_t_raises_framing():
    p = AlgebraParams(2, 2, 3)
    tail = nested_identity(2)
    got = nested_left_mul(("t", 2, 1), single(p, ((1, 1, 0),) + tail))
    assert got == single(p, ((1, 1, 1),) + tail)


def test_mult_g_lowers_J():
    p = AlgebraParams(2, 2, 3)
    tail = nested_identity(2)
    got = nested_left_mul(("g", 2, 1), single(p, ((2, 1, 1),) + tail))
    assert got == single(p, ((1, 1, 1),) + tail)


def test_mult_x_raises_exponent():
    p = AlgebraParams(2, 3, 2)
    tail = nested_identity(1)
    got = nested_left_mul(("X", 1, 1), single(p, ((0, 1, 1),) + tail))
    assert got == single(p, ((0, 2, 1),) + tail)


def test_word_to_nested_examples():
    p = AlgebraParams(2, 2, 2)
    assert word_to_nested(p, []) == NestedElement.identity(p)
    assert word_to_nested(p, [("g", 1, 1)]) == single(p, ((0, 0, 0), (0, 0, 0)))


def test_identity_expands_to_one():
    p = AlgebraParams(2, 2, 3)
    assert nested_to_canonical(NestedElement.identity(p)) == CanonicalElement.one(p)


@pytest.mark.parametrize("a,b", [(1, 0), (1, 1), (0, 1)])
def test_top_head_is_twisted_jm_power(a, b):
    # W^(k)_{k-1,a,b} over the identity equals Xt_k^a t_k^b
    p = AlgebraParams(2, 2, 3)
    _, xts = jm_elements(p)
    t3 = word_to_element(p, [("t", 3, b)]) if b else CanonicalElement.one(p)
    got = nested_to_canonical(single(p, ((2, a, b),) + nested_identity(2)))
    assert got == (xts[2] ** a) * t3


@pytest.mark.parametrize("dmn", [(2, 2, 3), (3, 1, 3), (2, None, 3), (1, 3, 3)])
def test_nested_round_trip(dmn):
    p = AlgebraParams(*dmn)
    rng = random.Random(7)
    for _ in range(100):
        word = random_word(rng, p, 7)
        assert nested_to_canonical(word_to_nested(p, word)) == word_to_element(p, word)


def test_element_to_nested_inverts_expansion():
    p = AlgebraParams(2, 2, 2)
    for key in canonical_basis(p):
        x = CanonicalElement.monomial(p, *key)
        assert nested_to_canonical(element_to_nested(x)) == x


# -- relative and Markov traces ---------------------------------------------------


def test_relative_trace_of_g():
    p = AlgebraParams(2, 2, 3)
    tp = xtable(p)
    got = relative_trace(3, tp, word_to_nested(p, [("g", 2, 1)]))
    assert got == NestedElement.identity(p.with_n(2)).scale(tp.z)


def test_relative_trace_level_one():
    p = AlgebraParams(3, 2, 1)
    tp = xtable(p)
    for a in range(2):
        for b in range(3):
            word = ([("X", 1, 1)] * a) + ([("t", 1, b)] if b else [])
            assert relative_trace(1, tp, word_to_nested(p, word)).value == tp.x(a, b)
    assert relative_trace(1, tp, NestedElement.identity(p)).value == 1


def test_trace_of_one():
    p = AlgebraParams(2, 2, 3)
    assert markov_trace(xtable(p), NestedElement.identity(p)) == 1


def test_lemma_z_times_x():
    p = AlgebraParams(2, 2, 2)
    tp = xtable(p)
    for a in range(2):
        for a2 in range(2):
            for b in range(2):
                for b2 in range(2):
                    word = [("X", 1, 1)] * a + [("t", 1, b), ("g", 1, 1)] + [("X", 1, 1)] * a2 + [("t", 1, b2)]
                    got = markov_trace(tp, word_to_nested(p, word))
                    assert ratfunc_equal(got, tp.z * tp.x(a + a2, b + b2))


def test_trace_of_g1g2():
    p = AlgebraParams(2, 2, 3)
    tp = xtable(p)
    assert markov_trace(tp, word_to_nested(p, [("g", 1, 1), ("g", 2, 1)])) == tp.z**2


def test_hecke_values():
    # d=m=1: tau(g^2) = 1 + (q-q^-1) z and tau(g^-1) = z - (q-q^-1)
    p = AlgebraParams(1, 1, 2)
    z = RatFunc.from_poly(LaurentPoly.q(p.ring, 3))
    tp = TraceParams(p, z, {(0, 0): 1})
    qq = RatFunc.from_poly(q_minus_qinv(p.ring))
    assert ratfunc_equal(markov_trace(tp, word_to_nested(p, [("g", 1, 1)] * 2)), qq * z + 1)
    assert ratfunc_equal(markov_trace(tp, word_to_nested(p, [("g", 1, -1)])), z - qq)


def test_missing_affine_parameter():
    p = AlgebraParams(2, None, 1)
    tp = TraceParams(p, 1, {(0, 0): 1})
    with pytest.raises(TraceParamError):
        markov_trace(tp, word_to_nested(p, [("X", 1, 1)]))


def test_x00_must_be_one():
    with pytest.raises(ValueError):
        TraceParams(AlgebraParams(2, 1, 1), 1, {(0, 0): 2})


MARKOV = [AlgebraParams(2, 2, 3), AlgebraParams(3, 1, 3), AlgebraParams(2, None, 3)]


@pytest.mark.parametrize("p", MARKOV, ids=lambda p: p.label())
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_markov_axioms(p, data):
    tp = random_trace_params(random.Random(data.draw(st.integers(0, 10**6))), p)
    u = data.draw(words(p, 5))
    v = data.draw(words(p, 5))
    tau = lambda w: markov_trace(tp, word_to_nested(p, w))
    assert ratfunc_equal(tau(u + v), tau(v + u))
    small = p.with_n(p.n - 1)
    x = data.draw(words(small, 5))
    assert ratfunc_equal(tau(x + [("g", p.n - 1, 1)]), tp.z * tau(x))
    a = data.draw(st.integers(-2, 2) if p.m is None else st.integers(0, p.m - 1))
    b = data.draw(st.integers(0, p.d - 1))
    assert ratfunc_equal(tau(x + w_word(p.n, p.n - 1, a, b)), tp.x(a, b) * tau(x))


@settings(max_examples=30, deadline=None)
@given(words(AlgebraParams(2, 2, 3), 6))
def test_trace_routes_agree(word):
    p = AlgebraParams(2, 2, 3)
    tp = xtable(p)
    x = word_to_nested(p, word)
    assert ratfunc_equal(markov_trace(tp, x), markov_trace_by_levels(tp, x))


def test_zero_trace_examples():
    p = AlgebraParams(2, 2, 3)
    assert zero_trace_canonical(CanonicalElement.one(p)) == 1
    for w in [(2, 1, 3), (3, 2, 1), (1, 3, 2)]:
        assert zero_trace_canonical(CanonicalElement.monomial(p, (1, 0, 0), (0, 1, 0), w)).is_zero()


@pytest.mark.parametrize("dmn", [(2, 2, 2), (1, 2, 3)])
def test_zero_trace_agrees_with_markov_trace(dmn):
    p = AlgebraParams(*dmn)
    tp = TraceParams.zero(p)
    rng = random.Random(3)
    for _ in range(200):
        word = random_word(rng, p, 6)
        assert ratfunc_equal(markov_trace(tp, word_to_nested(p, word)), zero_trace_canonical(word_to_element(p, word)))
