import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from yoknot.algebra import AlgebraParams
from yoknot.checks import esystem_trace_params, random_braid, random_moves
from yoknot.links import (
    BraidParseError,
    FramedAffineBraidWord,
    InvariantError,
    all_subsets,
    apply_move,
    character_eigen_check,
    check_affine_E_condition,
    closure_summary,
    epsilon_sums,
    esystem_extend,
    esystem_solve,
    gamma_invariant,
)
from yoknot.scalars import CycloNum, LaurentPoly, RatFunc, ratfunc_equal
from yoknot.traces import TraceParams


def braid(n, *letters):
    return FramedAffineBraidWord(n, tuple(letters))


def test_epsilon_sums():
    assert epsilon_sums(braid(3, ("s0", 0, 1), ("s", 1, 1), ("s", 2, -1))) == (0, 1)
    assert epsilon_sums(braid(1, ("t", 1, 3))) == (0, 0)
    assert epsilon_sums(braid(2, ("s", 1, 3))) == (3, 3)


def test_strict_validation():
    with pytest.raises(BraidParseError):
        braid(2, ("s", 2, 1))
    with pytest.raises(BraidParseError):
        braid(2, ("t", 3, 1))
    with pytest.raises(BraidParseError) as exc:
        FramedAffineBraidWord.from_json({"n": 2, "word": [{"g": "s", "i": 1}, {"g": "x"}]})
    assert exc.value.position == "word[1]"


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_json_round_trip(seed):
    rng = random.Random(seed)
    w = random_braid(rng, rng.randint(1, 4), 3, rng.randint(0, 6))
    assert FramedAffineBraidWord.from_json(w.to_json()) == w


# -- E-system ---------------------------------------------------------------------


def test_esystem_d2():
    one, zero = CycloNum.rational(2, 1), CycloNum.rational(2, 0)
    s0 = esystem_solve(2, [0])
    assert s0.x0 == (one, one) and s0.E == 1
    full = esystem_solve(2, [0, 1])
    assert full.x0 == (one, zero) and full.E == Fraction(1, 2)


@pytest.mark.parametrize("d", range(1, 7))
def test_esystem_all_subsets(d):
    subsets = all_subsets(d)
    assert len(subsets) == 2**d - 1
    for S in subsets:
        sol = esystem_solve(d, S)
        assert sol.E == Fraction(1, len(S))
        # (1/d) sum_s x_{0,-s} x_{0,b+s} = x_{0,b} E
        for b in range(d):
            lhs = sum((sol.x0[-s % d] * sol.x0[(b + s) % d] for s in range(d)), CycloNum.rational(d, 0))
            assert lhs * Fraction(1, d) == sol.x0[b] * sol.E
        assert character_eigen_check(d, S)


def test_singleton_extension():
    d, i = 3, 2
    p = AlgebraParams(d, 2, 1)
    lam = {1: {i: Fraction(5, 7)}}
    tp = esystem_extend(esystem_solve(d, [i]), p, 2, lam)
    x01 = CycloNum.zeta(d, i)
    assert tp.x(0, 1) == RatFunc.const(p.ring, x01)
    for b in range(d):
        assert tp.x(1, b) == RatFunc.const(p.ring, x01**b * Fraction(5, 7))


def test_extension_rejects_foreign_index():
    with pytest.raises(ValueError):
        esystem_extend(esystem_solve(3, [0]), AlgebraParams(3, 2, 1), 2, {1: {1: 1}})


def test_zero_extension_is_valid():
    p = AlgebraParams(2, 3, 1)
    tp = esystem_extend(esystem_solve(2, [1]), p, 2)
    assert tp.x(2, 1).is_zero()
    assert check_affine_E_condition(tp)["ok"]


def test_full_subset_accepts_any_vector():
    # with S = everything, lambda spans all of R^d
    d = 3
    p = AlgebraParams(d, 2, 1)
    lam = {1: {0: 1, 1: Fraction(-2, 3), 2: LaurentPoly.v(p.ring, 2)}}
    tp = esystem_extend(esystem_solve(d, range(d)), p, 2, lam)
    assert check_affine_E_condition(tp)["ok"]


@pytest.mark.parametrize("dm", [(2, 2), (3, 1), (2, None), (4, 1)])
def test_extensions_satisfy_E_condition(dm):
    d, m = dm
    p = AlgebraParams(d, m, 1)
    rng = random.Random(5)
    for S in all_subsets(d):
        tp = esystem_trace_params(rng, p, S, a_range=range(-1, 2))
        rep = check_affine_E_condition(tp, 1)
        assert rep["ok"] and rep["agree"]


def test_perturbed_parameters_fail():
    p = AlgebraParams(2, 1, 1)
    bad = TraceParams(p, 3, {(0, 0): 1, (0, 1): Fraction(1, 3)})
    rep = check_affine_E_condition(bad)
    assert not rep["ok"] and rep["agree"]
    assert rep["witness"]["trace"] is not None and rep["witness"]["linear"] is not None


def test_d1_is_vacuous():
    p = AlgebraParams(1, 2, 1)
    tp = TraceParams(p, 2, {(0, 0): 1, (1, 0): Fraction(3, 5)})
    assert check_affine_E_condition(tp)["ok"]


# -- invariants ---------------------------------------------------------------------


def _tp(d=2, m=2, S=(0, 1), seed=0):
    return esystem_trace_params(random.Random(seed), AlgebraParams(d, m, 1), S)


def test_invariant_examples():
    tp = _tp()
    assert gamma_invariant(braid(1), tp).base == 1
    assert gamma_invariant(braid(2, ("s", 1, 1)), tp).base == 1
    assert ratfunc_equal(gamma_invariant(braid(1, ("t", 1, 1)), tp).base, tp.x(0, 1))


def test_sigma_zero_changes_parity_of_gamma_prime():
    tp = _tp()
    v = gamma_invariant(braid(1, ("s0", 0, 1)), tp, "Gamma'")
    assert v.parity == 1
    assert gamma_invariant(braid(1, ("s0", 0, 1)), tp, "Gamma").parity == 0


def test_z_zero_is_rejected():
    tp = esystem_extend(esystem_solve(2, [0]), AlgebraParams(2, 1, 1), 0)
    with pytest.raises(InvariantError):
        gamma_invariant(braid(1), tp)


def test_E_condition_is_enforced():
    bad = TraceParams(AlgebraParams(2, 1, 1), 3, {(0, 0): 1, (0, 1): Fraction(1, 3)})
    with pytest.raises(InvariantError):
        gamma_invariant(braid(1), bad)


def test_invariance_breaks_without_E_condition():
    # x(0,1) = 1/3 at d = 2: negative stabilization of t_1 changes the value
    bad = TraceParams(AlgebraParams(2, 1, 1), 3, {(0, 0): 1, (0, 1): Fraction(1, 3)})
    w = braid(1, ("t", 1, 1))
    a = gamma_invariant(w, bad, enforce_E=False)
    b = gamma_invariant(apply_move(w, "stabilize_neg"), bad, enforce_E=False)
    assert a != b


def test_stabilize_then_destabilize():
    w = braid(2, ("s", 1, 1), ("t", 2, 1), ("s0", 0, -1))
    for mv in ("stabilize_pos", "stabilize_neg"):
        assert apply_move(apply_move(w, mv), "destabilize") == w


@pytest.mark.parametrize("dm", [(2, 1), (3, 1), (2, 2), (1, 2), (2, None)])
@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_move_invariance(dm, seed):
    d, m = dm
    rng = random.Random(seed)
    S = rng.choice(all_subsets(d))
    tp = esystem_trace_params(rng, AlgebraParams(d, m, 1), S)
    w = random_braid(rng, rng.randint(1, 3), d, rng.randint(0, 4))
    moved, _ = random_moves(rng, w, d, rng.randint(1, 4))
    for variant in ("Gamma", "Gamma'"):
        assert gamma_invariant(w, tp, variant) == gamma_invariant(moved, tp, variant)


def test_restriction_to_d1():
    # no framing letters, S = {0}: x(a, b) does not depend on b and Gamma matches Y(1, m)
    rng = random.Random(2)
    lam = {1: {0: Fraction(2, 9)}}
    big = esystem_extend(esystem_solve(3, [0]), AlgebraParams(3, 2, 1), Fraction(4, 5), lam)
    small = TraceParams(AlgebraParams(1, 2, 1, 3), Fraction(4, 5), {(0, 0): 1, (1, 0): Fraction(2, 9)})
    for _ in range(20):
        n = rng.randint(1, 3)
        w = FramedAffineBraidWord(n, tuple(l for l in random_braid(rng, n, 1, 5).letters if l[0] != "t"))
        for variant in ("Gamma", "Gamma'"):
            assert gamma_invariant(w, big, variant) == gamma_invariant(w, small, variant)


# -- closures ---------------------------------------------------------------------


def test_closure_examples():
    assert closure_summary(braid(2, ("s", 1, 1), ("t", 1, 1), ("t", 2, 1)), 3) == [((1, 2), 2)]
    assert closure_summary(braid(2), 3) == [((1,), 0), ((2,), 0)]


def test_conjugation_preserves_closure():
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randint(1, 4)
        w = random_braid(rng, n, 3, rng.randint(0, 6))
        gamma = random_braid(rng, n, 3, rng.randint(1, 3))
        before = sorted(f for _, f in closure_summary(w, 3))
        after = sorted(f for _, f in closure_summary(apply_move(w, "conjugate", gamma), 3))
        assert before == after
    w = braid(2, ("s", 1, 1), ("t", 2, 2))
    assert closure_summary(apply_move(w, "conjugate", braid(2, ("t", 1, 1))), 3) == closure_summary(w, 3)
