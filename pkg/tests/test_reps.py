import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from yoknot.algebra import AlgebraParams, CanonicalElement, canonical_basis, jm_elements, word_to_element
from yoknot.checks import random_word
from yoknot.reps import (
    DMNode,
    DMPartition,
    RankGuardError,
    Matrix,
    branching_check,
    build_representation,
    character,
    characters_distinct,
    commutant_dimension,
    count_standard_tableaux,
    dimension_identity,
    enumerate_dm_partitions,
    lemma_addable_ratios,
    represent_element,
    representation_relations,
    schur_element,
    schur_factorization,
    semisimplicity_poly,
    standard_tableaux,
    sum_squared_dimensions,
    tableau_content_array,
    tableau_idempotent,
    tableau_position_idempotent,
)
from yoknot.scalars import CycloNum, LaurentPoly, RatFunc, q_minus_qinv, ratfunc_equal, ring
from yoknot.traces import zero_trace_canonical


def shape(*grid):
    return DMPartition.from_lists(grid)


# -- combinatorics -------------------------------------------------------------


@pytest.mark.parametrize("dmn,count", [((1, 1, 3), 3), ((2, 2, 1), 4), ((2, 1, 2), 5)])
def test_shape_counts(dmn, count):
    assert len(enumerate_dm_partitions(*dmn)) == count


def test_tableau_counts():
    assert count_standard_tableaux(DMPartition.single_box(2, 2, 1, 2)) == 1
    assert count_standard_tableaux(shape([(2, 1)])) == 2


def _hook_count(part):
    n = sum(part)
    conj = [sum(1 for p in part if p > j) for j in range(part[0])] if part else []
    hooks = 1
    for i, row in enumerate(part):
        for j in range(row):
            hooks *= row - j + conj[j] - i - 1
    return math.factorial(n) // hooks


@pytest.mark.parametrize("dmn", [(2, 1, 4), (1, 2, 4), (2, 2, 3), (3, 1, 3)])
def test_tableau_count_matches_hook_formula(dmn):
    # oracle: multinomial choice of entries per cell times hook length formula
    for s in enumerate_dm_partitions(*dmn):
        parts = [p for row in s.cells for p in row]
        sizes = [sum(p) for p in parts]
        expected = math.factorial(s.size)
        for p, k in zip(parts, sizes):
            expected = expected // math.factorial(k) * _hook_count(p) if p else expected
        assert count_standard_tableaux(s) == expected
        assert len(standard_tableaux(s)) == expected


@pytest.mark.parametrize("dmn,total", [((1, 1, 3), 6), ((2, 2, 2), 32), ((3, 1, 2), 18)])
def test_sum_of_squares(dmn, total):
    assert sum_squared_dimensions(*dmn) == total
    assert dimension_identity(*dmn)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 4))
def test_grouped_count_matches_enumeration(d, m, n):
    assert sum_squared_dimensions(d, m, n, True) == sum_squared_dimensions(d, m, n, False)


def test_paper_tableau_contents():
    s = shape([(2, 1), (1,)], [(), (1, 1, 1)])
    r = ring(2, 2)
    nodes = {
        1: DMNode(2, 2, 1, 1), 2: DMNode(1, 1, 1, 1), 3: DMNode(1, 2, 1, 1), 4: DMNode(1, 1, 2, 1),
        5: DMNode(1, 1, 1, 2), 6: DMNode(2, 2, 2, 1), 7: DMNode(2, 2, 3, 1),
    }
    T = next(T for T in standard_tableaux(s) if all(T.nodes[i - 1] == nd for i, nd in nodes.items()))
    q, v1, v2 = LaurentPoly.q(r), LaurentPoly.v(r, 1), LaurentPoly.v(r, 2)
    arr = tableau_content_array(T, r)
    assert arr[4] == (1, v1 * q**2)
    assert arr[6] == (2, v2 * q**-4)
    assert arr[3] == (1, v1 * q**-2)
    assert [p for p, _ in arr] == [2, 1, 1, 1, 1, 2, 2]


def test_single_box_content():
    r = ring(2, 3)
    assert DMNode(2, 3, 1, 1).content(r) == LaurentPoly.v(r, 3)


@pytest.mark.parametrize("dm", [(2, 1), (1, 2), (2, 2), (3, 1)])
def test_content_arrays_characterise_tableaux(dm):
    for n in range(1, 5):
        if dm == (2, 2) and n == 4:
            continue
        seen = set()
        count = 0
        for s in enumerate_dm_partitions(*dm, n):
            for T in standard_tableaux(s):
                seen.add(tuple(tableau_content_array(T)))
                count += 1
        assert len(seen) == count


def test_semisimplicity_polynomial():
    r = ring(1, 1)
    assert semisimplicity_poly(1, 2) == LaurentPoly.const(r, 1) + LaurentPoly.q(r, 2)
    assert semisimplicity_poly(1, 1) == LaurentPoly.const(r, 1)
    r2 = ring(1, 2)
    assert semisimplicity_poly(2, 1) == LaurentPoly.v(r2, 1) - LaurentPoly.v(r2, 2)


@pytest.mark.parametrize("dmN", [(1, 1, 4), (1, 2, 4), (2, 2, 3), (1, 3, 3)])
def test_addable_node_ratios(dmN):
    assert lemma_addable_ratios(*dmN)


# -- representations -------------------------------------------------------------


def test_single_box_action():
    for k in (1, 2, 3):
        for l in (1, 2):
            rep = build_representation(DMPartition.single_box(3, 2, k, l))
            assert rep.letter(("t", 1, 1)).entry(0, 0) == RatFunc.const(rep.ring, CycloNum.zeta(3, k - 1))
            assert rep.letter(("X", 1, 1)).entry(0, 0) == RatFunc.from_poly(LaurentPoly.v(rep.ring, l))


def test_one_row_and_one_column():
    r = ring(1, 1)
    assert build_representation(shape([(2,)])).letter(("g", 1, 1)).entry(0, 0) == RatFunc.from_poly(LaurentPoly.q(r))
    minus = -RatFunc.from_poly(LaurentPoly.q(r, -1))
    assert build_representation(shape([(1, 1)])).letter(("g", 1, 1)).entry(0, 0) == minus


@pytest.mark.parametrize("s", enumerate_dm_partitions(2, 2, 2) + enumerate_dm_partitions(1, 2, 3), ids=str)
def test_jm_elements_act_diagonally(s):
    rep = build_representation(s)
    xs, _ = jm_elements(rep.params)
    for i, x in enumerate(xs, 1):
        mat = represent_element(rep, x)
        assert mat.is_diagonal()
        for j, T in enumerate(rep.tableaux):
            assert mat.entry(j, j) == RatFunc.from_poly(T.content(i, rep.ring))


@pytest.mark.parametrize("s", enumerate_dm_partitions(2, 2, 2) + enumerate_dm_partitions(3, 2, 2), ids=str)
def test_representation_relations(s):
    rep = build_representation(s)
    g = rep.letter(("g", 1, 1))
    e = Matrix(rep.dim, rep.ring)
    for k in range(s.d):
        e = e + rep.letter(("t", 1, k)) * rep.letter(("t", 2, -k))
    qq = RatFunc.from_poly(q_minus_qinv(rep.ring)) * RatFunc.const(rep.ring, 1) / s.d
    assert g * g == Matrix.identity(rep.dim, rep.ring) + (e * g).scale(qq)
    assert all(representation_relations(rep).values())


@pytest.mark.parametrize("s", enumerate_dm_partitions(2, 1, 3) + enumerate_dm_partitions(1, 2, 3), ids=str)
def test_representation_is_multiplicative(s):
    rep = build_representation(s)
    rng = random.Random(11)
    for _ in range(200 // 12 + 1):
        u, v = random_word(rng, rep.params, 5), random_word(rng, rep.params, 5)
        assert represent_element(rep, word_to_element(rep.params, u + v)) == rep.word(u) * rep.word(v)


@pytest.mark.parametrize("dmn", [(2, 2, 2), (1, 2, 3), (2, 1, 3)])
def test_irreducible(dmn):
    for s in enumerate_dm_partitions(*dmn):
        assert commutant_dimension(build_representation(s)) == 1


def test_branching_examples():
    assert branching_check(shape([(2, 1)]))
    assert branching_check(DMPartition.single_box(2, 2, 2, 1))
    for s in enumerate_dm_partitions(2, 2, 2):
        assert branching_check(s)


def test_hecke_branching_oracle():
    # chi_(2,1) restricted to H_2 is chi_(2) + chi_(1,1), i.e. trace of g_1 is q - q^-1
    rep = build_representation(shape([(2, 1)]))
    key = ((0, 0, 0), (0, 0, 0), (2, 1, 3))
    assert ratfunc_equal(character(rep, key), RatFunc.from_poly(q_minus_qinv(rep.ring)))


def test_characters_distinct():
    ok, wit = characters_distinct(2, 2, 2)
    assert ok and len(wit) == math.comb(len(enumerate_dm_partitions(2, 2, 2)), 2)


# -- idempotents and Schur elements ----------------------------------------------------


def test_idempotents_at_222():
    p = AlgebraParams(2, 2, 2)
    xs, _ = jm_elements(p)
    total = CanonicalElement.zero(p)
    idems = []
    for s in enumerate_dm_partitions(2, 2, 2):
        for T in standard_tableaux(s):
            E = tableau_idempotent(T)
            assert E * E == E
            for i in (1, 2):
                t = word_to_element(p, [("t", i, 1)])
                xi = RatFunc.const(p.ring, CycloNum.zeta(2, T.p(i) - 1))
                assert t * E == E.scale(xi)
                assert xs[i - 1] * E == E.scale(RatFunc.from_poly(T.content(i, p.ring)))
            idems.append(E)
            total = total + E
    assert total == CanonicalElement.one(p)
    for a, b in itertools.combinations(idems[:6], 2):
        assert (a * b).is_zero()


def test_position_idempotent_trace():
    for s in enumerate_dm_partitions(2, 2, 2):
        for T in standard_tableaux(s):
            tr = zero_trace_canonical(tableau_position_idempotent(T))
            assert tr == RatFunc.const(ring(2, 2), 1) / 4


def test_schur_small_values():
    assert schur_element(DMPartition.single_box(1, 1, 1, 1)) == 1
    for k in (1, 2):
        assert schur_element(DMPartition.single_box(2, 1, k, 1)) == 2
    r = ring(1, 1)
    q2 = LaurentPoly.q(r, 2)
    # E = (g + q^-1)/(q + q^-1) has tau = q^-1/(q + q^-1)
    assert ratfunc_equal(schur_element(shape([(2,)])), RatFunc.from_poly(q2 + 1))
    assert ratfunc_equal(schur_element(shape([(1, 1)])), RatFunc.from_poly(LaurentPoly.q(r, -2) + 1))


def test_schur_single_box_m2():
    # E = (X - v_o)/(v_l - v_o), tau(X) = 0, so s = (v_o - v_l)/v_o
    r = ring(1, 2)
    v1, v2 = LaurentPoly.v(r, 1), LaurentPoly.v(r, 2)
    got = schur_element(DMPartition.single_box(1, 2, 1, 1))
    assert ratfunc_equal(got, RatFunc(v2 - v1, v2))


def test_weight_decomposition_hecke():
    p = AlgebraParams(1, 1, 2)
    shapes = enumerate_dm_partitions(1, 1, 2)
    for key in canonical_basis(p):
        rhs = RatFunc.const(p.ring, 0)
        for s in shapes:
            rhs = rhs + character(build_representation(s), key) / schur_element(s)
        assert ratfunc_equal(rhs, zero_trace_canonical(CanonicalElement.monomial(p, *key)))


def test_schur_factorization():
    assert schur_factorization(DMPartition.single_box(2, 1, 1, 1))
    for s in enumerate_dm_partitions(2, 2, 2):
        assert schur_factorization(s)
    # one empty block contributes 1
    assert schur_factorization(shape([(1, 1), ()], [(), ()]))


def test_rank_guard():
    s = enumerate_dm_partitions(2, 2, 2)[0]
    with pytest.raises(RankGuardError):
        tableau_idempotent(standard_tableaux(s)[0], max_rank=31)
