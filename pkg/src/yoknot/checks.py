"""Property suites shared by the ``selfcheck`` command and the test-suite.

Each ``criterion_*`` function returns a ``SuiteResult``; ``ok`` is False as
soon as one instance fails and ``failures`` says which one.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .algebra import (
    AlgebraParams,
    canonical_basis,
    check_relations,
    identity_key,
    monomial_word,
    word_to_element,
)
from .links import (
    FramedAffineBraidWord,
    all_subsets,
    apply_move,
    can_destabilize,
    character_eigen_check,
    check_affine_E_condition,
    esystem_extend,
    esystem_solve,
    gamma_invariant,
)
from .reps import (
    branching_check,
    build_representation,
    character,
    characters_distinct,
    commutant_dimension,
    dimension_identity,
    enumerate_dm_partitions,
    representation_relations,
    schur_element,
    schur_factorization,
    standard_tableaux,
    tableau_idempotent,
    tableau_position_idempotent,
)
from .scalars import LaurentPoly, RatFunc, cyclo_rank, generic_points, ratfunc_equal, specialize
from .traces import (
    TraceParams,
    basis_word,
    inductive_basis,
    markov_trace,
    nested_to_canonical,
    w_word,
    word_to_nested,
    zero_trace_canonical,
)

RELATION_INSTANCES = [(1, 1, 3), (2, 1, 3), (1, 2, 3), (2, 2, 2), (3, 2, 2), (2, None, 2)]
RANK_INSTANCES = [(2, 1, 2), (1, 2, 2), (2, 2, 2)]
MARKOV_INSTANCES = [(2, 1, 3), (1, 2, 3), (2, 2, 3), (2, None, 2)]
ZERO_TRACE_INSTANCES = [(1, 1, 3), (2, 1, 2), (1, 2, 2), (2, 2, 2)]
INVARIANCE_INSTANCES = [(2, 1), (3, 1), (2, 2), (1, 2), (2, None)]
SCHUR_INSTANCES = [(1, 1, 2), (1, 1, 3), (2, 1, 2), (1, 2, 2), (2, 2, 2)]
BRANCHING_INSTANCES = sorted(
    {(d, m, n) for d, m, n in RELATION_INSTANCES + ZERO_TRACE_INSTANCES + SCHUR_INSTANCES if m is not None and n <= 3}
)


@dataclass
class SuiteResult:
    name: str
    ok: bool = True
    checked: int = 0
    failures: list = field(default_factory=list)

    def record(self, ok: bool, what) -> None:
        self.checked += 1
        if not ok:
            self.ok = False
            if len(self.failures) < 10:
                self.failures.append(str(what))

    def to_json(self) -> dict:
        return {"name": self.name, "status": "PASS" if self.ok else "FAIL", "checked": self.checked, "failures": self.failures}


def _label(d, m, n=None) -> str:
    ms = "inf" if m is None else str(m)
    return f"({d},{ms})" if n is None else f"({d},{ms},{n})"


# ---------------------------------------------------------------------------
# random data


def random_word(rng: random.Random, params: AlgebraParams, length: int) -> list:
    word = []
    for _ in range(length):
        kind = rng.choice("tgX" if params.n > 1 else "tX")
        if kind == "t":
            word.append(("t", rng.randint(1, params.n), rng.randrange(params.d)))
        elif kind == "g":
            word.append(("g", rng.randint(1, params.n - 1), rng.choice((1, -1))))
        else:
            word.append(("X", 1, rng.choice((1, -1))))
    return word


def _rand_frac(rng: random.Random) -> Fraction:
    return Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 5))


def random_trace_params(rng: random.Random, params: AlgebraParams) -> TraceParams:
    """z and every x_{a,b} independent random non-zero rationals."""
    z = _rand_frac(rng)
    salt = rng.getrandbits(32)

    def x(a, b):
        if (a, b) == (0, 0):
            return 1
        return _rand_frac(random.Random(hash((salt, a, b))))

    if params.m is None:
        return TraceParams(params, z, x)
    table = {(a, b): x(a, b) for a in range(params.m) for b in range(params.d)}
    return TraceParams(params, z, table)


def esystem_trace_params(rng: random.Random, params: AlgebraParams, S, a_range=range(-3, 4)) -> TraceParams:
    """E-system solution for S with random extension coefficients and random z."""
    r = params.ring
    sol = esystem_solve(params.d, S)
    a_values = range(1, params.m) if params.m is not None else [a for a in a_range if a]
    lam = {}
    for a in a_values:
        lam[a] = {}
        for i in sol.S:
            c = RatFunc.const(r, _rand_frac(rng))
            if params.m and rng.random() < 0.5:
                c = c * RatFunc.from_poly(LaurentPoly.v(r, rng.randint(1, params.m)))
            lam[a][i] = c
    z = RatFunc.const(r, _rand_frac(rng)) * RatFunc.from_poly(LaurentPoly.q(r, rng.randint(-2, 2)))
    return esystem_extend(sol, params, z, lam)


# ---------------------------------------------------------------------------
# criteria


def criterion_1(**_) -> SuiteResult:
    res = SuiteResult("relations")
    for d, m, n in RELATION_INSTANCES:
        params = AlgebraParams(d, m, n)
        for name, ok in check_relations(params).items():
            res.record(ok, f"{_label(d, m, n)} canonical {name}")
        if m is None:
            continue
        for shape in enumerate_dm_partitions(d, m, n):
            for name, ok in representation_relations(build_representation(shape)).items():
                res.record(ok, f"{_label(d, m, n)} shape {shape} {name}")
    return res


def criterion_2(max_rank: int = 5000, **_) -> SuiteResult:
    res = SuiteResult("dimensions")
    for n in itertools.count(1):
        if math.factorial(n) > max_rank:
            break
        for dm in range(1, max_rank + 1):
            if dm**n * math.factorial(n) > max_rank:
                break
            for d in range(1, dm + 1):
                if dm % d == 0:
                    res.record(dimension_identity(d, dm // d, n), _label(d, dm // d, n))
    return res


def _full_rank(params: AlgebraParams) -> bool:
    keys = list(canonical_basis(params))
    col = {k: i for i, k in enumerate(keys)}
    rank = params.rank()
    for pt in generic_points(params.m):
        try:
            rows = []
            for tup in inductive_basis(params):
                x = word_to_element(params, basis_word(tup))
                row = [specialize(RatFunc.const(params.ring, 0), pt)] * rank
                for k, c in x.terms.items():
                    row[col[k]] = specialize(c, pt)
                rows.append(row)
            return len(rows) == rank and cyclo_rank(rows) == rank
        except ArithmeticError:
            continue
    return False


def criterion_3(seed: int = 0, samples: int = 200, **_) -> SuiteResult:
    res = SuiteResult("basis cross-check")
    rng = random.Random(seed)
    for d, m, n in sorted(set(RELATION_INSTANCES + RANK_INSTANCES), key=str):
        params = AlgebraParams(d, m, n)
        for _ in range(samples):
            w = random_word(rng, params, rng.randint(0, 8))
            ok = nested_to_canonical(word_to_nested(params, w)) == word_to_element(params, w)
            res.record(ok, f"{_label(d, m, n)} word {w}")
    for d, m, n in RANK_INSTANCES:
        res.record(_full_rank(AlgebraParams(d, m, n)), f"{_label(d, m, n)} B^Ind rank")
    return res


def _markov_suite(res: SuiteResult, rng, params: AlgebraParams, tp: TraceParams, samples: int, tag: str) -> None:
    n = params.n
    one = RatFunc.const(params.ring, 1)

    def tau(p, word):
        return markov_trace(tp, word_to_nested(p, word))

    levels = {k: params.with_n(k) for k in range(1, n + 1)}
    for s in range(samples):
        x = random_word(rng, params, rng.randint(0, 5))
        y = random_word(rng, params, rng.randint(0, 5))
        res.record(ratfunc_equal(tau(params, x + y), tau(params, y + x)), f"{tag} Markov1 {x} | {y}")
        k = rng.randint(2, n) if n > 1 else None
        if k is not None:
            u = random_word(rng, levels[k - 1], rng.randint(0, 5))
            lhs = tau(levels[k], u + [("g", k - 1, 1)])
            res.record(ratfunc_equal(lhs, tp.z * tau(levels[k - 1], u)), f"{tag} Markov2 k={k} {u}")
        k = rng.randint(1, n)
        a = rng.randrange(params.m) if params.m is not None else rng.randint(-2, 2)
        b = rng.randrange(params.d)
        u = random_word(rng, levels[k - 1], rng.randint(0, 5)) if k > 1 else []
        lhs = tau(levels[k], u + w_word(k, k - 1, a, b))
        rhs = tp.x(a, b) * (tau(levels[k - 1], u) if k > 1 else one)
        res.record(ratfunc_equal(lhs, rhs), f"{tag} Markov3 k={k} a={a} b={b} {u}")


def criterion_4(seed: int = 0, samples: int = 300, **_) -> SuiteResult:
    res = SuiteResult("Markov trace")
    rng = random.Random(seed)
    for d, m, n in MARKOV_INSTANCES:
        params = AlgebraParams(d, m, n)
        _markov_suite(res, rng, params, random_trace_params(rng, params), samples, f"{_label(d, m, n)} random")
        for S in all_subsets(d):
            tp = esystem_trace_params(rng, params, S)
            _markov_suite(res, rng, params, tp, samples, f"{_label(d, m, n)} S={list(S)}")
    params = AlgebraParams(2, 2, 2)
    tp = random_trace_params(rng, params)
    for a, a2 in itertools.product(range(2), repeat=2):
        for b, b2 in itertools.product(range(2), repeat=2):
            word = [("X", 1, 1)] * a + [("t", 1, b), ("g", 1, 1)] + [("X", 1, 1)] * a2 + [("t", 1, b2)]
            val = markov_trace(tp, word_to_nested(params, word))
            res.record(ratfunc_equal(val, tp.z * tp.x(a + a2, b + b2)), f"(2,2,2) product rule a={a},{a2} b={b},{b2}")
    return res


def criterion_5(**_) -> SuiteResult:
    res = SuiteResult("zero-parameter trace")
    for d, m, n in ZERO_TRACE_INSTANCES:
        params = AlgebraParams(d, m, n)
        tp = TraceParams.zero(params)
        for key in canonical_basis(params):
            word = monomial_word(key)
            lhs = markov_trace(tp, word_to_nested(params, word))
            rhs = zero_trace_canonical(word_to_element(params, word))
            res.record(ratfunc_equal(lhs, rhs), f"{_label(d, m, n)} {key}")
    return res


def random_braid(rng: random.Random, n: int, d: int, length: int) -> FramedAffineBraidWord:
    letters = []
    for _ in range(length):
        kind = rng.choice(("s0", "s", "t") if n > 1 else ("s0", "t"))
        if kind == "s0":
            letters.append(("s0", 0, rng.choice((1, -1))))
        elif kind == "s":
            letters.append(("s", rng.randint(1, n - 1), rng.choice((1, -1))))
        else:
            letters.append(("t", rng.randint(1, n), rng.randrange(d)))
    return FramedAffineBraidWord(n, tuple(letters))


def random_moves(rng: random.Random, w: FramedAffineBraidWord, d: int, steps: int, max_n: int = 4):
    cur = w
    done = []
    for _ in range(steps):
        options = ["conjugate"]
        if cur.n < max_n:
            options += ["stabilize_pos", "stabilize_neg"]
        if can_destabilize(cur):
            options.append("destabilize")
        mv = rng.choice(options)
        gamma = random_braid(rng, cur.n, d, rng.randint(1, 2)) if mv == "conjugate" else None
        cur = apply_move(cur, mv, gamma)
        done.append(mv)
    return cur, done


def criterion_6(seed: int = 0, samples: int = 100, **_) -> SuiteResult:
    res = SuiteResult("invariance")
    rng = random.Random(seed)
    for d, m in INVARIANCE_INSTANCES:
        params = AlgebraParams(d, m, 1)
        for S in all_subsets(d):
            tp = esystem_trace_params(rng, params, S)
            for _ in range(samples):
                w = random_braid(rng, rng.randint(1, 3), d, rng.randint(0, 4))
                moved, done = random_moves(rng, w, d, rng.randint(1, 4))
                for variant in ("Gamma", "Gamma'"):
                    ok = gamma_invariant(w, tp, variant) == gamma_invariant(moved, tp, variant)
                    res.record(ok, f"{_label(d, m)} S={list(S)} {variant} {w.letters} {done}")
    return res


def criterion_7(max_d: int = 6, **_) -> SuiteResult:
    res = SuiteResult("E-system")
    for d in range(1, max_d + 1):
        params = AlgebraParams(d, 1, 1)
        for S in all_subsets(d):
            sol = esystem_solve(d, S)
            res.record(sol.x0[0] == 1, f"d={d} S={list(S)} x00")
            tp = esystem_extend(sol, params, 3)
            res.record(ratfunc_equal(tp.E(), RatFunc.const(params.ring, Fraction(1, len(S)))), f"d={d} S={list(S)} E")
            rep = check_affine_E_condition(tp, 1)
            res.record(rep["linear"] and rep["agree"], f"d={d} S={list(S)} routes {rep}")
            res.record(character_eigen_check(d, S), f"d={d} S={list(S)} eigenvectors")
    for d, m, S in [(2, 2, (1,)), (3, 2, (0, 2)), (2, None, (0, 1))]:
        params = AlgebraParams(d, m, 2)
        tp = esystem_trace_params(random.Random(d), params, S, a_range=range(-1, 2))
        rep = check_affine_E_condition(tp, 2, a_values=range(-1, 2) if m is None else None)
        res.record(rep["ok"] and rep["agree"], f"{_label(d, m, 2)} S={list(S)} level 2 {rep}")
    # perturbed: x(0,1) = 1/3 at d = 2 is not a solution
    params = AlgebraParams(2, 1, 1)
    bad = TraceParams(params, 3, {(0, 0): 1, (0, 1): Fraction(1, 3)})
    rep = check_affine_E_condition(bad, 1)
    res.record(not rep["linear"] and not rep["trace"] and rep["witness"]["trace"] is not None, f"perturbed {rep}")
    return res


def criterion_8(max_rank: int | None = None, **_) -> SuiteResult:
    res = SuiteResult("Schur elements")
    for d, m, n in SCHUR_INSTANCES:
        params = AlgebraParams(d, m, n)
        shapes = enumerate_dm_partitions(d, m, n)
        reps = [build_representation(s) for s in shapes]
        schur = [schur_element(s, max_rank=max_rank) for s in shapes]
        for key in canonical_basis(params):
            lhs = RatFunc.const(params.ring, 1 if key == identity_key(n) else 0)
            rhs = RatFunc.const(params.ring, 0)
            for rep, s in zip(reps, schur):
                rhs = rhs + character(rep, key) / s
            res.record(ratfunc_equal(lhs, rhs), f"{_label(d, m, n)} decomposition at {key}")
        inv_d = RatFunc.const(params.ring, Fraction(1, d**n))
        for shape, s in zip(shapes, schur):
            res.record(schur_factorization(shape, max_rank), f"{_label(d, m, n)} factorization {shape}")
            for T in standard_tableaux(shape):
                tr = zero_trace_canonical(tableau_idempotent(T, max_rank=max_rank))
                res.record(ratfunc_equal(tr * s, RatFunc.const(params.ring, 1)), f"{_label(d, m, n)} tableau independence {T.nodes}")
                tp_ = zero_trace_canonical(tableau_position_idempotent(T, max_rank=max_rank))
                res.record(ratfunc_equal(tp_, inv_d), f"{_label(d, m, n)} position idempotent {T.nodes}")
    return res


def criterion_9(**_) -> SuiteResult:
    res = SuiteResult("branching and distinctness")
    for d, m, n in BRANCHING_INSTANCES:
        for k in range(1, n + 1):
            for shape in enumerate_dm_partitions(d, m, k):
                res.record(branching_check(shape), f"{_label(d, m, k)} branching {shape}")
                res.record(commutant_dimension(build_representation(shape)) == 1, f"{_label(d, m, k)} commutant {shape}")
        ok, _ = characters_distinct(d, m, n)
        res.record(ok, f"{_label(d, m, n)} distinct characters")
    return res


CRITERIA: dict[int, Callable[..., SuiteResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}
