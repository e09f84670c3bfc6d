"""Inductive-basis engine and Markov traces.

An element of Y(d, m, k) is stored on the basis
W^(k)_{J_k,a_k,b_k} W^(k-1)_{J_{k-1},a_{k-1},b_{k-1}} ... W^(1)_{0,a_1,b_1}
where W^(k)_{J,a,b} = g_J^{-1}..g_1^{-1} X_1^a t_1^b g_1..g_{k-1}.  A basis
element is the tuple of its heads (J, a, b), outermost level first, so a
level-k element is a flat dict {heads: coefficient}; ``NestedElement.children``
gives the recursive view (head -> level k-1 element).

Generators act from the left by explicit case rules on the outermost head;
whatever is left over is a word in Y(d, m, k-1) acting on the tail.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping

from .algebra import (
    AlgebraParams,
    CanonicalElement,
    _check_letter,
    _qq,
    identity_key,
    word_to_element,
    xpow_reduction,
)
from .scalars import LaurentPoly, RatFunc

__all__ = [
    "NestedElement",
    "TraceParamError",
    "TraceParams",
    "inductive_basis",
    "basis_word",
    "element_to_nested",
    "markov_trace",
    "markov_trace_by_levels",
    "nested_identity",
    "nested_left_mul",
    "nested_to_canonical",
    "relative_trace",
    "w_word",
    "word_to_nested",
    "zero_trace_canonical",
]

Head = tuple  # (J, a, b)


class TraceParamError(KeyError):
    """A trace parameter x_{a,b} was needed but not supplied."""

    def __str__(self):
        return str(self.args[0]) if self.args else "missing trace parameter"


class NestedElement:
    """Element of Y(d, m, level) on the inductive basis."""

    __slots__ = ("params", "terms")

    def __init__(self, params: AlgebraParams, terms: Mapping | None = None):
        self.params = params
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    @property
    def level(self) -> int:
        return self.params.n

    @classmethod
    def _raw(cls, params: AlgebraParams, terms: dict) -> "NestedElement":
        obj = object.__new__(cls)
        obj.params = params
        obj.terms = terms
        return obj

    @classmethod
    def identity(cls, params: AlgebraParams) -> "NestedElement":
        return cls._raw(params, {nested_identity(params.n): RatFunc.const(params.ring, 1)})

    def is_zero(self) -> bool:
        return not self.terms

    def children(self) -> dict[Head, "NestedElement"]:
        """Recursive view: outer head -> element of level k-1."""
        if self.level == 0:
            raise ValueError("level 0 element has no children")
        sub = self.params.with_n(self.level - 1) if self.level > 1 else None
        out: dict = {}
        for tup, c in self.terms.items():
            out.setdefault(tup[0], {})[tup[1:]] = c
        if sub is None:
            return {h: t[()] for h, t in out.items()}
        return {h: NestedElement._raw(sub, t) for h, t in out.items()}

    def __add__(self, other: "NestedElement") -> "NestedElement":
        if self.params != other.params:
            raise ValueError("nested elements of different levels")
        t = dict(self.terms)
        for k, c in other.terms.items():
            s = t[k] + c if k in t else c
            if s.is_zero():
                t.pop(k, None)
            else:
                t[k] = s
        return NestedElement._raw(self.params, t)

    def __neg__(self):
        return NestedElement._raw(self.params, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "NestedElement":
        c = c if isinstance(c, RatFunc) else RatFunc.const(self.params.ring, c)
        if c.is_zero():
            return NestedElement._raw(self.params, {})
        return NestedElement._raw(self.params, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, NestedElement):
            return NotImplemented
        return (
            self.params == other.params
            and self.terms.keys() == other.terms.keys()
            and all(self.terms[k] == other.terms[k] for k in self.terms)
        )

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"({c})*W{list(k)}" for k, c in sorted(self.terms.items()))
        return f"NestedElement{self.params.label()}[{body or '0'}]"


def nested_identity(k: int) -> tuple:
    """Heads of the unit: W^(j)_{j-1,0,0} = 1 at every level j."""
    return tuple((j - 1, 0, 0) for j in range(k, 0, -1))


def _add(out: dict, key, c: LaurentPoly) -> None:
    if key in out:
        s = out[key] + c
        if s.is_zero():
            del out[key]
        else:
            out[key] = s
    elif not c.is_zero():
        out[key] = c


def _heads(params: AlgebraParams, J: int, a: int, b: int):
    """W_{J,a,b} with a reduced into E_m: list of (head, coefficient)."""
    b %= params.d
    return [((J, j, b), c) for j, c in xpow_reduction(params, a)]


def _xpow_letters(a: int) -> list:
    return [("X", 1, 1 if a > 0 else -1)] * abs(a)


def _sub(params: AlgebraParams) -> AlgebraParams:
    return params.with_n(params.n - 1)


def _word_on_tail(params: AlgebraParams, word: Iterable, tail: tuple) -> dict:
    """word . tail for a level-(k-1) basis tuple; params is the level k-1 algebra."""
    one = LaurentPoly.const(params.ring, 1)
    cur = {tail: one}
    for letter in reversed(list(word)):
        nxt: dict = {}
        for tup, c in cur.items():
            for t2, c2 in _left(params, letter, tup):
                _add(nxt, t2, c * c2)
        cur = nxt
    return cur


def _combine(out: dict, head_terms, tail_terms: Mapping, factor: LaurentPoly) -> None:
    for head, hc in head_terms:
        f = factor * hc
        for tail, tc in tail_terms.items():
            _add(out, (head,) + tail, f * tc)


@functools.lru_cache(maxsize=None)
def _left(params: AlgebraParams, letter: tuple, tup: tuple) -> tuple:
    """letter . (basis tuple) at level params.n, polynomial coefficients."""
    k = params.n
    r = params.ring
    one = LaurentPoly.const(r, 1)
    d = params.d
    kind, idx, e = letter
    (J, a, b), tail = tup[0], tup[1:]
    out: dict = {}
    sub = _sub(params) if k > 1 else None

    def on_tail(word):
        if sub is None:
            if word:
                raise AssertionError("non-empty word at level 0")
            return {(): one}
        return _word_on_tail(sub, word, tail)

    if kind == "t":
        if idx <= J:
            _combine(out, [((J, a, b), one)], on_tail([("t", idx, e)]), one)
        elif idx == J + 1:
            _add(out, ((J, a, (b + e) % d),) + tail, one)
        else:
            _combine(out, [((J, a, b), one)], on_tail([("t", idx - 1, e)]), one)
    elif kind == "g" and e == 1:
        i = idx
        if i < J:
            _combine(out, [((J, a, b), one)], on_tail([("g", i, 1)]), one)
        elif i == J:
            _add(out, ((J - 1, a, b),) + tail, one)
        elif i == J + 1:
            _add(out, ((J + 1, a, b),) + tail, one)
            f = _qq(r) * Fraction(1, d)
            for s in range(d):
                word = [("t", J + 1, s)] if s else []
                _combine(out, [((J, a, (b - s) % d), one)], on_tail(word), f)
        else:
            _combine(out, [((J, a, b), one)], on_tail([("g", i - 1, 1)]), one)
    elif kind == "g":
        # g_i^{-1} = g_i - (q - q^{-1}) e_i
        for t2, c in _left(params, ("g", idx, 1), tup):
            _add(out, t2, c)
        f = -_qq(r) * Fraction(1, d)
        for s in range(d):
            cur = {tup: f}
            for letter2 in (("t", idx + 1, (-s) % d), ("t", idx, s)):
                if not letter2[2]:
                    continue
                nxt: dict = {}
                for t3, c3 in cur.items():
                    for t4, c4 in _left(params, letter2, t3):
                        _add(nxt, t4, c3 * c4)
                cur = nxt
            for t3, c3 in cur.items():
                _add(out, t3, c3)
    elif kind == "X" and e == 1:
        if J == 0:
            _combine(out, _heads(params, 0, a + 1, b), {tail: one}, one)
        else:
            _combine(out, [((J, a, b), one)], on_tail([("X", 1, 1)]), one)
            f = _qq(r) * Fraction(1, d)
            ginv = [("g", j, -1) for j in range(J - 1, 0, -1)]
            for s in range(d):
                ts = [("t", 1, s)] if s else []
                _combine(out, _heads(params, 0, 1, b - s), on_tail(ginv + ts + _xpow_letters(a)), f)
                _combine(out, _heads(params, 0, a + 1, b - s), on_tail(ginv + ts), -f)
    else:
        if params.m is not None:
            # X_1^{-1} = -gamma_0^{-1} (X^{m-1} + gamma_{m-1} X^{m-2} + ... + gamma_1)
            gamma = list(params.gamma) + [one]
            g0inv = gamma[0] ** -1
            for j in range(1, params.m + 1):
                cur = {tup: -g0inv * gamma[j]}
                for _ in range(j - 1):
                    nxt: dict = {}
                    for t3, c3 in cur.items():
                        for t4, c4 in _left(params, ("X", 1, 1), t3):
                            _add(nxt, t4, c3 * c4)
                    cur = nxt
                for t3, c3 in cur.items():
                    _add(out, t3, c3)
        elif J == 0:
            _add(out, ((0, a - 1, b),) + tail, one)
        else:
            _combine(out, [((J, a, b), one)], on_tail([("X", 1, -1)]), one)
            f = _qq(r) * Fraction(1, d)
            ginv = [("g", j, -1) for j in range(J - 1, 0, -1)]
            for s in range(d):
                ts = [("t", 1, s)] if s else []
                _combine(out, [((0, 0, (b - s) % d), one)], on_tail(ginv + ts + _xpow_letters(a - 1)), -f)
                _combine(out, [((0, a, (b - s) % d), one)], on_tail(ginv + ts + [("X", 1, -1)]), f)
    return tuple(out.items())


def nested_left_mul(letter: tuple, x: NestedElement) -> NestedElement:
    """Left multiplication of x by a generator letter (t, g^{+-1}, X_1^{+-1})."""
    params = x.params
    letter = _check_letter(params, tuple(letter))
    acc: dict = {}
    for tup, c in x.terms.items():
        for t2, c2 in _left(params, letter, tup):
            term = c * c2
            acc[t2] = acc[t2] + term if t2 in acc else term
    return NestedElement._raw(params, {k: v for k, v in acc.items() if not v.is_zero()})


def word_to_nested(params: AlgebraParams, word: Iterable) -> NestedElement:
    """Product of the letters (left to right) on the inductive basis."""
    letters = [_check_letter(params, tuple(l)) for l in word]
    x = NestedElement.identity(params)
    for letter in reversed(letters):
        x = nested_left_mul(letter, x)
    return x


def element_to_nested(x: CanonicalElement) -> NestedElement:
    """Canonical element rewritten on the inductive basis."""
    from .algebra import monomial_word

    out = NestedElement._raw(x.params, {})
    for key, c in x.terms.items():
        out = out + word_to_nested(x.params, monomial_word(key)).scale(c)
    return out


def w_word(k: int, J: int, a: int, b: int) -> list:
    """Generator word of W^(k)_{J,a,b}."""
    word = [("g", j, -1) for j in range(J, 0, -1)]
    word += _xpow_letters(a)
    if b:
        word.append(("t", 1, b))
    word += [("g", j, 1) for j in range(1, k)]
    return word


def basis_word(tup: tuple) -> list:
    k = len(tup)
    word = []
    for pos, (J, a, b) in enumerate(tup):
        word += w_word(k - pos, J, a, b)
    return word


def nested_to_canonical(x: NestedElement) -> CanonicalElement:
    """Expand every inductive basis element as a generator word."""
    out = CanonicalElement.zero(x.params)
    for tup, c in x.terms.items():
        out = out + word_to_element(x.params, basis_word(tup)).scale(c)
    return out


def inductive_basis(params: AlgebraParams) -> Iterator[tuple]:
    """All basis tuples of B^Ind (m finite)."""
    if params.m is None:
        raise ValueError("the affine algebra has an infinite basis")

    def rec(k):
        if k == 0:
            yield ()
            return
        for J in range(k):
            for a in range(params.m):
                for b in range(params.d):
                    for rest in rec(k - 1):
                        yield ((J, a, b),) + rest

    yield from rec(params.n)


# ---------------------------------------------------------------------------
# traces


class TraceParams:
    """Parameters z and x_{a,b} of a Markov trace.

    ``x`` is a mapping {(a, b): value} or a callable (a, b) -> value.  Values
    may be RatFunc, LaurentPoly, ints or Fractions.  For finite m, x is
    consulted only for a in E_m; other exponents are reduced with the
    polynomial relation of X_1.  For m = infinity a missing entry raises
    TraceParamError unless ``default`` is given.
    """

    def __init__(
        self,
        params: AlgebraParams,
        z,
        x: Mapping | Callable,
        default=None,
    ):
        self.params = params
        self.ring = params.ring
        self.z = self._coerce(z)
        self._x = x
        self.default = None if default is None else self._coerce(default)
        self._cache: dict = {}
        self._tau_cache: dict = {}
        if not self.x(0, 0) == 1:
            raise ValueError("trace parameters need x(0,0) = 1")

    def _coerce(self, v) -> RatFunc:
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, LaurentPoly):
            return RatFunc.from_poly(v)
        return RatFunc.const(self.ring, v)

    def _raw_x(self, a: int, b: int) -> RatFunc:
        key = (a, b)
        if key in self._cache:
            return self._cache[key]
        if callable(self._x):
            try:
                val = self._x(a, b)
            except KeyError:
                val = None
        else:
            val = self._x.get(key)
        if val is None:
            if self.default is None:
                raise TraceParamError(f"no trace parameter x({a},{b})")
            val = self.default
        val = self._coerce(val)
        self._cache[key] = val
        return val

    def x(self, a: int, b: int) -> RatFunc:
        b %= self.params.d
        if self.params.m is None or 0 <= a < self.params.m:
            return self._raw_x(a, b)
        out = RatFunc.const(self.ring, 0)
        for j, c in xpow_reduction(self.params, a):
            out = out + self._raw_x(j, b) * c
        return out

    def E(self) -> RatFunc:
        """tr(e_i) = (1/d) sum_s x_{0,-s} x_{0,s}."""
        d = self.params.d
        out = RatFunc.const(self.ring, 0)
        for s in range(d):
            out = out + self.x(0, -s) * self.x(0, s)
        return out * Fraction(1, d)

    @classmethod
    def zero(cls, params: AlgebraParams) -> "TraceParams":
        """z = 0 and x_{a,b} = delta_{a,0} delta_{b,0}."""
        return cls(params, 0, lambda a, b: 1 if (a, b) == (0, 0) else 0)

    def tau_basis(self, tup: tuple) -> RatFunc:
        """tau of one inductive basis element, memoized."""
        if tup in self._tau_cache:
            return self._tau_cache[tup]
        val = _tau_tuple(self, tup)
        self._tau_cache[tup] = val
        return val


@functools.lru_cache(maxsize=None)
def _rt_shape(params: AlgebraParams, tup: tuple):
    """tr_k of a basis tuple: ("z", combo at level k-1) or ("x", (a, b), tail)."""
    k = params.n
    (J, a, b), tail = tup[0], tup[1:]
    if J == k - 1:
        return ("x", (a, b), tail)
    sub = _sub(params)
    combo = _word_on_tail(sub, w_word(k - 1, J, a, b), tail)
    return ("z", tuple(combo.items()))


def relative_trace(k: int, tp: TraceParams, x: NestedElement) -> NestedElement:
    """tr_k: Y(d,m,k) -> Y(d,m,k-1)."""
    if k < 1 or x.level != k:
        raise ValueError("relative_trace needs a level-k element")
    params = x.params
    sub = params.with_n(k - 1) if k > 1 else None
    acc: dict = {}
    for tup, c in x.terms.items():
        shape = _rt_shape(params, tup)
        if shape[0] == "x":
            term = c * tp.x(*shape[1])
            t = shape[2]
            acc[t] = acc[t] + term if t in acc else term
        else:
            cz = c * tp.z
            for t, pc in shape[1]:
                term = cz * pc
                acc[t] = acc[t] + term if t in acc else term
    acc = {k2: v for k2, v in acc.items() if not v.is_zero()}
    if sub is None:
        return _Level0(params, acc.get((), RatFunc.const(params.ring, 0)))
    return NestedElement._raw(sub, acc)


class _Level0:
    """Scalar result of tr_1."""

    __slots__ = ("params", "value")

    def __init__(self, params, value):
        self.params = params
        self.value = value

    level = 0


def _tau_tuple(tp: TraceParams, tup: tuple) -> RatFunc:
    k = len(tup)
    if k == 0:
        return RatFunc.const(tp.ring, 1)
    params = tp.params.with_n(k)
    shape = _rt_shape(params, tup)
    if shape[0] == "x":
        rest = tp.tau_basis(shape[2])
        if rest.is_zero():
            return rest
        return tp.x(*shape[1]) * rest
    out = RatFunc.const(tp.ring, 0)
    for t, pc in shape[1]:
        v = tp.tau_basis(t)
        if not v.is_zero():
            out = out + v * pc
    return out * tp.z


def markov_trace(tp: TraceParams, x: NestedElement) -> RatFunc:
    """tau = tr_1 o ... o tr_n."""
    if x.params.with_n(tp.params.n) != tp.params and (x.params.d, x.params.m) != (tp.params.d, tp.params.m):
        raise ValueError("trace parameters belong to another algebra")
    out = RatFunc.const(tp.ring, 0)
    for tup, c in x.terms.items():
        v = tp.tau_basis(tup)
        if not v.is_zero():
            out = out + c * v
    return out


def markov_trace_by_levels(tp: TraceParams, x: NestedElement) -> RatFunc:
    """Same value as markov_trace, computed by literally composing tr_n..tr_1."""
    cur = x
    for k in range(x.level, 0, -1):
        cur = relative_trace(k, tp, cur)
    return cur.value


def zero_trace_canonical(x: CanonicalElement) -> RatFunc:
    """tau with z=0, x=delta: the coefficient of the unit monomial."""
    return x.terms.get(identity_key(x.params.n), RatFunc.const(x.params.ring, 0))
