"""The algebra Y(d, m, n) on its canonical basis X^a t^b g_w.

A monomial key is ``(a, b, w)``: X-exponents, t-exponents mod d and the
permutation w as a tuple of images of 1..n.  Products are computed by
absorbing generator letters from the left, one at a time, using
g_i X_i^a X_{i+1}^b = X_i^b X_{i+1}^a g_i + (e_i terms), the quadratic
relation and the polynomial relation satisfied by X_1 when m is finite.
Every generator/monomial product is cached per parameter set.

Letters are tuples ``(kind, index, exp)`` with kind one of ``"t"``, ``"g"``,
``"X"``; only X_1 is a generator, so X letters always carry index 1.
"""

from __future__ import annotations

import functools
import itertools
import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .scalars import CycloNum, LaurentPoly, RatFunc, Ring, q_minus_qinv, ring

__all__ = [
    "AlgebraParams",
    "CanonicalElement",
    "Permutation",
    "apply_letter",
    "canonical_basis",
    "change_field",
    "check_relations",
    "defining_relations",
    "e_idempotent",
    "eta_involution",
    "invert_generator",
    "jm_elements",
    "make_generator",
    "monomial_word",
    "multiply",
    "project_pi_H",
    "project_pi_Y",
    "word_to_element",
    "xpow_reduction",
]

Key = tuple  # (a, b, w)
Letter = tuple  # (kind, index, exp)


@dataclass(frozen=True)
class AlgebraParams:
    """Y(d, m, n); m=None stands for the affine case m = infinity.

    ``field`` is the order of the root of unity in the coefficient field; it
    defaults to d and may be any multiple of d (used when an algebra with
    smaller d has to share coefficients with a bigger one).
    """

    d: int
    m: int | None
    n: int
    field: int = 0
    gamma: tuple = dataclasses.field(default=(), compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.d < 1 or self.n < 1:
            raise ValueError("d and n must be positive")
        if self.m is not None and self.m < 1:
            raise ValueError("m must be positive or None")
        if not self.field:
            object.__setattr__(self, "field", self.d)
        if self.field % self.d:
            raise ValueError("coefficient field order must be a multiple of d")
        if self.m is not None:
            object.__setattr__(self, "gamma", _gamma(self.ring, self.m))

    @property
    def ring(self) -> Ring:
        return ring(self.field, self.m)

    @property
    def affine(self) -> bool:
        return self.m is None

    def rank(self) -> int | None:
        if self.m is None:
            return None
        return (self.d * self.m) ** self.n * _factorial(self.n)

    def with_n(self, n: int) -> "AlgebraParams":
        return AlgebraParams(self.d, self.m, n, self.field)

    def label(self) -> str:
        return f"({self.d},{'inf' if self.m is None else self.m},{self.n})"


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _gamma(r: Ring, m: int) -> tuple:
    """Coefficients gamma_0..gamma_{m-1} of (X-v_1)...(X-v_m) = X^m + sum gamma_j X^j."""
    coeffs = [LaurentPoly.const(r, 1)]  # ascending powers of X
    for a in range(1, m + 1):
        v = LaurentPoly.v(r, a)
        new = [LaurentPoly.zero(r)] * (len(coeffs) + 1)
        for j, c in enumerate(coeffs):
            new[j + 1] = new[j + 1] + c
            new[j] = new[j] - v * c
        coeffs = new
    return tuple(coeffs[:m])


# ---------------------------------------------------------------------------
# permutations


class Permutation:
    """Permutation of 1..n given by its images."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation: {images}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def from_word(cls, n: int, word: Iterable[int]) -> "Permutation":
        w = tuple(range(1, n + 1))
        for i in reversed(list(word)):
            w = _left_s(i, w)
        return cls(w)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def length(self) -> int:
        return _length(self.images)

    def reduced_word(self) -> tuple[int, ...]:
        return _reduced_word(self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(tuple(self.images[k - 1] for k in other.images))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({list(self.images)})"


def _left_s(i: int, w: tuple) -> tuple:
    """s_i o w."""
    return tuple(i + 1 if x == i else i if x == i + 1 else x for x in w)


@functools.lru_cache(maxsize=None)
def _length(w: tuple) -> int:
    return sum(1 for x, y in itertools.combinations(w, 2) if x > y)


@functools.lru_cache(maxsize=None)
def _reduced_word(w: tuple) -> tuple[int, ...]:
    # greedy on the smallest left descent gives the lex-smallest reduced word
    word = []
    while True:
        for i in range(1, len(w)):
            if w.index(i) > w.index(i + 1):
                word.append(i)
                w = _left_s(i, w)
                break
        else:
            return tuple(word)


# ---------------------------------------------------------------------------
# elements


class CanonicalElement:
    """Finite combination of canonical monomials with RatFunc coefficients."""

    __slots__ = ("params", "terms")

    def __init__(self, params: AlgebraParams, terms: Mapping | None = None):
        self.params = params
        self.terms = {k: v for k, v in (terms or {}).items() if not v.is_zero()}

    @classmethod
    def _raw(cls, params: AlgebraParams, terms: dict) -> "CanonicalElement":
        obj = object.__new__(cls)
        obj.params = params
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, params: AlgebraParams) -> "CanonicalElement":
        return cls._raw(params, {})

    @classmethod
    def one(cls, params: AlgebraParams) -> "CanonicalElement":
        return cls.scalar(params, 1)

    @classmethod
    def scalar(cls, params: AlgebraParams, c) -> "CanonicalElement":
        c = _as_ratfunc(params, c)
        if c.is_zero():
            return cls.zero(params)
        return cls._raw(params, {identity_key(params.n): c})

    @classmethod
    def monomial(cls, params: AlgebraParams, a, b, w=None, coeff=1) -> "CanonicalElement":
        n = params.n
        w = tuple(range(1, n + 1)) if w is None else tuple(getattr(w, "images", w))
        key = (tuple(a), tuple(x % params.d for x in b), w)
        _check_key(params, key)
        return cls._raw(params, {key: _as_ratfunc(params, coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "CanonicalElement") -> None:
        if self.params != other.params:
            raise ValueError("elements of different algebras")

    def __add__(self, other):
        if not isinstance(other, CanonicalElement):
            other = CanonicalElement.scalar(self.params, other)
        self._check(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            if k in t:
                s = t[k] + c
                if s.is_zero():
                    del t[k]
                else:
                    t[k] = s
            else:
                t[k] = c
        return CanonicalElement._raw(self.params, t)

    __radd__ = __add__

    def __neg__(self):
        return CanonicalElement._raw(self.params, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, CanonicalElement):
            other = CanonicalElement.scalar(self.params, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "CanonicalElement":
        c = _as_ratfunc(self.params, c)
        if c.is_zero():
            return CanonicalElement.zero(self.params)
        return CanonicalElement._raw(self.params, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, CanonicalElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = CanonicalElement.one(self.params)
        for _ in range(k):
            out = multiply(out, self)
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RatFunc, LaurentPoly, CycloNum)):
            other = CanonicalElement.scalar(self.params, other)
        if not isinstance(other, CanonicalElement):
            return NotImplemented
        if self.params != other.params:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[k] == other.terms[k] for k in self.terms)

    __hash__ = None

    def coefficient(self, a, b, w=None) -> RatFunc:
        n = self.params.n
        w = tuple(range(1, n + 1)) if w is None else tuple(getattr(w, "images", w))
        key = (tuple(a), tuple(x % self.params.d for x in b), w)
        return self.terms.get(key, RatFunc.const(self.params.ring, 0))

    def sorted_terms(self) -> list[tuple[Key, RatFunc]]:
        return sorted(self.terms.items())

    def map_coefficients(self, fn) -> "CanonicalElement":
        return CanonicalElement(self.params, {k: fn(c) for k, c in self.terms.items()})

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b, w), c in self.sorted_terms():
            mono = []
            for i, e in enumerate(a, 1):
                if e:
                    mono.append(f"X{i}" + (f"^{e}" if e != 1 else ""))
            for j, e in enumerate(b, 1):
                if e:
                    mono.append(f"t{j}" + (f"^{e}" if e != 1 else ""))
            word = _reduced_word(w)
            if word:
                mono.append("g[" + ",".join(map(str, word)) + "]")
            parts.append(f"({c.to_text()})" + ("*" + "*".join(mono) if mono else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"CanonicalElement{self.params.label()}[{self.to_text()}]"


def identity_key(n: int) -> Key:
    return ((0,) * n, (0,) * n, tuple(range(1, n + 1)))


def _as_ratfunc(params: AlgebraParams, c) -> RatFunc:
    if isinstance(c, RatFunc):
        if c.ring != params.ring:
            raise ValueError("coefficient ring mismatch")
        return c
    if isinstance(c, LaurentPoly):
        if c.ring != params.ring:
            raise ValueError("coefficient ring mismatch")
        return RatFunc.from_poly(c)
    return RatFunc.const(params.ring, c)


def _check_key(params: AlgebraParams, key: Key) -> None:
    a, b, w = key
    n = params.n
    if len(a) != n or len(b) != n or len(w) != n:
        raise ValueError("monomial of the wrong size")
    if params.m is not None and any(not 0 <= x < params.m for x in a):
        raise ValueError("X-exponent outside E_m")
    Permutation(w)


def canonical_basis(params: AlgebraParams) -> Iterator[Key]:
    """All canonical monomials (m finite), in lexicographic key order."""
    if params.m is None:
        raise ValueError("the affine algebra has an infinite basis")
    n = params.n
    perms = sorted(itertools.permutations(range(1, n + 1)))
    for a in itertools.product(range(params.m), repeat=n):
        for b in itertools.product(range(params.d), repeat=n):
            for w in perms:
                yield (a, b, w)


# ---------------------------------------------------------------------------
# letters


def _check_letter(params: AlgebraParams, letter: Letter) -> Letter:
    try:
        kind, idx, e = letter
    except (TypeError, ValueError):
        raise ValueError(f"invalid letter {letter!r}") from None
    n = params.n
    if kind == "t":
        if not 1 <= idx <= n:
            raise ValueError(f"t_{idx} out of range for n={n}")
        return ("t", idx, e % params.d)
    if kind == "g":
        if not 1 <= idx <= n - 1:
            raise ValueError(f"g_{idx} out of range for n={n}")
        if e not in (1, -1):
            raise ValueError("g letters take exponent +1 or -1")
        return letter
    if kind == "X":
        if idx != 1:
            raise ValueError("only X_1 is a generator")
        if e not in (1, -1):
            raise ValueError("X letters take exponent +1 or -1")
        return letter
    raise ValueError(f"invalid letter {letter!r}")


def _x_word(i: int, e: int) -> list[Letter]:
    """X_i^{e} for e = +-1 as a word in the generators."""
    up = [("g", k, e) for k in range(i - 1, 0, -1)]
    down = [("g", k, e) for k in range(1, i)]
    return up + [("X", 1, e)] + down


def monomial_word(key: Key) -> list[Letter]:
    """Generator word whose product is the canonical monomial."""
    a, b, w = key
    word: list[Letter] = []
    for i, e in enumerate(a, 1):
        if e:
            word.extend(_x_word(i, 1 if e > 0 else -1) * abs(e))
    for j, e in enumerate(b, 1):
        if e:
            word.append(("t", j, e))
    word.extend(("g", i, 1) for i in _reduced_word(w))
    return word


# ---------------------------------------------------------------------------
# left multiplication by a generator on a monomial


def _add(out: dict, key: Key, c: LaurentPoly) -> None:
    if key in out:
        s = out[key] + c
        if s.is_zero():
            del out[key]
        else:
            out[key] = s
    elif not c.is_zero():
        out[key] = c


@functools.lru_cache(maxsize=None)
def _xpow_reduction(params: AlgebraParams, a: int) -> tuple[tuple[int, LaurentPoly], ...]:
    """X_1^a as a combination of X_1^j, j in E_m (m finite)."""
    m = params.m
    r = params.ring
    if 0 <= a < m:
        return ((a, LaurentPoly.const(r, 1)),)
    gamma = list(params.gamma) + [LaurentPoly.const(r, 1)]
    if a >= m:
        vec = dict(_xpow_reduction(params, a - 1))
        out: dict = {}
        for j, c in vec.items():
            if j + 1 < m:
                out[j + 1] = out.get(j + 1, LaurentPoly.zero(r)) + c
            else:
                for k in range(m):
                    out[k] = out.get(k, LaurentPoly.zero(r)) - c * gamma[k]
    else:
        vec = dict(_xpow_reduction(params, a + 1))
        g0inv = _monomial_inverse(gamma[0])
        out = {}
        for j, c in vec.items():
            if j >= 1:
                out[j - 1] = out.get(j - 1, LaurentPoly.zero(r)) + c
            else:
                for k in range(1, m + 1):
                    out[k - 1] = out.get(k - 1, LaurentPoly.zero(r)) - c * g0inv * gamma[k]
    return tuple(sorted((j, c) for j, c in out.items() if not c.is_zero()))


def _monomial_inverse(p: LaurentPoly) -> LaurentPoly:
    if len(p.t) != 1:
        raise ValueError("not a monomial")
    return p**-1


def xpow_reduction(params: AlgebraParams, a: int) -> list[tuple[int, LaurentPoly]]:
    if params.m is None:
        return [(a, LaurentPoly.const(params.ring, 1))]
    return list(_xpow_reduction(params, a))


@functools.lru_cache(maxsize=None)
def _qq(r: Ring) -> LaurentPoly:
    return q_minus_qinv(r)


def _e_times(params: AlgebraParams, i: int, b: tuple, coeff: LaurentPoly):
    """e_i t^b as (b', coeff/d) pairs."""
    d = params.d
    c = coeff * Fraction(1, d)
    for s in range(d):
        bb = list(b)
        bb[i - 1] = (bb[i - 1] + s) % d
        bb[i] = (bb[i] - s) % d
        yield tuple(bb), c


@functools.lru_cache(maxsize=None)
def _left_gen(params: AlgebraParams, letter: Letter, key: Key) -> tuple:
    r = params.ring
    one = LaurentPoly.const(r, 1)
    a, b, w = key
    out: dict = {}
    kind, idx, e = letter
    if kind == "t":
        bb = list(b)
        bb[idx - 1] = (bb[idx - 1] + e) % params.d
        out[(a, tuple(bb), w)] = one
    elif kind == "X":
        if params.m is None:
            aa = (a[0] + e,) + a[1:]
            out[(aa, b, w)] = one
        else:
            for j, c in _xpow_reduction(params, a[0] + e):
                _add(out, ((j,) + a[1:], b, w), c)
    elif kind == "g" and e == -1:
        for k, c in _left_gen(params, ("g", idx, 1), key):
            _add(out, k, c)
        for bb, c in _e_times(params, idx, b, -_qq(r)):
            _add(out, (a, bb, w), c)
    else:
        _left_g(params, idx, key, out)
    return tuple(out.items())


def _left_g(params: AlgebraParams, i: int, key: Key, out: dict) -> None:
    r = params.ring
    qq = _qq(r)
    one = LaurentPoly.const(r, 1)
    a, b, w = key
    A, B = a[i - 1], a[i]
    # correction terms of g_i X_i^A X_{i+1}^B
    if A >= B:
        pairs = [(A - k, B + k) for k in range(1, A - B + 1)]
        sign = -qq
    else:
        pairs = [(A + k, B - k) for k in range(0, B - A)]
        sign = qq
    for x, y in pairs:
        aa = list(a)
        aa[i - 1], aa[i] = x, y
        for bb, c in _e_times(params, i, b, sign):
            _add(out, (tuple(aa), bb, w), c)
    # leading term X^{s_i a} t^{s_i b} g_i g_w
    aa = list(a)
    aa[i - 1], aa[i] = B, A
    bb = list(b)
    bb[i - 1], bb[i] = b[i], b[i - 1]
    aa, bb = tuple(aa), tuple(bb)
    sw = _left_s(i, w)
    if _length(sw) > _length(w):
        _add(out, (aa, bb, sw), one)
    else:
        _add(out, (aa, bb, sw), one)
        for b2, c in _e_times(params, i, bb, qq):
            _add(out, (aa, b2, w), c)


def _apply_letter_poly(params: AlgebraParams, letter: Letter, terms: dict) -> dict:
    """Left multiplication on a dict of LaurentPoly coefficients."""
    out: dict = {}
    for key, c in terms.items():
        for k2, c2 in _left_gen(params, letter, key):
            _add(out, k2, c * c2)
    return out


@functools.lru_cache(maxsize=None)
def _word_on_key(params: AlgebraParams, word: tuple, key: Key) -> tuple:
    """word . monomial with polynomial coefficients, cached."""
    if not word:
        return ((key, LaurentPoly.const(params.ring, 1)),)
    rest = dict(_word_on_key(params, word[1:], key))
    return tuple(_apply_letter_poly(params, word[0], rest).items())


def _xpart_on_key(params: AlgebraParams, a: tuple, key: Key) -> tuple:
    """X^a . monomial; shortcut when no exponent leaves E_m."""
    ka, kb, kw = key
    s = tuple(x + y for x, y in zip(a, ka))
    if params.m is None or all(x < params.m for x in s):
        return ((s, kb, kw), LaurentPoly.const(params.ring, 1)),
    word = tuple(monomial_word((a, (0,) * params.n, tuple(range(1, params.n + 1)))))
    return _word_on_key(params, word, key)


@functools.lru_cache(maxsize=None)
def _monomial_product(params: AlgebraParams, kx: Key, ky: Key) -> tuple:
    a, b, w = kx
    n = params.n
    tg = tuple(monomial_word(((0,) * n, b, w)))
    mid = _word_on_key(params, tg, ky)
    if not any(a):
        return mid
    out: dict = {}
    for k, c in mid:
        for k2, c2 in _xpart_on_key(params, a, k):
            _add(out, k2, c * c2)
    return tuple(out.items())


def multiply(x: CanonicalElement, y: CanonicalElement) -> CanonicalElement:
    """Product x*y expanded on the canonical basis."""
    x._check(y)
    params = x.params
    acc: dict = {}
    for kx, cx in x.terms.items():
        for ky, cy in y.terms.items():
            c0 = cx * cy
            for k, c in _monomial_product(params, kx, ky):
                term = c0 * c
                if k in acc:
                    acc[k] = acc[k] + term
                else:
                    acc[k] = term
    return CanonicalElement._raw(params, {k: v for k, v in acc.items() if not v.is_zero()})


def apply_letter(letter: Letter, y: CanonicalElement) -> CanonicalElement:
    """Left multiplication of y by a single generator letter."""
    params = y.params
    letter = _check_letter(params, letter)
    acc: dict = {}
    for ky, cy in y.terms.items():
        for k, c in _left_gen(params, letter, ky):
            term = cy * c
            acc[k] = acc[k] + term if k in acc else term
    return CanonicalElement._raw(params, {k: v for k, v in acc.items() if not v.is_zero()})


# ---------------------------------------------------------------------------
# distinguished elements


def make_generator(params: AlgebraParams, name: str, index: int = 1) -> CanonicalElement:
    """The generator t_j, g_i or X_1 as a single monomial."""
    n = params.n
    if name == "t":
        letter = ("t", index, 1)
    elif name == "g":
        letter = ("g", index, 1)
    elif name == "X":
        letter = ("X", index, 1)
    else:
        raise ValueError(f"unknown generator {name!r}")
    return apply_letter(letter, CanonicalElement.one(params))


def invert_generator(params: AlgebraParams, name: str, index: int = 1) -> CanonicalElement:
    """g_i^{-1} = g_i - (q-q^{-1}) e_i, or X_1^{-1}."""
    if name == "g":
        letter = ("g", index, -1)
    elif name == "X":
        letter = ("X", index, -1)
    else:
        raise ValueError(f"cannot invert generator {name!r}")
    return apply_letter(letter, CanonicalElement.one(params))


def e_idempotent(params: AlgebraParams, i: int) -> CanonicalElement:
    if not 1 <= i <= params.n - 1:
        raise ValueError(f"e_{i} out of range for n={params.n}")
    n = params.n
    d = params.d
    ident = tuple(range(1, n + 1))
    terms = {}
    for s in range(d):
        b = [0] * n
        b[i - 1] = s % d
        b[i] = (-s) % d
        terms[((0,) * n, tuple(b), ident)] = RatFunc.const(params.ring, Fraction(1, d))
    return CanonicalElement._raw(params, terms)


def word_to_element(params: AlgebraParams, word: Iterable[Letter]) -> CanonicalElement:
    """Product of the letters, left to right."""
    letters = [_check_letter(params, tuple(l)) for l in word]
    out = CanonicalElement.one(params)
    for letter in reversed(letters):
        out = apply_letter(letter, out)
    return out


def jm_elements(params: AlgebraParams) -> tuple[list[CanonicalElement], list[CanonicalElement]]:
    """(X_1..X_n, Xt_1..Xt_n) with X_{i+1} = g_i X_i g_i and Xt_{i+1} = g_i^{-1} Xt_i g_i."""
    x1 = make_generator(params, "X")
    xs = [x1]
    xts = [x1]
    for i in range(1, params.n):
        g = make_generator(params, "g", i)
        gi = invert_generator(params, "g", i)
        xs.append(multiply(multiply(g, xs[-1]), g))
        xts.append(multiply(multiply(gi, xts[-1]), g))
    return xs, xts


# ---------------------------------------------------------------------------
# homomorphisms


def _invert_letter(letter: Letter) -> Letter:
    kind, idx, e = letter
    return (kind, idx, -e)


def eta_involution(x: CanonicalElement) -> CanonicalElement:
    """Generators to their inverses, q -> q^-1, v_a -> v_a^-1."""
    params = x.params
    out = CanonicalElement.zero(params)
    for key, c in x.terms.items():
        word = [_invert_letter(l) for l in monomial_word(key)]
        img = word_to_element(params, word)
        out = out + img.scale(c.substitute_inverse())
    return out


def project_pi_H(x: CanonicalElement) -> CanonicalElement:
    """t_j -> 1, landing in Y(1, m, n) over the same coefficient field."""
    p = x.params
    target = AlgebraParams(1, p.m, p.n, p.field)
    acc: dict = {}
    for (a, b, w), c in x.terms.items():
        k = (a, (0,) * p.n, w)
        acc[k] = acc[k] + c if k in acc else c
    return CanonicalElement(target, acc)


def project_pi_Y(x: CanonicalElement) -> CanonicalElement:
    """X_1 -> v_1 (m finite) or 1 (m infinite); image spanned by t^b g_w."""
    params = x.params
    r = params.ring
    val = LaurentPoly.const(r, 1) if params.m is None else LaurentPoly.v(r, 1)
    out = CanonicalElement.zero(params)
    for key, c in x.terms.items():
        elem = CanonicalElement.one(params)
        scalar = RatFunc.from_poly(LaurentPoly.const(r, 1))
        for letter in reversed(monomial_word(key)):
            if letter[0] == "X":
                scalar = scalar * (RatFunc.from_poly(val) if letter[2] > 0 else RatFunc.from_poly(val).inverse())
            else:
                elem = apply_letter(letter, elem)
        out = out + elem.scale(scalar * c)
    return out


def change_field(x: CanonicalElement, params: AlgebraParams) -> CanonicalElement:
    """Same element viewed over a bigger cyclotomic coefficient field."""
    from .scalars import embed_ratfunc

    if (x.params.d, x.params.m, x.params.n) != (params.d, params.m, params.n):
        raise ValueError("change_field keeps d, m, n")
    return CanonicalElement(params, {k: embed_ratfunc(c, params.ring) for k, c in x.terms.items()})


# ---------------------------------------------------------------------------
# defining relations


def defining_relations(params: AlgebraParams) -> list[tuple[str, list, list]]:
    """Every defining relation as (name, lhs, rhs).

    Each side is a list of (coefficient, word); a relation holds in a
    representation of the algebra when both sides evaluate to the same thing.
    """
    n, d, r = params.n, params.d, params.ring
    one = RatFunc.const(r, 1)
    qq = RatFunc.from_poly(_qq(r))
    rels: list = []
    for j in range(1, n + 1):
        rels.append((f"t{j}^d", [(one, [("t", j, 1)] * d)], [(one, [])]))
        for k in range(j + 1, n + 1):
            rels.append((f"t{j}t{k}", [(one, [("t", j, 1), ("t", k, 1)])], [(one, [("t", k, 1), ("t", j, 1)])]))
    for i in range(1, n):
        for j in range(1, n + 1):
            sj = i + 1 if j == i else i if j == i + 1 else j
            rels.append((f"t{j}g{i}", [(one, [("t", j, 1), ("g", i, 1)])], [(one, [("g", i, 1), ("t", sj, 1)])]))
        rhs = [(one, [])]
        for s in range(d):
            rhs.append((qq * Fraction(1, d), [("t", i, s), ("t", i + 1, -s), ("g", i, 1)]))
        rels.append((f"g{i}^2", [(one, [("g", i, 1)] * 2)], rhs))
        if i + 1 < n:
            rels.append(
                (
                    f"braid{i}",
                    [(one, [("g", i, 1), ("g", i + 1, 1), ("g", i, 1)])],
                    [(one, [("g", i + 1, 1), ("g", i, 1), ("g", i + 1, 1)])],
                )
            )
        for k in range(i + 2, n):
            rels.append((f"g{i}g{k}", [(one, [("g", i, 1), ("g", k, 1)])], [(one, [("g", k, 1), ("g", i, 1)])]))
    x = ("X", 1, 1)
    if n >= 2:
        g1 = ("g", 1, 1)
        rels.append(("X1g1X1g1", [(one, [x, g1, x, g1])], [(one, [g1, x, g1, x])]))
    for i in range(2, n):
        rels.append((f"X1g{i}", [(one, [x, ("g", i, 1)])], [(one, [("g", i, 1), x])]))
    for j in range(1, n + 1):
        rels.append((f"X1t{j}", [(one, [x, ("t", j, 1)])], [(one, [("t", j, 1), x])]))
    rels.append(("X1X1^-1", [(one, [x, ("X", 1, -1)])], [(one, [])]))
    if params.m is not None:
        lhs = [(one, [x] * params.m)]
        lhs += [(RatFunc.from_poly(g), [x] * j) for j, g in enumerate(params.gamma) if not g.is_zero()]
        rels.append(("X1-poly", lhs, []))
    return rels


def check_relations(params: AlgebraParams) -> dict[str, bool]:
    """Evaluate every defining relation on the canonical basis."""
    out = {}
    for name, lhs, rhs in defining_relations(params):
        diff = CanonicalElement.zero(params)
        for c, w in lhs:
            diff = diff + word_to_element(params, w).scale(c)
        for c, w in rhs:
            diff = diff - word_to_element(params, w).scale(c)
        out[name] = diff.is_zero()
    return out
