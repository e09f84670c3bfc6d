"""Exact scalars: the cyclotomic field Q(zeta_d), Laurent polynomials in
q, v_1..v_m over it, and fractions of those.

Laurent polynomials are stored flat: a term key is the exponent vector
(e_q, e_v1, ..., e_vm) followed by the power j of zeta_d, with
0 <= j < phi(d), and the value is a rational.  This keeps the inner loops
free of nested objects.

Fractions never compute a polynomial gcd.  The denominator is kept as a
product of normalized factors (no monomial content, monic in lex order),
so sums only need the factorwise lcm and equality is decided by
cross-multiplication.
"""

from __future__ import annotations

import functools
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import sympy

__all__ = [
    "CycloNum",
    "LaurentPoly",
    "RatFunc",
    "Ring",
    "ScalarParseError",
    "SpecializationPole",
    "cyclo_rank",
    "embed_poly",
    "embed_ratfunc",
    "generic_points",
    "parse_scalar",
    "q_minus_qinv",
    "ring",
    "ratfunc_equal",
    "specialize",
    "specialize_generic",
]


class SpecializationPole(ArithmeticError):
    """The denominator vanishes at the requested point."""


class ScalarParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


# ---------------------------------------------------------------------------
# cyclotomic field


class _Cyclo:
    """Reduction data for Q(zeta_d) = Q[x]/Phi_d."""

    def __init__(self, d: int):
        x = sympy.Symbol("x")
        coeffs = sympy.Poly(sympy.cyclotomic_poly(d, x), x).all_coeffs()
        phi = len(coeffs) - 1
        # x^phi = -sum_{i<phi} low[i] x^i, leading coefficient is 1
        low = [Fraction(int(c)) for c in reversed(coeffs)][:phi]
        red = [tuple(Fraction(int(i == k)) for i in range(phi)) for k in range(phi)]
        top = max(2 * phi - 1, d)
        while len(red) < top:
            prev = red[-1]
            carry = prev[phi - 1]
            nxt = [Fraction(0)] + list(prev[: phi - 1])
            if carry:
                for i in range(phi):
                    nxt[i] -= carry * low[i]
            red.append(tuple(nxt))
        self.d = d
        self.phi = phi
        self.red = red
        # sparse form of x^k for k >= phi, used by polynomial products
        self.red_sparse = [
            tuple((i, c) for i, c in enumerate(vec) if c) for vec in red
        ]


@functools.lru_cache(maxsize=None)
def _cyclo(d: int) -> _Cyclo:
    if d < 1:
        raise ValueError("root order d must be positive")
    return _Cyclo(d)


def _solve(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination over Q for a square nonsingular system."""
    n = len(rhs)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("division by zero in cyclotomic field")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [vr - f * vc for vr, vc in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


class CycloNum:
    """Element of Q(zeta_d) as a coefficient vector in 1, zeta, .., zeta^(phi-1)."""

    __slots__ = ("d", "c", "_hash")

    def __init__(self, d: int, coeffs: Iterable = ()):
        f = _cyclo(d)
        c = [Fraction(0)] * f.phi
        for k, v in enumerate(coeffs):
            v = Fraction(v)
            if not v:
                continue
            if k < f.phi:
                c[k] += v
            else:
                for i, r in f.red_sparse[k % d if k >= len(f.red) else k]:
                    c[i] += v * r
        self.d = d
        self.c = tuple(c)
        self._hash = None

    @classmethod
    def _raw(cls, d: int, c: tuple) -> "CycloNum":
        obj = object.__new__(cls)
        obj.d = d
        obj.c = c
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, d: int, value) -> "CycloNum":
        phi = _cyclo(d).phi
        return cls._raw(d, (Fraction(value),) + (Fraction(0),) * (phi - 1))

    @classmethod
    def zeta(cls, d: int, k: int = 1) -> "CycloNum":
        f = _cyclo(d)
        return cls._raw(d, f.red[k % d])

    @property
    def phi(self) -> int:
        return len(self.c)

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def __bool__(self) -> bool:
        return any(self.c)

    def _coerce(self, other) -> "CycloNum":
        if isinstance(other, CycloNum):
            if other.d != self.d:
                raise ValueError("cyclotomic orders differ")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloNum.rational(self.d, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycloNum._raw(self.d, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return CycloNum._raw(self.d, tuple(-a for a in self.c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycloNum._raw(self.d, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        f = _cyclo(self.d)
        phi = f.phi
        if phi == 1:
            return CycloNum._raw(self.d, (self.c[0] * o.c[0],))
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    if b:
                        prod[i + j] += a * b
        out = prod[:phi]
        for k in range(phi, 2 * phi - 1):
            v = prod[k]
            if v:
                for i, r in f.red_sparse[k]:
                    out[i] += v * r
        return CycloNum._raw(self.d, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "CycloNum":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        phi = self.phi
        if phi == 1:
            return CycloNum._raw(self.d, (1 / self.c[0],))
        # column k of the multiplication matrix is self * zeta^k
        cols = []
        for k in range(phi):
            cols.append((self * CycloNum.zeta(self.d, k)).c)
        mat = [[cols[k][i] for k in range(phi)] for i in range(phi)]
        rhs = [Fraction(int(i == 0)) for i in range(phi)]
        return CycloNum._raw(self.d, tuple(_solve(mat, rhs)))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = CycloNum.rational(self.d, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, CycloNum):
            return self.d == other.d and self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.c[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.d, self.c)) if not self.is_rational() else hash(self.c[0])
        return self._hash

    def to_complex(self) -> complex:
        import cmath

        z = cmath.exp(2j * cmath.pi / self.d)
        return sum(float(a) * z**k for k, a in enumerate(self.c))

    def __str__(self) -> str:
        parts = []
        for k, a in enumerate(self.c):
            if not a:
                continue
            if k == 0:
                parts.append(str(a))
            elif a == 1:
                parts.append(f"z{{{self.d}}}^{{{k}}}")
            elif a == -1:
                parts.append(f"-z{{{self.d}}}^{{{k}}}")
            else:
                parts.append(f"{a}*z{{{self.d}}}^{{{k}}}")
        if not parts:
            return "0"
        text = " + ".join(parts).replace("+ -", "- ")
        return text if len(parts) == 1 else f"({text})"

    def __repr__(self) -> str:
        return f"CycloNum({self.d}, {str(self)})"


# ---------------------------------------------------------------------------
# Laurent polynomials


class Ring:
    """Variable context: zeta_d coefficients, q, and v_1..v_m (none for m=inf)."""

    __slots__ = ("d", "m", "nv", "phi")

    def __init__(self, d: int, m: int | None):
        self.d = d
        self.m = m
        self.nv = 1 + (m or 0)
        self.phi = _cyclo(d).phi

    def __eq__(self, other):
        return isinstance(other, Ring) and self.d == other.d and self.m == other.m

    def __hash__(self):
        return hash((self.d, self.m))

    def __repr__(self):
        return f"Ring(d={self.d}, m={'inf' if self.m is None else self.m})"

    def var_names(self) -> list[str]:
        return ["q"] + [f"v{i}" for i in range(1, (self.m or 0) + 1)]


@functools.lru_cache(maxsize=None)
def _ring(d: int, m: int | None) -> Ring:
    return Ring(d, m)


def _poly_mul(ring: Ring, a: dict, b: dict) -> dict:
    out: dict = {}
    nv = ring.nv
    phi = ring.phi
    if phi == 1:
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                k = k[:nv] + (0,)
                v = out.get(k, 0) + ca * cb
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return out
    red = _cyclo(ring.d).red_sparse
    for ka, ca in a.items():
        ja = ka[nv]
        for kb, cb in b.items():
            e = tuple(x + y for x, y in zip(ka[:nv], kb[:nv]))
            j = ja + kb[nv]
            c = ca * cb
            if j < phi:
                k = e + (j,)
                v = out.get(k, 0) + c
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
            else:
                for i, r in red[j]:
                    k = e + (i,)
                    v = out.get(k, 0) + c * r
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
    return out


class LaurentPoly:
    """Sparse Laurent polynomial over Q(zeta_d) in q, v_1..v_m."""

    __slots__ = ("ring", "t", "_hash")

    def __init__(self, ring: Ring, terms: Mapping | None = None):
        self.ring = ring
        self.t = {k: v for k, v in (terms or {}).items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, ring: Ring, t: dict) -> "LaurentPoly":
        obj = object.__new__(cls)
        obj.ring = ring
        obj.t = t
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def zero(cls, ring: Ring) -> "LaurentPoly":
        return cls._raw(ring, {})

    @classmethod
    def const(cls, ring: Ring, value) -> "LaurentPoly":
        if isinstance(value, CycloNum):
            if value.d != ring.d:
                raise ValueError("cyclotomic orders differ")
            z = (0,) * ring.nv
            return cls._raw(ring, {z + (j,): c for j, c in enumerate(value.c) if c})
        value = Fraction(value)
        if not value:
            return cls.zero(ring)
        return cls._raw(ring, {(0,) * ring.nv + (0,): value})

    @classmethod
    def monomial(cls, ring: Ring, exps: Sequence[int], coeff=1) -> "LaurentPoly":
        if len(exps) != ring.nv:
            raise ValueError("exponent vector has the wrong length")
        return cls.const(ring, coeff) * cls._raw(ring, {tuple(exps) + (0,): Fraction(1)})

    @classmethod
    def q(cls, ring: Ring, power: int = 1) -> "LaurentPoly":
        e = [0] * ring.nv
        e[0] = power
        return cls._raw(ring, {tuple(e) + (0,): Fraction(1)})

    @classmethod
    def v(cls, ring: Ring, index: int, power: int = 1) -> "LaurentPoly":
        if ring.m is None or not 1 <= index <= ring.m:
            raise ValueError(f"no parameter v{index} in {ring}")
        e = [0] * ring.nv
        e[index] = power
        return cls._raw(ring, {tuple(e) + (0,): Fraction(1)})

    # queries
    def is_zero(self) -> bool:
        return not self.t

    def __bool__(self) -> bool:
        return bool(self.t)

    @property
    def terms(self) -> dict:
        """Exponent vector -> CycloNum coefficient."""
        out: dict = {}
        nv = self.ring.nv
        for k, c in self.t.items():
            out.setdefault(k[:nv], [Fraction(0)] * self.ring.phi)[k[nv]] += c
        return {e: CycloNum(self.ring.d, v) for e, v in sorted(out.items())}

    def is_monomial(self) -> bool:
        """Single exponent vector (with any nonzero cyclotomic coefficient)."""
        nv = self.ring.nv
        return len({k[:nv] for k in self.t}) == 1

    def constant_value(self) -> CycloNum | None:
        if not self.t:
            return CycloNum.rational(self.ring.d, 0)
        nv = self.ring.nv
        if any(any(k[:nv]) for k in self.t):
            return None
        return self.terms[(0,) * nv]

    def _check(self, other: "LaurentPoly") -> None:
        if self.ring != other.ring:
            raise ValueError(f"mismatched variable context: {self.ring} vs {other.ring}")

    def _lift(self, other):
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, CycloNum)):
            return LaurentPoly.const(self.ring, other)
        return NotImplemented

    # arithmetic
    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        t = dict(self.t)
        for k, c in o.t.items():
            v = t.get(k, 0) + c
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return LaurentPoly._raw(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.ring, {k: -c for k, c in self.t.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPoly.zero(self.ring)
            return LaurentPoly._raw(self.ring, {k: c * other for k, c in self.t.items()})
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return LaurentPoly._raw(self.ring, _poly_mul(self.ring, self.t, o.t))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.t) != 1:
                raise ValueError("negative power of a non-monomial Laurent polynomial")
            ((key, c),) = self.t.items()
            if key[-1] != 0:
                raise ValueError("negative power of a non-rational monomial")
            nv = self.ring.nv
            return LaurentPoly._raw(
                self.ring, {tuple(e * k for e in key[:nv]) + (0,): (1 / c) ** (-k)}
            )
        out = LaurentPoly.const(self.ring, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.ring == other.ring and self.t == other.t
        if isinstance(other, (int, Fraction, CycloNum)):
            return self.t == LaurentPoly.const(self.ring, other).t
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.t.items()))
        return self._hash

    def sort_key(self) -> tuple:
        return tuple(sorted(self.t.items()))

    def substitute_inverse(self) -> "LaurentPoly":
        """q -> q^-1 and v_a -> v_a^-1."""
        nv = self.ring.nv
        return LaurentPoly._raw(
            self.ring, {tuple(-e for e in k[:nv]) + (k[nv],): c for k, c in self.t.items()}
        )

    def scale_cyclo(self, c: CycloNum) -> "LaurentPoly":
        return self * LaurentPoly.const(self.ring, c)

    def evaluate(self, point: Sequence[Fraction]) -> CycloNum:
        """Value at q=point[0], v_a=point[a]."""
        nv = self.ring.nv
        acc = [Fraction(0)] * self.ring.phi
        for k, c in self.t.items():
            val = c
            for e, x in zip(k[:nv], point):
                if e:
                    if not x and e < 0:
                        raise SpecializationPole("specialization pole")
                    val *= Fraction(x) ** e
            acc[k[nv]] += val
        return CycloNum._raw(self.ring.d, tuple(acc))

    def leading(self) -> tuple[tuple, CycloNum]:
        """Lex-largest exponent vector and its cyclotomic coefficient."""
        nv = self.ring.nv
        lead = max(k[:nv] for k in self.t)
        vec = [Fraction(0)] * self.ring.phi
        for k, c in self.t.items():
            if k[:nv] == lead:
                vec[k[nv]] += c
        return lead, CycloNum._raw(self.ring.d, tuple(vec))

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        nv = self.ring.nv
        return LaurentPoly._raw(
            self.ring,
            {tuple(a + b for a, b in zip(k[:nv], exps)) + (k[nv],): c for k, c in self.t.items()},
        )

    def to_text(self) -> str:
        if not self.t:
            return "0"
        names = self.ring.var_names()
        parts = []
        for exps, coeff in self.terms.items():
            mono = []
            for name, e in zip(names, exps):
                if e == 1:
                    mono.append(name)
                elif e:
                    mono.append(f"{name}^{e}")
            cs = str(coeff)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append("*".join(mono))
            elif cs == "-1":
                parts.append("-" + "*".join(mono))
            else:
                parts.append(cs + "*" + "*".join(mono))
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_text()})"


def _normalize_factor(p: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Split p = unit * f with f free of monomial content and monic.

    Returns (unit, f); f is None-like (constant 1) when p is itself a unit.
    """
    nv = p.ring.nv
    mins = [min(k[i] for k in p.t) for i in range(nv)]
    shifted = p.shift([-x for x in mins])
    exps, lc = shifted.leading()
    unit = LaurentPoly.monomial(p.ring, mins, lc)
    if shifted.is_monomial():
        return unit, LaurentPoly.const(p.ring, 1)
    f = shifted.scale_cyclo(lc.inverse())
    return unit, f


def _factor_key(f: LaurentPoly) -> tuple:
    return (len(f.t), f.sort_key())


class RatFunc:
    """num / den with den kept as a product of normalized factors.

    Units of the Laurent ring (nonzero constants times monomials) are always
    folded into the numerator, so den is monic with no monomial content.
    """

    __slots__ = ("num", "fac", "_den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None):
        if den is None:
            self.num = num
            self.fac = ()
            self._den = None
            return
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        unit, f = _normalize_factor(den)
        self.num = num * _unit_inverse(unit)
        self.fac = () if f == 1 else ((f, 1),)
        self._den = None
        if self.num.is_zero():
            self.fac = ()

    @classmethod
    def _raw(cls, num: LaurentPoly, fac: tuple) -> "RatFunc":
        obj = object.__new__(cls)
        obj.num = num
        obj.fac = fac if num.t else ()
        obj._den = None
        return obj

    @classmethod
    def const(cls, ring: Ring, value) -> "RatFunc":
        return cls._raw(LaurentPoly.const(ring, value), ())

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "RatFunc":
        return cls._raw(p, ())

    @property
    def ring(self) -> Ring:
        return self.num.ring

    @property
    def den(self) -> LaurentPoly:
        if self._den is None:
            out = LaurentPoly.const(self.ring, 1)
            for f, e in self.fac:
                out = out * f**e
            self._den = out
        return self._den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_poly(self) -> bool:
        return not self.fac

    def _lift(self, other):
        if isinstance(other, RatFunc):
            self.num._check(other.num)
            return other
        if isinstance(other, LaurentPoly):
            self.num._check(other)
            return RatFunc._raw(other, ())
        if isinstance(other, (int, Fraction, CycloNum)):
            return RatFunc._raw(LaurentPoly.const(self.ring, other), ())
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if not o.num.t:
            return self
        if not self.num.t:
            return o
        if self.fac == o.fac:
            return RatFunc._raw(self.num + o.num, self.fac)
        lcm, sa, so = _lcm(self.fac, o.fac)
        return RatFunc._raw(self.num * sa + o.num * so, lcm)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.fac)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFunc._raw(self.num * other, self.fac)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if not self.num.t or not o.num.t:
            return RatFunc._raw(LaurentPoly.zero(self.ring), ())
        if not o.fac:
            return RatFunc._raw(self.num * o.num, self.fac)
        if not self.fac:
            return RatFunc._raw(self.num * o.num, o.fac)
        return RatFunc._raw(self.num * o.num, _merge(self.fac, o.fac))

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverting zero rational function")
        unit, f = _normalize_factor(self.num)
        num = self.den * _unit_inverse(unit)
        fac = () if f == 1 else ((f, 1),)
        return RatFunc._raw(num, fac)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = RatFunc.const(self.ring, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (RatFunc, LaurentPoly, int, Fraction, CycloNum)):
            o = self._lift(other)
            return ratfunc_equal(self, o)
        return NotImplemented

    def __hash__(self):
        # equal fractions may have different representations; only polynomials
        # hash by value
        if not self.fac:
            return hash(self.num)
        return hash(("ratfunc", len(self.fac)))

    def substitute_inverse(self) -> "RatFunc":
        """q -> q^-1, v_a -> v_a^-1 (the coefficient part of eta)."""
        out = RatFunc._raw(self.num.substitute_inverse(), ())
        for f, e in self.fac:
            out = out * RatFunc.from_poly(f.substitute_inverse()).inverse() ** e
        return out

    def constant_value(self) -> CycloNum | None:
        if self.fac:
            return None
        return self.num.constant_value()

    def reduced(self) -> "RatFunc":
        """Cancel denominator factors that divide the numerator exactly.

        Only whole stored factors are tried; this is a cosmetic step for
        printing, equality never depends on it.
        """
        num = self.num
        fac = []
        for f, e in self.fac:
            while e:
                quo = _exact_div(num, f)
                if quo is None:
                    break
                num, e = quo, e - 1
            if e:
                fac.append((f, e))
        return RatFunc._raw(num, tuple(fac))

    def to_text(self) -> str:
        red = self.reduced()
        if not red.fac:
            return red.num.to_text()
        return f"({red.num.to_text()})/({red.den.to_text()})"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"RatFunc({self.to_text()})"


def _exact_div(p: LaurentPoly, f: LaurentPoly) -> LaurentPoly | None:
    """p / f when f divides p in the Laurent ring, else None.

    Lex order is a group order on exponent vectors, so leading terms
    multiply; the quotient's terms lie lex-between lead(p)-lead(f) and
    trail(p)-trail(f).  A step cap guards the non-divisible case.
    """
    r = p.ring
    nv = r.nv
    if p.is_zero():
        return p
    lead_f, lc_f = f.leading()
    inv = lc_f.inverse()
    trail_p = min(k[:nv] for k in p.t)
    trail_f = min(k[:nv] for k in f.t)
    floor = tuple(a - b for a, b in zip(trail_p, trail_f))
    quo = LaurentPoly.zero(r)
    rem = p
    for _ in range(4 * len(p.t) * max(1, len(f.t)) + 64):
        if rem.is_zero():
            return quo
        lead_r, lc_r = rem.leading()
        exps = tuple(a - b for a, b in zip(lead_r, lead_f))
        if exps < floor:
            return None
        term = LaurentPoly.monomial(r, exps, lc_r * inv)
        quo = quo + term
        rem = rem - term * f
    return None


def _unit_inverse(unit: LaurentPoly) -> LaurentPoly:
    exps, c = unit.leading()
    return LaurentPoly.monomial(unit.ring, [-e for e in exps], c.inverse())


def _merge(a: tuple, b: tuple) -> tuple:
    d: dict = {}
    keys: dict = {}
    for f, e in a + b:
        k = _factor_key(f)
        keys[k] = f
        d[k] = d.get(k, 0) + e
    return tuple((keys[k], d[k]) for k in sorted(d))


def _lcm(a: tuple, b: tuple) -> tuple[tuple, LaurentPoly, LaurentPoly]:
    da = {_factor_key(f): (f, e) for f, e in a}
    db = {_factor_key(f): (f, e) for f, e in b}
    keys = sorted(set(da) | set(db))
    ring = (a or b)[0][0].ring
    lcm = []
    sa = LaurentPoly.const(ring, 1)
    sb = LaurentPoly.const(ring, 1)
    for k in keys:
        f, ea = da.get(k, (None, 0))
        g, eb = db.get(k, (None, 0))
        f = f if f is not None else g
        e = max(ea, eb)
        lcm.append((f, e))
        if e > ea:
            sa = sa * f ** (e - ea)
        if e > eb:
            sb = sb * f ** (e - eb)
    return tuple(lcm), sa, sb


def ratfunc_equal(a: RatFunc, b: RatFunc) -> bool:
    """a.num * b.den == b.num * a.den, computed over the factorwise lcm."""
    a.num._check(b.num)
    if a.fac == b.fac:
        return a.num == b.num
    if a.num.is_zero() or b.num.is_zero():
        return a.num.is_zero() and b.num.is_zero()
    _, sa, sb = _lcm(a.fac, b.fac)
    return a.num * sa == b.num * sb


# ---------------------------------------------------------------------------
# specialization


def generic_points(m: int | None, count: int = 8) -> list[tuple[Fraction, ...]]:
    """Deterministic list of points: q=2, v=(3,5,7,...) first, then shifted primes."""
    primes = list(sympy.primerange(2, 400))
    nv = 1 + (m or 0)
    pts = []
    for shift in range(count):
        pts.append(tuple(Fraction(p) for p in primes[shift * nv : shift * nv + nv]))
    return pts


def specialize(x: RatFunc | LaurentPoly, point: Sequence) -> CycloNum:
    """Evaluate at q=point[0], v_a=point[a] exactly in Q(zeta_d)."""
    point = [Fraction(p) for p in point]
    if isinstance(x, LaurentPoly):
        return x.evaluate(point)
    num = x.num.evaluate(point)
    den = CycloNum.rational(x.ring.d, 1)
    for f, e in x.fac:
        v = f.evaluate(point)
        if v.is_zero():
            raise SpecializationPole("specialization pole")
        den = den * v**e
    return num / den


def specialize_generic(x: RatFunc, points: Iterable | None = None) -> tuple[CycloNum, tuple]:
    """Specialize at the first point of the generic list that is not a pole."""
    for pt in points or generic_points(x.ring.m):
        try:
            return specialize(x, pt), pt
        except SpecializationPole:
            continue
    raise SpecializationPole("specialization pole at every generic point tried")


# ---------------------------------------------------------------------------
# text grammar

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<zeta>z\{(?P<zd>\d+)\}(?:\^\{(?P<zk>-?\d+)\})?)"
    r"|(?P<var>q|v\d+)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ScalarParseError(f"unexpected character {text[pos]!r}", pos)
        start = mt.start(mt.lastgroup) if mt.lastgroup else pos
        if mt.group("int") is not None:
            out.append(("int", int(mt.group("int")), start))
        elif mt.group("zeta") is not None:
            k = int(mt.group("zk")) if mt.group("zk") is not None else 1
            out.append(("zeta", (int(mt.group("zd")), k), mt.start("zeta")))
        elif mt.group("var") is not None:
            out.append(("var", mt.group("var"), start))
        else:
            out.append(("op", mt.group("op"), mt.start("op")))
        pos = mt.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op: str):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise ScalarParseError(f"expected {op!r}", tok[2])

    def parse(self) -> RatFunc:
        val = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ScalarParseError("unexpected trailing input", tok[2])
        return val

    def expr(self) -> RatFunc:
        val = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self) -> RatFunc:
        val = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                val = val * rhs
            else:
                if rhs.is_zero():
                    raise ScalarParseError("division by zero", tok[2])
                val = val / rhs
        return val

    def unary(self) -> RatFunc:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            v = self.unary()
            return -v if tok[1] == "-" else v
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            sign = 1
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                sign = -1 if tok[1] == "-" else 1
            tok = self.take()
            if tok[0] == "op" and tok[1] == "(":
                inner = self.expr()
                self.expect(")")
                cv = inner.constant_value()
                if cv is None or not cv.is_rational() or cv.c[0].denominator != 1:
                    raise ScalarParseError("exponent must be an integer", tok[2])
                k = int(cv.c[0])
            elif tok[0] == "int":
                k = tok[1]
            else:
                raise ScalarParseError("expected integer exponent", tok[2])
            k *= sign
            if k < 0 and base.is_zero():
                raise ScalarParseError("negative power of zero", tok[2])
            return base**k
        return base

    def atom(self) -> RatFunc:
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            return RatFunc.const(self.ring, val)
        if kind == "zeta":
            dd, k = val
            if dd < 1 or self.ring.d % dd:
                raise ScalarParseError(f"z{{{dd}}} is not in Q(zeta_{self.ring.d})", pos)
            return RatFunc.const(self.ring, CycloNum.zeta(self.ring.d, k * (self.ring.d // dd)))
        if kind == "var":
            if val == "q":
                return RatFunc.from_poly(LaurentPoly.q(self.ring))
            idx = int(val[1:])
            if self.ring.m is None or not 1 <= idx <= self.ring.m:
                raise ScalarParseError(f"unknown parameter {val}", pos)
            return RatFunc.from_poly(LaurentPoly.v(self.ring, idx))
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ScalarParseError("unexpected token", pos)


def parse_scalar(text: str, ring: Ring) -> RatFunc:
    """Parse the scalar text grammar into a RatFunc over ring."""
    return _Parser(str(text), ring).parse()


def embed_poly(p: LaurentPoly, target: Ring) -> LaurentPoly:
    """View p over Q(zeta_D) for a multiple D of its root order."""
    src = p.ring
    if src == target:
        return p
    if src.m != target.m or target.d % src.d:
        raise ValueError(f"cannot embed {src} into {target}")
    step = target.d // src.d
    nv = src.nv
    red = _cyclo(target.d).red_sparse
    out: dict = {}
    for k, c in p.t.items():
        for i, r in red[(k[nv] * step) % target.d]:
            key = k[:nv] + (i,)
            v = out.get(key, 0) + c * r
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return LaurentPoly._raw(target, out)


def embed_ratfunc(x: RatFunc, target: Ring) -> RatFunc:
    out = RatFunc.from_poly(embed_poly(x.num, target))
    for f, e in x.fac:
        out = out / RatFunc.from_poly(embed_poly(f, target)) ** e
    return out


def ring(d: int, m: int | None) -> Ring:
    return _ring(d, m)


def q_minus_qinv(r: Ring) -> LaurentPoly:
    return LaurentPoly.q(r) - LaurentPoly.q(r, -1)


def cyclo_rank(rows: Sequence[Sequence[CycloNum]]) -> int:
    """Exact rank of a matrix over Q(zeta_d) by Gaussian elimination."""
    work = [list(r) for r in rows if any(not v.is_zero() for v in r)]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(work)) if not work[i][col].is_zero()), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = work[rank][col].inverse()
        prow = [v * inv for v in work[rank]]
        work[rank] = prow
        for i in range(len(work)):
            if i != rank and not work[i][col].is_zero():
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], prow)]
        rank += 1
        if rank == len(work):
            break
    return rank
