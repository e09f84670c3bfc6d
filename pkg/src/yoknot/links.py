"""Framed affine braid words, Markov moves, the affine E-system and the
invariants Gamma / Gamma' of framed links in the solid torus.

A word is a sequence of letters (kind, index, exponent) with kind "s0"
(the loop generator sigma_0, index 0), "s" (sigma_i) or "t" (framing t_j).
Under delta_n the letters map to X_1, g_i and t_j.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import AlgebraParams, canonical_basis, monomial_word
from .scalars import CycloNum, LaurentPoly, RatFunc, q_minus_qinv, ratfunc_equal
from .traces import TraceParams, markov_trace, word_to_nested

__all__ = [
    "BraidParseError",
    "ESystemSolution",
    "FramedAffineBraidWord",
    "InvariantError",
    "InvariantValue",
    "all_subsets",
    "apply_move",
    "can_destabilize",
    "character_eigen_check",
    "check_affine_E_condition",
    "closure_summary",
    "delta",
    "epsilon_sums",
    "esystem_extend",
    "esystem_linear_check",
    "esystem_solve",
    "esystem_trace_check",
    "gamma_invariant",
    "omega",
]

KINDS = ("s0", "s", "t")


class BraidParseError(ValueError):
    def __init__(self, message: str, position):
        super().__init__(f"{message} (at {position})")
        self.message = message
        self.position = position


class InvariantError(ArithmeticError):
    """The invariant is not defined for these parameters."""


@dataclass(frozen=True)
class FramedAffineBraidWord:
    n: int
    letters: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise BraidParseError("a braid needs at least one strand", "n")
        norm = []
        for pos, letter in enumerate(self.letters):
            try:
                kind, idx, e = letter
            except (TypeError, ValueError):
                raise BraidParseError(f"malformed letter {letter!r}", pos) from None
            if kind not in KINDS or not isinstance(idx, int) or not isinstance(e, int):
                raise BraidParseError(f"malformed letter {letter!r}", pos)
            if kind == "s0" and idx != 0:
                raise BraidParseError("sigma_0 takes index 0", pos)
            if kind == "s" and not 1 <= idx <= self.n - 1:
                raise BraidParseError(f"sigma_{idx} out of range for n={self.n}", pos)
            if kind == "t" and not 1 <= idx <= self.n:
                raise BraidParseError(f"t_{idx} out of range for n={self.n}", pos)
            norm.append((kind, idx, e))
        object.__setattr__(self, "letters", tuple(norm))

    def inverse(self) -> "FramedAffineBraidWord":
        return FramedAffineBraidWord(self.n, tuple((k, i, -e) for k, i, e in reversed(self.letters)))

    def __mul__(self, other: "FramedAffineBraidWord") -> "FramedAffineBraidWord":
        if self.n != other.n:
            raise ValueError("braids on different strand counts")
        return FramedAffineBraidWord(self.n, self.letters + other.letters)

    def to_json(self) -> dict:
        word = []
        for kind, idx, e in self.letters:
            entry = {"g": kind}
            if kind != "s0":
                entry["i"] = idx
            entry["e"] = e
            word.append(entry)
        return {"n": self.n, "word": word}

    @classmethod
    def from_json(cls, data) -> "FramedAffineBraidWord":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise BraidParseError(exc.msg, exc.pos) from None
        if not isinstance(data, dict) or not isinstance(data.get("n"), int):
            raise BraidParseError("expected an object with integer 'n'", "n")
        word = data.get("word", [])
        if not isinstance(word, list):
            raise BraidParseError("'word' must be a list", "word")
        letters = []
        for pos, entry in enumerate(word):
            if not isinstance(entry, dict) or entry.get("g") not in KINDS:
                raise BraidParseError("letter needs 'g' in s0/s/t", f"word[{pos}]")
            e = entry.get("e", 1)
            idx = entry.get("i", 0)
            if not isinstance(e, int) or isinstance(e, bool) or not isinstance(idx, int) or isinstance(idx, bool):
                raise BraidParseError("'i' and 'e' must be integers", f"word[{pos}]")
            letters.append((entry["g"], idx, e))
        try:
            return cls(data["n"], tuple(letters))
        except BraidParseError as exc:
            raise BraidParseError(exc.message, f"word[{exc.position}]") from None


def epsilon_sums(w: FramedAffineBraidWord) -> tuple[int, int]:
    """(epsilon, epsilon'): sigma_i exponent sum without and with sigma_0."""
    eps = sum(e for k, _, e in w.letters if k == "s")
    return eps, eps + sum(e for k, _, e in w.letters if k == "s0")


def delta(w: FramedAffineBraidWord) -> list[tuple]:
    """Algebra letters of delta_n(w)."""
    out = []
    for kind, idx, e in w.letters:
        if kind == "t":
            out.append(("t", idx, e))
        else:
            letter = ("X", 1, 1 if e > 0 else -1) if kind == "s0" else ("g", idx, 1 if e > 0 else -1)
            out.extend([letter] * abs(e))
    return out


# ---------------------------------------------------------------------------
# moves


def apply_move(w: FramedAffineBraidWord, move: str, conjugator: FramedAffineBraidWord | None = None) -> FramedAffineBraidWord:
    """conjugate (by conjugator), stabilize_pos, stabilize_neg or destabilize."""
    if move == "conjugate":
        if conjugator is None or conjugator.n != w.n:
            raise ValueError("conjugation needs a braid on the same strands")
        return conjugator * w * conjugator.inverse()
    if move in ("stabilize_pos", "stabilize_neg"):
        e = 1 if move == "stabilize_pos" else -1
        return FramedAffineBraidWord(w.n + 1, w.letters + (("s", w.n, e),))
    if move == "destabilize":
        n = w.n - 1
        if n < 1 or not w.letters:
            raise ValueError("nothing to destabilize")
        kind, idx, e = w.letters[-1]
        if kind != "s" or idx != n or abs(e) != 1:
            raise ValueError(f"destabilization needs a trailing sigma_{n}^(+-1)")
        rest = w.letters[:-1]
        if any((k == "s" and i == n) or (k == "t" and i == n + 1) for k, i, _ in rest):
            raise ValueError(f"strand {n + 1} is used before the trailing sigma_{n}")
        return FramedAffineBraidWord(n, rest)
    raise ValueError(f"unknown move {move!r}")


def can_destabilize(w: FramedAffineBraidWord) -> bool:
    try:
        apply_move(w, "destabilize")
    except ValueError:
        return False
    return True


def closure_summary(w: FramedAffineBraidWord, d: int) -> list[tuple[tuple[int, ...], int]]:
    """Components of the closure (as strand cycles) with total framing mod d."""
    owner = list(range(1, w.n + 1))  # owner[pos-1] = strand starting at pos
    framing = [0] * (w.n + 1)
    for kind, idx, e in w.letters:
        if kind == "s" and e % 2:
            owner[idx - 1], owner[idx] = owner[idx], owner[idx - 1]
        elif kind == "t":
            framing[owner[idx - 1]] += e
    end = {strand: pos for pos, strand in enumerate(owner, 1)}
    seen = set()
    out = []
    for start in range(1, w.n + 1):
        if start in seen:
            continue
        cyc = []
        cur = start
        while cur not in seen:
            seen.add(cur)
            cyc.append(cur)
            cur = end[cur]
        out.append((tuple(sorted(cyc)), sum(framing[s] for s in cyc) % d))
    return sorted(out)


# ---------------------------------------------------------------------------
# E-system


@dataclass(frozen=True)
class ESystemSolution:
    d: int
    S: tuple
    x0: tuple
    E: Fraction


def esystem_solve(d: int, S: Iterable[int]) -> ESystemSolution:
    """x_{0,j} = (1/|S|) sum_{i in S} zeta_d^{ij}, E = 1/|S|."""
    S = tuple(sorted(set(int(i) % d for i in S)))
    if not S:
        raise ValueError("S must be non-empty")
    x0 = []
    for j in range(d):
        acc = CycloNum.rational(d, 0)
        for i in S:
            acc = acc + CycloNum.zeta(d, i * j)
        x0.append(acc * Fraction(1, len(S)))
    return ESystemSolution(d, S, tuple(x0), Fraction(1, len(S)))


def all_subsets(d: int) -> list[tuple[int, ...]]:
    out = []
    for mask in range(1, 2**d):
        out.append(tuple(i for i in range(d) if mask >> i & 1))
    return sorted(out, key=lambda s: (len(s), s))


def esystem_extend(
    sol: ESystemSolution,
    params: AlgebraParams,
    z,
    lam: Mapping[int, Mapping[int, object]] | None = None,
) -> TraceParams:
    """TraceParams with x(0,.) from sol and x(a,.) = sum_{i in S} lam[a][i] (zeta^{ib})_b.

    Exponents a without an entry in ``lam`` get the zero vector, which lies in
    every span; in the affine case this makes x finitely supported.
    """
    if params.d != sol.d:
        raise ValueError("solution and algebra have different d")
    r = params.ring
    lam = {int(a): dict(v) for a, v in (lam or {}).items()}
    rows: dict = {}
    for j in range(sol.d):
        rows[(0, j)] = RatFunc.const(r, _lift(sol.x0[j], params.field))
    for a, coeffs in lam.items():
        if a == 0:
            raise ValueError("x(0, .) is fixed by the solution")
        for i in coeffs:
            if int(i) % sol.d not in sol.S or int(i) != int(i) % sol.d:
                raise ValueError(f"coefficient index {i} outside S={list(sol.S)}")
        for b in range(sol.d):
            acc = RatFunc.const(r, 0)
            for i, c in coeffs.items():
                if isinstance(c, LaurentPoly):
                    c = RatFunc.from_poly(c)
                elif not isinstance(c, RatFunc):
                    c = RatFunc.const(r, c)
                acc = acc + c * RatFunc.const(r, CycloNum.zeta(params.field, int(i) * b * (params.field // sol.d)))
            rows[(a, b)] = acc
    zero = RatFunc.const(r, 0)
    if params.m is not None:
        return TraceParams(params, z, lambda a, b: rows.get((a, b), zero))
    return TraceParams(params, z, rows, default=0)


def _lift(c: CycloNum, field: int) -> CycloNum:
    """Embed Q(zeta_d) into Q(zeta_field)."""
    if c.d == field:
        return c
    step = field // c.d
    out = CycloNum.rational(field, 0)
    for k, v in enumerate(c.c):
        if v:
            out = out + CycloNum.zeta(field, k * step) * v
    return out


def character_eigen_check(d: int, S: Iterable[int]) -> bool:
    """A_S maps row i of C_{i,j} = zeta^{ij} to d*row for i in S, else to 0."""
    S = set(S)
    for i in range(d):
        row = [CycloNum.zeta(d, i * j) for j in range(d)]
        image = []
        for r in range(d):
            acc = CycloNum.rational(d, 0)
            for c in range(d):
                a_rc = sum((CycloNum.zeta(d, s * (r - c)) for s in S), CycloNum.rational(d, 0))
                acc = acc + a_rc * row[c]
            image.append(acc)
        want = [v * d for v in row] if i in S else [CycloNum.rational(d, 0)] * d
        if image != want:
            return False
    return True


def _a_values(tp: TraceParams, a_values) -> list[int]:
    p = tp.params
    if a_values is not None:
        return list(a_values)
    if p.m is not None:
        return list(range(p.m))
    if isinstance(tp._x, Mapping):
        return sorted({a for a, _ in tp._x} | {0})
    return list(range(-3, 4))


def esystem_linear_check(tp: TraceParams, a_values=None) -> tuple[bool, tuple | None]:
    """(1/d) sum_s x_{0,-s} x_{a,b+s} = x_{a,b} E for all (a, b); returns a witness (a, b)."""
    d = tp.params.d
    E = tp.E()
    for a in _a_values(tp, a_values):
        for b in range(d):
            lhs = RatFunc.const(tp.ring, 0)
            for s in range(d):
                lhs = lhs + tp.x(0, -s) * tp.x(a, b + s)
            if not ratfunc_equal(lhs * Fraction(1, d), tp.x(a, b) * E):
                return False, (a, b)
    return True, None


def _affine_keys(params: AlgebraParams, a_values: Sequence[int]):
    """Canonical monomials with X-exponents drawn from a_values (m infinite)."""
    import itertools

    n, d = params.n, params.d
    for a in itertools.product(a_values, repeat=n):
        for b in itertools.product(range(d), repeat=n):
            for w in itertools.permutations(range(1, n + 1)):
                yield (a, b, w)


def esystem_trace_check(tp: TraceParams, n: int = 1, a_values=None) -> tuple[bool, tuple | None]:
    """tau(u e_n) = tau(u) E for every canonical monomial u of Y(d,m,n); returns a witness u."""
    p = tp.params
    big = AlgebraParams(p.d, p.m, n + 1, p.field)
    small = big.with_n(n)
    E = tp.E()
    keys = canonical_basis(small) if p.m is not None else _affine_keys(small, _a_values(tp, a_values))
    for key in keys:
        u = monomial_word(key)
        tu = markov_trace(tp, word_to_nested(big, u))
        tue = RatFunc.const(tp.ring, 0)
        for s in range(p.d):
            tail = [l for l in (("t", n, s), ("t", n + 1, -s)) if l[2] % p.d]
            tue = tue + markov_trace(tp, word_to_nested(big, u + tail))
        if not ratfunc_equal(tue * Fraction(1, p.d), tu * E):
            return False, key
    return True, None


def check_affine_E_condition(tp: TraceParams, n: int = 1, a_values=None) -> dict:
    """Both routes of the E-condition.  Keys: ok, trace, linear, agree, witness."""
    lin, lw = esystem_linear_check(tp, a_values)
    tr, tw = esystem_trace_check(tp, n, a_values)
    return {
        "ok": lin and tr,
        "linear": lin,
        "trace": tr,
        "agree": lin == tr,
        "witness": {"linear": lw, "trace": tw},
    }


# ---------------------------------------------------------------------------
# invariants


def omega(tp: TraceParams) -> RatFunc:
    """(z - (q - q^{-1}) E) / z."""
    if tp.z.is_zero():
        raise InvariantError("invariant undefined for z = 0")
    return (tp.z - tp.E() * RatFunc.from_poly(q_minus_qinv(tp.ring))) / tp.z


@dataclass(frozen=True)
class InvariantValue:
    """base * omega^(parity/2)."""

    base: RatFunc
    parity: int
    omega: RatFunc

    def __eq__(self, other):
        if not isinstance(other, InvariantValue):
            return NotImplemented
        return self.parity == other.parity and ratfunc_equal(self.base, other.base)

    __hash__ = None

    def to_json(self) -> dict:
        return {"base": self.base.to_text(), "sqrt_omega_parity": self.parity, "omega": self.omega.to_text()}


@functools.lru_cache(maxsize=64)
def _e_ok(tp: TraceParams) -> bool:
    return esystem_linear_check(tp)[0]


def gamma_invariant(
    w: FramedAffineBraidWord,
    tp: TraceParams,
    variant: str = "Gamma",
    enforce_E: bool = True,
) -> InvariantValue:
    """z^{-(n-1)} omega^{(eps-(n-1))/2} tau(delta_n(w)); eps' for variant Gamma'."""
    if variant not in ("Gamma", "Gamma'"):
        raise ValueError(f"unknown variant {variant!r}")
    if tp.z.is_zero():
        raise InvariantError("invariant undefined for z = 0")
    if enforce_E and not _e_ok(tp):
        raise InvariantError("trace parameters violate the E-condition")
    p = tp.params
    params = AlgebraParams(p.d, p.m, w.n, p.field)
    tau = markov_trace(tp, word_to_nested(params, delta(w)))
    eps, eps_p = epsilon_sums(w)
    k = (eps if variant == "Gamma" else eps_p) - (w.n - 1)
    om = omega(tp)
    base = tau * tp.z ** (-(w.n - 1))
    half, parity = divmod(k, 2)
    if half:
        base = base * om**half
    return InvariantValue(base, parity, om)
