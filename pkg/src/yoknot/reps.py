"""(d,m)-partitions, standard tableaux, irreducible representations,
idempotents and Schur elements of the cyclotomic algebra Y(d, m, n).

A (d,m)-partition is stored as a d x m grid (tuple of tuples) of integer
partitions; positions are 1-based in the public API (d-position k, m-position
l) and 0-based inside the grid.  The roots of unity are ordered
xi_k = zeta_d^(k-1).
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .algebra import (
    AlgebraParams,
    CanonicalElement,
    canonical_basis,
    defining_relations,
    jm_elements,
    monomial_word,
    multiply,
    word_to_element,
)
from .scalars import (
    CycloNum,
    LaurentPoly,
    RatFunc,
    Ring,
    SpecializationPole,
    cyclo_rank,
    embed_ratfunc,
    generic_points,
    q_minus_qinv,
    ratfunc_equal,
    ring,
    specialize,
)
from .traces import zero_trace_canonical

__all__ = [
    "DMNode",
    "DMPartition",
    "Matrix",
    "RankGuardError",
    "Representation",
    "StandardDMTableau",
    "branching_check",
    "build_representation",
    "character",
    "characters_distinct",
    "commutant_dimension",
    "count_standard_tableaux",
    "dimension_identity",
    "enumerate_dm_partitions",
    "lemma_addable_ratios",
    "represent_element",
    "represent_word",
    "representation_relations",
    "schur_element",
    "schur_factorization",
    "semisimplicity_poly",
    "standard_tableaux",
    "sum_squared_dimensions",
    "tableau_content_array",
    "tableau_idempotent",
    "tableau_position_idempotent",
]

DEFAULT_MAX_RANK = 5000


class RankGuardError(ValueError):
    """The instance is larger than the configured size bound."""


# ---------------------------------------------------------------------------
# combinatorics


@dataclass(frozen=True, order=True)
class DMNode:
    """Node in row x, column y of the diagram at d-position k, m-position l."""

    k: int
    l: int
    x: int
    y: int

    def content(self, r: Ring) -> LaurentPoly:
        return LaurentPoly.monomial(r, _content_exps(r, self.l, self.y - self.x))

    def classical_content(self) -> int:
        return self.y - self.x


def _content_exps(r: Ring, l: int, cc: int) -> list[int]:
    exps = [0] * r.nv
    exps[0] = 2 * cc
    exps[l] = 1
    return exps


def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    largest = n if largest is None else min(n, largest)
    for first in range(largest, 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


@dataclass(frozen=True, order=True)
class DMPartition:
    """d x m grid of partitions."""

    cells: tuple

    @classmethod
    def from_lists(cls, grid: Sequence[Sequence[Sequence[int]]]) -> "DMPartition":
        cells = tuple(tuple(tuple(int(p) for p in part) for part in row) for row in grid)
        for row in cells:
            if len(row) != len(cells[0]):
                raise ValueError("ragged (d,m)-partition grid")
            for part in row:
                if any(p <= 0 for p in part) or list(part) != sorted(part, reverse=True):
                    raise ValueError(f"not a partition: {list(part)}")
        return cls(cells)

    @classmethod
    def single_box(cls, d: int, m: int, k: int, l: int) -> "DMPartition":
        grid = [[() for _ in range(m)] for _ in range(d)]
        grid[k - 1][l - 1] = (1,)
        return cls.from_lists(grid)

    @property
    def d(self) -> int:
        return len(self.cells)

    @property
    def m(self) -> int:
        return len(self.cells[0])

    @property
    def size(self) -> int:
        return sum(sum(p) for row in self.cells for p in row)

    def part(self, k: int, l: int) -> tuple[int, ...]:
        return self.cells[k - 1][l - 1]

    def nodes(self) -> list[DMNode]:
        return [
            DMNode(k + 1, l + 1, x + 1, y + 1)
            for k, row in enumerate(self.cells)
            for l, part in enumerate(row)
            for x, length in enumerate(part)
            for y in range(length)
        ]

    def removable(self) -> list[DMNode]:
        out = []
        for k, row in enumerate(self.cells):
            for l, part in enumerate(row):
                for x, length in enumerate(part):
                    if x + 1 == len(part) or part[x + 1] < length:
                        out.append(DMNode(k + 1, l + 1, x + 1, length))
        return out

    def addable(self) -> list[DMNode]:
        out = []
        for k, row in enumerate(self.cells):
            for l, part in enumerate(row):
                for x in range(len(part) + 1):
                    length = part[x] if x < len(part) else 0
                    if x == 0 or part[x - 1] > length:
                        out.append(DMNode(k + 1, l + 1, x + 1, length + 1))
        return out

    def _replace(self, k: int, l: int, part: tuple) -> "DMPartition":
        grid = [list(row) for row in self.cells]
        grid[k - 1][l - 1] = part
        return DMPartition(tuple(tuple(row) for row in grid))

    def remove(self, node: DMNode) -> "DMPartition":
        part = list(self.part(node.k, node.l))
        part[node.x - 1] -= 1
        return self._replace(node.k, node.l, tuple(p for p in part if p))

    def add(self, node: DMNode) -> "DMPartition":
        part = list(self.part(node.k, node.l))
        if node.x == len(part) + 1:
            part.append(1)
        else:
            part[node.x - 1] += 1
        return self._replace(node.k, node.l, tuple(part))

    def block(self, k: int) -> "DMPartition":
        """The m-partition at d-position k, as a (1,m)-partition."""
        return DMPartition((self.cells[k - 1],))

    def to_json(self) -> list:
        return [[list(p) for p in row] for row in self.cells]

    def __str__(self) -> str:
        return str(self.to_json())


def enumerate_dm_partitions(d: int, m: int | None, n: int) -> list[DMPartition]:
    """All (d,m)-partitions of size n, sorted."""
    if m is None:
        raise ValueError("cyclotomic only")
    slots = d * m
    out = []
    for comp in _compositions(n, slots):
        for parts in itertools.product(*(_partitions(c) for c in comp)):
            grid = tuple(tuple(parts[k * m : (k + 1) * m]) for k in range(d))
            out.append(DMPartition(grid))
    return sorted(out)


def _compositions(n: int, slots: int) -> Iterator[tuple[int, ...]]:
    if slots == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, slots - 1):
            yield (first,) + rest


@dataclass(frozen=True, order=True)
class StandardDMTableau:
    """Standard filling: ``nodes[i-1]`` holds the entry i."""

    shape: DMPartition
    nodes: tuple

    @property
    def n(self) -> int:
        return len(self.nodes)

    def p(self, i: int) -> int:
        return self.nodes[i - 1].k

    def content(self, i: int, r: Ring) -> LaurentPoly:
        return self.nodes[i - 1].content(r)

    def swapped(self, i: int) -> "StandardDMTableau | None":
        """T^{s_i} when it is standard, else None."""
        a, b = self.nodes[i - 1], self.nodes[i]
        if (a.k, a.l) == (b.k, b.l) and ((a.x == b.x and abs(a.y - b.y) == 1) or (a.y == b.y and abs(a.x - b.x) == 1)):
            return None
        nodes = list(self.nodes)
        nodes[i - 1], nodes[i] = b, a
        return StandardDMTableau(self.shape, tuple(nodes))

    def restrict(self) -> "StandardDMTableau":
        """Remove the entry n."""
        return StandardDMTableau(self.shape.remove(self.nodes[-1]), self.nodes[:-1])

    def to_json(self) -> list:
        grid = [[[[0] * length for length in part] for part in row] for row in self.shape.cells]
        for i, nd in enumerate(self.nodes, 1):
            grid[nd.k - 1][nd.l - 1][nd.x - 1][nd.y - 1] = i
        return grid


@functools.lru_cache(maxsize=None)
def _tableaux(shape: DMPartition) -> tuple:
    if shape.size == 0:
        return (StandardDMTableau(shape, ()),)
    out = []
    for node in shape.removable():
        for t in _tableaux(shape.remove(node)):
            out.append(StandardDMTableau(shape, t.nodes + (node,)))
    return tuple(sorted(out))


def standard_tableaux(shape: DMPartition) -> list[StandardDMTableau]:
    return list(_tableaux(shape))


@functools.lru_cache(maxsize=None)
def count_standard_tableaux(shape: DMPartition) -> int:
    if shape.size == 0:
        return 1
    return sum(count_standard_tableaux(shape.remove(nd)) for nd in shape.removable())


def tableau_content_array(T: StandardDMTableau, r: Ring | None = None) -> list[tuple[int, LaurentPoly]]:
    """[(p^(d)(T|i), c(T|i)) for i = 1..n]."""
    r = r or ring(T.shape.d, T.shape.m)
    return [(nd.k, nd.content(r)) for nd in T.nodes]


def sum_squared_dimensions(d: int, m: int | None, n: int, enumerate_shapes: bool | None = None) -> int:
    """sum over (d,m)-partitions of n of (number of standard tableaux)^2.

    With ``enumerate_shapes`` every shape is listed.  Otherwise shapes are
    grouped by the sizes of their dm cells: a shape with cell sizes n_c has
    n!/prod n_c! * prod f(cell) tableaux, so the sum is
    n!^2 [x^n] (sum_k g(k) x^k / k!^2)^(dm) with g(k) the sum of f(mu)^2
    over partitions mu of k.  Large dm at small n is then cheap.
    """
    if m is None:
        raise ValueError("cyclotomic only")
    if enumerate_shapes is None:
        enumerate_shapes = d * m <= 8
    if enumerate_shapes:
        return sum(count_standard_tableaux(s) ** 2 for s in enumerate_dm_partitions(d, m, n))
    series = []
    for k in range(n + 1):
        g = sum(count_standard_tableaux(DMPartition(((mu,),))) ** 2 for mu in _partitions(k))
        series.append(Fraction(g, math.factorial(k) ** 2))
    power = _series_pow(series, d * m, n)
    return int(power[n] * math.factorial(n) ** 2)


def _series_pow(series: list, e: int, deg: int) -> list:
    result = [Fraction(1)] + [Fraction(0)] * deg
    base = list(series)
    while e:
        if e & 1:
            result = _series_mul(result, base, deg)
        e >>= 1
        if e:
            base = _series_mul(base, base, deg)
    return result


def _series_mul(a: list, b: list, deg: int) -> list:
    out = [Fraction(0)] * (deg + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(deg + 1 - i):
                out[i + j] += x * b[j]
    return out


def dimension_identity(d: int, m: int | None, n: int, enumerate_shapes: bool | None = None) -> bool:
    """sum of squared dimensions equals (dm)^n n!."""
    return sum_squared_dimensions(d, m, n, enumerate_shapes) == (d * m) ** n * math.factorial(n)


def semisimplicity_poly(m: int, n: int, r: Ring | None = None) -> LaurentPoly:
    """prod_k (1+q^2+..+q^{2(k-1)}) * prod_{s<t} prod_{-n<l<n} (q^{2l} v_s - v_t)."""
    r = r or ring(1, m)
    out = LaurentPoly.const(r, 1)
    for k in range(1, n + 1):
        out = out * sum((LaurentPoly.q(r, 2 * j) for j in range(k)), LaurentPoly.zero(r))
    for s in range(1, m + 1):
        for t in range(s + 1, m + 1):
            for l in range(-n + 1, n):
                out = out * (LaurentPoly.q(r, 2 * l) * LaurentPoly.v(r, s) - LaurentPoly.v(r, t))
    return out


def lemma_addable_ratios(d: int, m: int, N: int) -> bool:
    """Content ratios of distinct addable nodes with equal d-position, size N-1.

    Same m-position: q^{2k} with 1 <= |k| <= N.  Different m-position:
    q^{2l} v_s / v_t with s != t and |l| <= N-1.
    """
    for mu in enumerate_dm_partitions(d, m, N - 1):
        adds = mu.addable()
        for a, b in itertools.permutations(adds, 2):
            if a.k != b.k:
                continue
            k = a.classical_content() - b.classical_content()
            if a.l == b.l:
                if not 1 <= abs(k) <= N:
                    return False
            elif abs(k) > N - 1:
                return False
    return True


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Sparse square matrix with RatFunc entries."""

    __slots__ = ("dim", "ring", "rows")

    def __init__(self, dim: int, r: Ring, rows: dict | None = None):
        self.dim = dim
        self.ring = r
        self.rows = rows or {}

    @classmethod
    def identity(cls, dim: int, r: Ring) -> "Matrix":
        one = RatFunc.const(r, 1)
        return cls(dim, r, {i: {i: one} for i in range(dim)})

    @classmethod
    def diagonal(cls, values: Sequence[RatFunc], r: Ring) -> "Matrix":
        return cls(len(values), r, {i: {i: v} for i, v in enumerate(values) if not v.is_zero()})

    def entry(self, i: int, j: int) -> RatFunc:
        return self.rows.get(i, {}).get(j, RatFunc.const(self.ring, 0))

    def __mul__(self, other: "Matrix") -> "Matrix":
        out: dict = {}
        for i, row in self.rows.items():
            acc: dict = {}
            for k, a in row.items():
                for j, b in other.rows.get(k, {}).items():
                    p = a * b
                    acc[j] = acc[j] + p if j in acc else p
            acc = {j: v for j, v in acc.items() if not v.is_zero()}
            if acc:
                out[i] = acc
        return Matrix(self.dim, self.ring, out)

    def __add__(self, other: "Matrix") -> "Matrix":
        out = {i: dict(row) for i, row in self.rows.items()}
        for i, row in other.rows.items():
            tgt = out.setdefault(i, {})
            for j, v in row.items():
                s = tgt[j] + v if j in tgt else v
                if s.is_zero():
                    tgt.pop(j, None)
                else:
                    tgt[j] = s
        return Matrix(self.dim, self.ring, {i: r for i, r in out.items() if r})

    def __neg__(self):
        return self.scale(RatFunc.const(self.ring, -1))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = c if isinstance(c, RatFunc) else RatFunc.const(self.ring, c)
        if c.is_zero():
            return Matrix(self.dim, self.ring, {})
        return Matrix(self.dim, self.ring, {i: {j: v * c for j, v in row.items()} for i, row in self.rows.items()})

    def is_zero(self) -> bool:
        return all(v.is_zero() for row in self.rows.values() for v in row.values())

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.dim == other.dim and (self - other).is_zero()

    __hash__ = None

    def trace(self) -> RatFunc:
        out = RatFunc.const(self.ring, 0)
        for i in range(self.dim):
            if i in self.rows and i in self.rows[i]:
                out = out + self.rows[i][i]
        return out

    def is_diagonal(self) -> bool:
        return all(j == i for i, row in self.rows.items() for j in row)

    def specialize(self, point) -> list[list[CycloNum]]:
        zero = CycloNum.rational(self.ring.d, 0)
        dense = [[zero] * self.dim for _ in range(self.dim)]
        for i, row in self.rows.items():
            for j, v in row.items():
                dense[i][j] = specialize(v, point)
        return dense


# ---------------------------------------------------------------------------
# representations


class Representation:
    """V_lambda with the basis of standard tableaux (in sorted order)."""

    def __init__(self, shape: DMPartition, params: AlgebraParams):
        self.shape = shape
        self.params = params
        self.ring = params.ring
        self.tableaux = standard_tableaux(shape)
        self.index = {T: i for i, T in enumerate(self.tableaux)}
        self._letters: dict = {}
        self._monomials: dict = {}

    @property
    def dim(self) -> int:
        return len(self.tableaux)

    def xi(self, k: int) -> CycloNum:
        return CycloNum.zeta(self.params.field, (k - 1) * (self.params.field // self.params.d))

    def letter(self, letter: tuple) -> Matrix:
        kind, idx, e = letter
        if kind == "t":
            e %= self.params.d
        key = (kind, idx, e)
        if key not in self._letters:
            self._letters[key] = self._build(kind, idx, e)
        return self._letters[key]

    def _build(self, kind: str, idx: int, e: int) -> Matrix:
        r = self.ring
        n = self.params.n
        if kind == "t":
            if not 1 <= idx <= n:
                raise ValueError(f"t_{idx} out of range for n={n}")
            return Matrix.diagonal([RatFunc.const(r, self.xi(T.p(idx)) ** e) for T in self.tableaux], r)
        if kind == "X":
            if idx != 1 or e not in (1, -1):
                raise ValueError("only X_1^{+-1} is a generator")
            return Matrix.diagonal([RatFunc.from_poly(T.content(1, r)) ** e for T in self.tableaux], r)
        if kind != "g" or not 1 <= idx <= n - 1 or e not in (1, -1):
            raise ValueError(f"invalid letter {(kind, idx, e)!r}")
        if e == -1:
            ei = Matrix(self.dim, r, {})
            for s in range(self.params.d):
                ei = ei + self.letter(("t", idx, s)) * self.letter(("t", idx + 1, -s))
            qq = RatFunc.from_poly(q_minus_qinv(r)) * Fraction(1, self.params.d)
            return self.letter(("g", idx, 1)) - ei.scale(qq)
        i = idx
        q = LaurentPoly.q(r)
        qinv = LaurentPoly.q(r, -1)
        rows: dict = {}
        for col, T in enumerate(self.tableaux):
            S = T.swapped(i)
            if T.p(i) != T.p(i + 1):
                rows.setdefault(self.index[S], {})[col] = RatFunc.const(r, 1)
                continue
            ci, cj = T.content(i, r), T.content(i + 1, r)
            den = cj - ci
            rows.setdefault(col, {})[col] = RatFunc(cj * q_minus_qinv(r), den)
            if S is not None:
                rows.setdefault(self.index[S], {})[col] = RatFunc(q * cj - qinv * ci, den)
        return Matrix(self.dim, r, rows)

    def word(self, word: Iterable) -> Matrix:
        out = Matrix.identity(self.dim, self.ring)
        for letter in word:
            out = out * self.letter(tuple(letter))
        return out

    def monomial(self, key: tuple) -> Matrix:
        if key not in self._monomials:
            self._monomials[key] = self.word(monomial_word(key))
        return self._monomials[key]


@functools.lru_cache(maxsize=None)
def build_representation(shape: DMPartition, field: int = 0) -> Representation:
    """V_lambda over Q(zeta_field)(q, v); field defaults to d."""
    params = AlgebraParams(shape.d, shape.m, shape.size, field or shape.d)
    return Representation(shape, params)


def represent_word(rep: Representation, word: Iterable) -> Matrix:
    return rep.word(word)


def represent_element(rep: Representation, x: CanonicalElement) -> Matrix:
    """rho(x) = sum coeff * rho(monomial)."""
    if (x.params.d, x.params.m, x.params.n) != (rep.params.d, rep.params.m, rep.params.n):
        raise ValueError("element and representation belong to different algebras")
    out = Matrix(rep.dim, rep.ring, {})
    for key, c in x.terms.items():
        out = out + rep.monomial(key).scale(c)
    return out


def character(rep: Representation, key: tuple) -> RatFunc:
    """chi_lambda of a canonical monomial."""
    return rep.monomial(key).trace()


def representation_relations(rep: Representation) -> dict[str, bool]:
    """Every defining relation evaluated on the matrices."""
    out = {}
    for name, lhs, rhs in defining_relations(rep.params):
        diff = Matrix(rep.dim, rep.ring, {})
        for c, w in lhs:
            diff = diff + rep.word(w).scale(c)
        for c, w in rhs:
            diff = diff - rep.word(w).scale(c)
        out[name] = diff.is_zero()
    return out


def _embed_key(key: tuple, n: int) -> tuple:
    a, b, w = key
    k = len(a)
    return (a + (0,) * (n - k), b + (0,) * (n - k), w + tuple(range(k + 1, n + 1)))


def branching_check(shape: DMPartition) -> bool:
    """Restriction to Y(d,m,n-1) has character sum over removable nodes."""
    n = shape.size
    if n < 2:
        return True
    rep = build_representation(shape)
    subs = [build_representation(shape.remove(nd)) for nd in shape.removable()]
    sub_params = rep.params.with_n(n - 1)
    for key in canonical_basis(sub_params):
        lhs = character(rep, _embed_key(key, n))
        rhs = RatFunc.const(rep.ring, 0)
        for s in subs:
            rhs = rhs + character(s, key)
        if not ratfunc_equal(lhs, rhs):
            return False
    return True


def characters_distinct(d: int, m: int, n: int, point=None) -> tuple[bool, dict]:
    """Every pair of shapes is separated by some canonical monomial.

    Values are compared at a generic point; different values there prove the
    rational functions differ.  Returns (ok, {(i, j): separating key}).
    """
    params = AlgebraParams(d, m, n)
    shapes = enumerate_dm_partitions(d, m, n)
    reps = [build_representation(s) for s in shapes]
    keys = list(canonical_basis(params))
    point = point or generic_points(m)[0]
    table = [[specialize(character(r, k), point) for k in keys] for r in reps]
    witnesses = {}
    for i, j in itertools.combinations(range(len(shapes)), 2):
        sep = next((keys[c] for c in range(len(keys)) if table[i][c] != table[j][c]), None)
        if sep is None:
            return False, witnesses
        witnesses[(i, j)] = sep
    return True, witnesses


def commutant_dimension(rep: Representation, point=None) -> int:
    """dim of {C : C rho(g) = rho(g) C for all generators} at a generic point."""
    n, dim = rep.params.n, rep.dim
    letters = [("X", 1, 1)] + [("t", j, 1) for j in range(1, n + 1)] + [("g", i, 1) for i in range(1, n)]
    for pt in [point] if point else generic_points(rep.params.m):
        try:
            mats = [rep.letter(l).specialize(pt) for l in letters]
            break
        except SpecializationPole:
            continue
    zero = CycloNum.rational(rep.ring.d, 0)
    rows = []
    # unknown C[a][b] at column a*dim+b; equation (CA - AC)[i][j] = 0
    for A in mats:
        for i in range(dim):
            for j in range(dim):
                row = [zero] * (dim * dim)
                for k in range(dim):
                    row[i * dim + k] = row[i * dim + k] + A[k][j]
                    row[k * dim + j] = row[k * dim + j] - A[i][k]
                rows.append(row)
    return dim * dim - cyclo_rank(rows)


# ---------------------------------------------------------------------------
# idempotents and Schur elements


def _guard(params: AlgebraParams, max_rank: int | None) -> None:
    bound = DEFAULT_MAX_RANK if max_rank is None else max_rank
    if params.rank() > bound:
        raise RankGuardError(f"rank {params.rank()} of Y{params.label()} exceeds the bound {bound}")


@functools.lru_cache(maxsize=None)
def _jm(params: AlgebraParams):
    return jm_elements(params)


def _scalar_elem(params: AlgebraParams, c: RatFunc) -> CanonicalElement:
    return CanonicalElement.scalar(params, c)


def tableau_position_idempotent(T: StandardDMTableau, field: int = 0, max_rank: int | None = None) -> CanonicalElement:
    """E^p_T = prod_i prod_{xi != xi_{p_i}} (t_i - xi)/(xi_{p_i} - xi)."""
    params = AlgebraParams(T.shape.d, T.shape.m, T.n, field or T.shape.d)
    _guard(params, max_rank)
    rep_xi = build_representation(T.shape, params.field).xi
    r = params.ring
    num = CanonicalElement.one(params)
    scale = RatFunc.const(r, 1)
    for i in range(1, T.n + 1):
        ti = word_to_element(params, [("t", i, 1)])
        for k in range(1, params.d + 1):
            if k == T.p(i):
                continue
            num = multiply(num, ti - _scalar_elem(params, RatFunc.const(r, rep_xi(k))))
            scale = scale / RatFunc.const(r, rep_xi(T.p(i)) - rep_xi(k))
    return num.scale(scale)


def tableau_idempotent(T: StandardDMTableau, field: int = 0, max_rank: int | None = None) -> CanonicalElement:
    """Primitive idempotent E_T from the Jucys-Murphy elements X_1..X_n.

    The numerator is multiplied out first and the scalar denominators are
    applied once at the end, so the intermediate coefficients stay Laurent
    polynomials.
    """
    params = AlgebraParams(T.shape.d, T.shape.m, T.n, field or T.shape.d)
    _guard(params, max_rank)
    r = params.ring
    xs, _ = _jm(params)
    num = tableau_position_idempotent(T, params.field, max_rank)
    scale = RatFunc.const(r, 1)
    mu = DMPartition(tuple(tuple(() for _ in range(T.shape.m)) for _ in range(T.shape.d)))
    for i in range(1, T.n + 1):
        ci = T.content(i, r)
        for th in mu.addable():
            if th.k != T.p(i):
                continue
            cth = th.content(r)
            if cth == ci:
                continue
            num = multiply(num, xs[i - 1] - _scalar_elem(params, RatFunc.from_poly(cth)))
            scale = scale / RatFunc.from_poly(ci - cth)
        mu = mu.add(T.nodes[i - 1])
    return num.scale(scale)


@functools.lru_cache(maxsize=None)
def _schur(shape: DMPartition, field: int, max_rank: int | None) -> RatFunc:
    if shape.size == 0:
        return RatFunc.const(ring(field or shape.d, shape.m), 1)
    T = standard_tableaux(shape)[0]
    tr = zero_trace_canonical(tableau_idempotent(T, field, max_rank))
    if tr.is_zero():
        raise ArithmeticError(f"zero trace of the idempotent of {shape}")
    return tr.inverse()


def schur_element(shape: DMPartition, field: int = 0, max_rank: int | None = None) -> RatFunc:
    """s_lambda = 1 / tau(E_T) for the first standard tableau T of the shape."""
    return _schur(shape, field, max_rank)


def schur_factorization(shape: DMPartition, max_rank: int | None = None) -> bool:
    """s_lambda = d^n prod_a s_{lambda[a]}, each factor computed in Y(1, m, n_a)."""
    d, n = shape.d, shape.size
    r = ring(d, shape.m)
    rhs = RatFunc.const(r, d**n)
    for k in range(1, d + 1):
        blk = shape.block(k)
        if blk.size:
            rhs = rhs * embed_ratfunc(schur_element(blk, 1, max_rank), r)
    return ratfunc_equal(schur_element(shape, 0, max_rank), rhs)
