"""Chevalley-Eilenberg and Loday chain complexes with coefficients.

Chains of degree n are ``M ⊗ g^⊗n`` (Loday) or ``M ⊗ Λ^n g`` (CE).  A
basis element ``m_c ⊗ w`` sits at column ``c * size + code(w)`` where
``size`` is the dimension of the tensor/exterior power, tensor words are
coded big-endian in base ``dim g`` and increasing exterior tuples are
ranked colexicographically.

The Loday boundary with coefficients puts the module vector in slot 0
and uses ``[m, x] := -x.m`` for brackets involving it; the CE boundary is
transported from it through the quotient map, so the square
``pi ∘ delta = d ∘ pi`` holds by construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Iterator

from .lie import LieAlgebra, LieError, Representation
from .linalg import SparseMatrix, matmul


class Kind(str, Enum):
    CE = "ce"
    LODAY = "loday"


class ChainComplexError(RuntimeError):
    """A constructed boundary failed d∘d = 0; always an implementation bug."""


class BudgetExceeded(RuntimeError):
    def __init__(self, predicted: int, budget: int):
        self.predicted = predicted
        self.budget = budget
        super().__init__(f"predicted {predicted} nonzero entries exceeds budget {budget}")


class TensorIndexer:
    """Words of length ``degree`` over ``range(algebra_dim)`` <-> 0..dim**degree-1."""

    def __init__(self, algebra_dim: int, degree: int):
        self.algebra_dim = algebra_dim
        self.degree = degree
        self.size = algebra_dim**degree

    def encode(self, word) -> int:
        code = 0
        for i in word:
            code = code * self.algebra_dim + i
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.degree):
            code, r = divmod(code, self.algebra_dim)
            out.append(r)
        return tuple(reversed(out))

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(range(self.algebra_dim), repeat=self.degree)


class ExteriorIndexer:
    """Increasing tuples ``i_1 < ... < i_n`` <-> colex rank in 0..C(dim, n)-1."""

    def __init__(self, algebra_dim: int, degree: int):
        self.algebra_dim = algebra_dim
        self.degree = degree
        self.size = comb(algebra_dim, degree)

    @staticmethod
    def encode(t) -> int:
        return sum(comb(x, k + 1) for k, x in enumerate(t))

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for k in range(self.degree, 0, -1):
            x = k - 1
            while comb(x + 1, k) <= code:
                x += 1
            code -= comb(x, k)
            out.append(x)
        return tuple(reversed(out))

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        # colex order: sort combinations by reversed tuple
        return iter(sorted(itertools.combinations(range(self.algebra_dim), self.degree), key=lambda t: t[::-1]))

    @staticmethod
    def sort_sign(word) -> tuple[int, tuple[int, ...]]:
        """Sign of the sorting permutation and the sorted tuple; sign 0 on repeats."""
        w = list(word)
        if len(set(w)) != len(w):
            return 0, ()
        sign = 1
        # insertion sort counting transpositions
        for i in range(1, len(w)):
            j = i
            while j > 0 and w[j - 1] > w[j]:
                w[j - 1], w[j] = w[j], w[j - 1]
                sign = -sign
                j -= 1
        return sign, tuple(w)


def _check_pair(g: LieAlgebra, m: Representation) -> None:
    if m.algebra != g:
        raise LieError("representation/algebra mismatch")


def _tables(g: LieAlgebra, m: Representation):
    n = g.dim
    br = [[list(g.bracket_basis(i, j).items()) for j in range(n)] for i in range(n)]
    rho = [[list(col.items()) for col in a.iter_columns()] for a in m.action]
    return br, rho


def _loday_terms(br, rho, c: int, w: tuple[int, ...], coeff_sign: int = -1):
    """Yield ``(c', w', value)`` for delta(m_c ⊗ w).

    ``coeff_sign`` is the sign in ``[m, x] := coeff_sign * x.m``; only -1
    yields a complex.
    """
    n = len(w)
    for j in range(1, n + 1):
        sj = 1 if j % 2 == 0 else -1
        rest = w[: j - 1] + w[j:]
        # pair (0, j): the coefficient slot
        for c2, a in rho[w[j - 1]][c]:
            yield c2, rest, sj * coeff_sign * a
        # pairs (i, j), 1 <= i < j
        xj = w[j - 1]
        for i in range(1, j):
            terms = br[w[i - 1]][xj]
            if not terms:
                continue
            head = w[: i - 1]
            tail = w[i:j - 1] + w[j:]
            for k, a in terms:
                yield c, head + (k,) + tail, sj * a


def loday_boundary(g: LieAlgebra, m: Representation, n: int, *, _coeff_sign: int = -1) -> SparseMatrix:
    """Matrix of delta: M ⊗ g^⊗n -> M ⊗ g^⊗(n-1)."""
    if n < 1:
        raise ValueError("boundary degree must be at least 1")
    _check_pair(g, m)
    br, rho = _tables(g, m)
    src = TensorIndexer(g.dim, n)
    dst = TensorIndexer(g.dim, n - 1)
    columns = []
    for c in range(m.dim):
        for w in src:
            col: dict[int, Fraction] = {}
            for c2, w2, a in _loday_terms(br, rho, c, w, _coeff_sign):
                r = c2 * dst.size + dst.encode(w2)
                y = col.get(r, 0) + a
                if y:
                    col[r] = y
                else:
                    del col[r]
            columns.append(col)
    return SparseMatrix._trusted(m.dim * dst.size, m.dim * src.size, columns)


def ce_boundary(g: LieAlgebra, m: Representation, n: int) -> SparseMatrix:
    """Matrix of d: M ⊗ Λ^n g -> M ⊗ Λ^(n-1) g, induced from delta."""
    if n < 1:
        raise ValueError("boundary degree must be at least 1")
    _check_pair(g, m)
    br, rho = _tables(g, m)
    src = ExteriorIndexer(g.dim, n)
    dst = ExteriorIndexer(g.dim, n - 1)
    tuples = list(src)
    columns = []
    for c in range(m.dim):
        for t in tuples:
            col: dict[int, Fraction] = {}
            for c2, w2, a in _loday_terms(br, rho, c, t):
                sign, s = ExteriorIndexer.sort_sign(w2)
                if not sign:
                    continue
                r = c2 * dst.size + dst.encode(s)
                y = col.get(r, 0) + sign * a
                if y:
                    col[r] = y
                else:
                    del col[r]
            columns.append(col)
    return SparseMatrix._trusted(m.dim * dst.size, m.dim * src.size, columns)


def quotient_chain_map(g: LieAlgebra, m: Representation, n: int) -> SparseMatrix:
    """pi_n: M ⊗ g^⊗n -> M ⊗ Λ^n g."""
    src = TensorIndexer(g.dim, n)
    dst = ExteriorIndexer(g.dim, n)
    one = Fraction(1)
    columns = []
    for c in range(m.dim):
        for w in src:
            sign, s = ExteriorIndexer.sort_sign(w)
            columns.append({c * dst.size + dst.encode(s): one * sign} if sign else {})
    return SparseMatrix._trusted(m.dim * dst.size, m.dim * src.size, columns)


def chain_dim(g: LieAlgebra, m: Representation, kind: Kind | str, n: int) -> int:
    kind = Kind(kind)
    if n < 0:
        return 0
    if kind is Kind.LODAY:
        return m.dim * g.dim**n
    return m.dim * comb(g.dim, n)


def predicted_nonzeros(g: LieAlgebra, m: Representation, kind: Kind | str, n: int) -> int:
    """Upper bound on the stored entries of the degree-n boundary."""
    cols = chain_dim(g, m, kind, n)
    if n < 1 or cols == 0:
        return 0
    max_br = max((len(c) for c in g.brackets.values()), default=0)
    max_rho = max((len(col) for a in m.action for col in a.iter_columns()), default=0)
    return cols * column_bound(n, max_br, max_rho)


def column_bound(n: int, max_bracket_support: int, max_action_support: int) -> int:
    return n * max_action_support + n * (n - 1) // 2 * max_bracket_support


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """Boundaries ``boundaries[n]: C_n -> C_{n-1}`` for ``0 <= n <= max_degree``.

    ``boundaries[0]`` is the zero map to the zero space.  A CE complex built
    through degree ``dim g`` is complete: all higher chain groups vanish.
    """

    kind: Kind
    algebra: LieAlgebra
    coefficients: Representation
    max_degree: int
    boundaries: tuple[SparseMatrix, ...]
    _ranks: dict = field(default_factory=dict, repr=False)

    @property
    def complete(self) -> bool:
        return self.kind is Kind.CE and self.max_degree >= self.algebra.dim

    def dim(self, n: int) -> int:
        return chain_dim(self.algebra, self.coefficients, self.kind, n)

    def boundary(self, n: int) -> SparseMatrix:
        if n <= self.max_degree:
            return self.boundaries[n]
        if self.complete:
            return SparseMatrix.zeros(self.dim(n - 1), self.dim(n))
        raise IndexError(f"boundary of degree {n} was not materialized (max degree {self.max_degree})")

    def boundary_rank(self, n: int, modular: bool = False) -> int:
        from .linalg import rank

        key = (n, modular)
        if key not in self._ranks:
            self._ranks[key] = rank(self.boundary(n), modular=modular)
        return self._ranks[key]


def build_complex(
    g: LieAlgebra,
    m: Representation,
    kind: Kind | str,
    max_degree: int,
    budget: int | None = None,
    verify: bool = True,
) -> ChainComplex:
    """Materialize all boundaries through ``max_degree`` and check d∘d = 0."""
    kind = Kind(kind)
    _check_pair(g, m)
    if max_degree < (1 if kind is Kind.LODAY else 0):
        raise ValueError("max_degree too small")
    if budget is not None:
        predicted = sum(predicted_nonzeros(g, m, kind, n) for n in range(1, max_degree + 1))
        if predicted > budget:
            raise BudgetExceeded(predicted, budget)
    make = loday_boundary if kind is Kind.LODAY else ce_boundary
    bounds = [SparseMatrix.zeros(0, m.dim)]
    for n in range(1, max_degree + 1):
        if kind is Kind.CE and n > g.dim:
            bounds.append(SparseMatrix.zeros(chain_dim(g, m, kind, n - 1), 0))
        else:
            bounds.append(make(g, m, n))
    if verify:
        for n in range(2, max_degree + 1):
            if not matmul(bounds[n - 1], bounds[n]).is_zero():
                raise ChainComplexError(f"{kind.value} boundary composite nonzero at degree {n}")
    return ChainComplex(kind, g, m, max_degree, tuple(bounds))
