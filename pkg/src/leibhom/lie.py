"""Lie algebras by structure constants, their representations, and the
Levi-type data (radical, quotient, section) used by the Lemma 1 checks.

Conventions: sl2 has basis (e, h, f) with [h,e] = 2e, [h,f] = -2f,
[e,f] = h.  In a semidirect product the ideal's basis comes first and the
lifts of the acting algebra follow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import (
    Echelon,
    SparseMatrix,
    Vector,
    hstack,
    image_basis,
    kernel_basis,
    kron,
    rank,
    to_fraction,
)


class LieError(ValueError):
    """Raised for structurally invalid algebra or representation input."""


class DerivationError(LieError):
    def __init__(self, generator: int, pair: tuple[int, int]):
        self.generator = generator
        self.pair = pair
        super().__init__(f"action of generator {generator} is not a derivation on basis pair {pair}")


@dataclass(frozen=True)
class Violation:
    """A failed Jacobi or commutator identity together with its residual."""

    kind: str
    indices: tuple[int, ...]
    residual: Vector

    def __str__(self) -> str:
        terms = ", ".join(f"{i}: {x}" for i, x in sorted(self.residual.entries.items()))
        return f"{self.kind} fails at {self.indices}; residual {{{terms}}}"


def _clean(coeffs: Mapping[int, object]) -> dict[int, Fraction]:
    out = {}
    for k, x in coeffs.items():
        x = to_fraction(x)
        if x:
            out[k] = x
    return out


class LieAlgebra:
    """Finite-dimensional algebra given by structure constants.

    ``brackets`` maps pairs ``(i, j)`` with ``i < j`` to the coefficient
    dict of ``[e_i, e_j]``; missing pairs are zero brackets and the
    opposite order is derived by antisymmetry.
    """

    __slots__ = ("labels", "brackets", "_table")

    def __init__(self, labels: Sequence[str], brackets: Mapping[tuple[int, int], Mapping[int, object]] | None = None):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise LieError("basis labels must be unique")
        n = len(labels)
        stored: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), coeffs in (brackets or {}).items():
            if not (0 <= i < j < n):
                raise LieError(f"bracket record ({i}, {j}) must satisfy 0 <= i < j < {n}")
            c = _clean(coeffs)
            for k in c:
                if not 0 <= k < n:
                    raise LieError(f"bracket ({i}, {j}) has coefficient index {k} out of range")
            if c:
                stored[(i, j)] = c
        self.labels = labels
        self.brackets = stored
        table: list[list[dict[int, Fraction]]] = [[{} for _ in range(n)] for _ in range(n)]
        for (i, j), c in stored.items():
            table[i][j] = c
            table[j][i] = {k: -x for k, x in c.items()}
        self._table = table

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.labels == other.labels and self.brackets == other.brackets

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"LieAlgebra({list(self.labels)}, {len(self.brackets)} nonzero brackets)"

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        """Coefficients of ``[e_i, e_j]``.  The returned dict must not be mutated."""
        return self._table[i][j]

    def bracket(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self._table[i][j].items():
                    v = out.get(k, 0) + a * b * c
                    if v:
                        out[k] = v
                    else:
                        del out[k]
        return out

    def ad(self, i: int) -> SparseMatrix:
        return SparseMatrix._trusted(self.dim, self.dim, [dict(self._table[i][j]) for j in range(self.dim)])


# ---------------------------------------------------------------------------
# constructors


def abelian(n: int, labels: Sequence[str] | None = None) -> LieAlgebra:
    return LieAlgebra(labels or [f"a{i}" for i in range(n)])


def sl2() -> LieAlgebra:
    # e=0, h=1, f=2
    return LieAlgebra(["e", "h", "f"], {(0, 1): {0: -2}, (0, 2): {1: 1}, (1, 2): {2: -2}})


def heisenberg() -> LieAlgebra:
    return LieAlgebra(["x", "y", "z"], {(0, 1): {2: 1}})


def two_dim_nonabelian() -> LieAlgebra:
    return LieAlgebra(["a", "b"], {(0, 1): {1: 1}})


def standard_algebra(name: str, n: int | None = None) -> LieAlgebra:
    """Look up a corpus algebra: ``abelian`` (needs ``n``), ``sl2``,
    ``heisenberg`` or ``two_dim_nonabelian``."""
    if name == "abelian":
        if n is None:
            raise LieError("abelian algebra needs a dimension")
        return abelian(n)
    builders = {"sl2": sl2, "heisenberg": heisenberg, "two_dim_nonabelian": two_dim_nonabelian}
    if name not in builders:
        raise LieError(f"unknown standard algebra {name!r}")
    return builders[name]()


# ---------------------------------------------------------------------------
# validation


def validate_lie(g: LieAlgebra) -> Violation | None:
    """Check the Jacobi identity on every basis triple i < j < k.

    Antisymmetry is structural, so distinct increasing triples suffice.
    """
    n = g.dim
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                res: dict[int, Fraction] = {}
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    inner = g.bracket_basis(b, c)
                    for t, x in g.bracket({a: Fraction(1)}, inner).items():
                        res[t] = res.get(t, 0) + x
                res = {t: x for t, x in res.items() if x}
                if res:
                    return Violation("jacobi", (i, j, k), Vector(n, res))
    return None


@dataclass(frozen=True, eq=False)
class Representation:
    """Action of ``algebra`` on a ``dim``-dimensional space, one matrix per basis element."""

    algebra: LieAlgebra
    dim: int
    action: tuple[SparseMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "action", tuple(self.action))
        if len(self.action) != self.algebra.dim:
            raise LieError(f"need {self.algebra.dim} action matrices, got {len(self.action)}")
        for m in self.action:
            if m.shape != (self.dim, self.dim):
                raise LieError(f"action matrix has shape {m.shape}, expected {(self.dim, self.dim)}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Representation):
            return NotImplemented
        return self.algebra == other.algebra and self.dim == other.dim and self.action == other.action

    __hash__ = None  # type: ignore[assignment]

    def act(self, x: Mapping[int, Fraction]) -> SparseMatrix:
        """Matrix of a general algebra element given in coordinates."""
        out = SparseMatrix.zeros(self.dim, self.dim)
        for i, a in x.items():
            out = out + self.action[i].scale(a)
        return out


def validate_rep(m: Representation) -> Violation | None:
    g = m.algebra
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            lhs = m.act(g.bracket_basis(i, j))
            comm = m.action[i] @ m.action[j] - m.action[j] @ m.action[i]
            diff = lhs - comm
            if not diff.is_zero():
                r, c = min(diff.entries)
                col = diff.column(c)
                return Violation("commutator", (i, j), col)
    return None


def adjoint(g: LieAlgebra) -> Representation:
    return Representation(g, g.dim, [g.ad(i) for i in range(g.dim)])


def trivial_rep(g: LieAlgebra, k: int = 1) -> Representation:
    return Representation(g, k, [SparseMatrix.zeros(k, k) for _ in range(g.dim)])


def dual_rep(m: Representation) -> Representation:
    return Representation(m.algebra, m.dim, [-a.transpose() for a in m.action])


def tensor_rep(m: Representation, n: Representation) -> Representation:
    if m.algebra != n.algebra:
        raise LieError("tensor product of representations of different algebras")
    im = SparseMatrix.identity(m.dim)
    iN = SparseMatrix.identity(n.dim)
    return Representation(m.algebra, m.dim * n.dim, [kron(a, iN) + kron(im, b) for a, b in zip(m.action, n.action)])


# ---------------------------------------------------------------------------
# semidirect products


def semidirect(s: LieAlgebra, r: LieAlgebra, action: Representation) -> LieAlgebra:
    """The product ``r ⋊ s`` with basis (r-basis, then s-lifts).

    ``action`` is a representation of ``s`` on the underlying space of ``r``
    whose operators must be derivations of ``r``.
    """
    if action.algebra != s or action.dim != r.dim:
        raise LieError("action must be a representation of s on the space of r")
    for a, op in enumerate(action.action):
        for u in range(r.dim):
            for v in range(u + 1, r.dim):
                lhs = op.matvec(Vector._trusted(r.dim, dict(r.bracket_basis(u, v))))
                rhs = r.bracket(op.column(u).entries, {v: Fraction(1)})
                for k, x in r.bracket({u: Fraction(1)}, op.column(v).entries).items():
                    rhs[k] = rhs.get(k, 0) + x
                rhs = {k: x for k, x in rhs.items() if x}
                if lhs.entries != rhs:
                    raise DerivationError(a, (u, v))
    k = r.dim
    labels = list(r.labels)
    for lab in s.labels:
        labels.append(lab if lab not in labels else f"{lab}'")
    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (i, j), c in r.brackets.items():
        brackets[(i, j)] = dict(c)
    for (i, j), c in s.brackets.items():
        brackets[(k + i, k + j)] = {k + t: x for t, x in c.items()}
    for a, op in enumerate(action.action):
        for v, col in enumerate(op.iter_columns()):
            # [v, x_a] = -action(x_a)(v)
            if col:
                brackets[(v, k + a)] = {t: -x for t, x in col.items()}
    return LieAlgebra(labels, brackets)


# ---------------------------------------------------------------------------
# invariants


def killing_form(g: LieAlgebra) -> list[list[Fraction]]:
    ads = [g.ad(i) for i in range(g.dim)]
    n = g.dim
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            prod = ads[i] @ ads[j]
            t = sum((prod[k, k] for k in range(n)), Fraction(0))
            out[i][j] = out[j][i] = t
    return out


def _span_brackets(g: LieAlgebra, basis: Sequence[Vector]) -> list[Vector]:
    vecs = []
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            vecs.append(Vector._trusted(g.dim, g.bracket(basis[a].entries, basis[b].entries)))
    if not vecs:
        return []
    return image_basis(SparseMatrix.from_columns(g.dim, vecs))


def derived_algebra(g: LieAlgebra) -> list[Vector]:
    return _span_brackets(g, [Vector(g.dim, {i: 1}) for i in range(g.dim)])


def derived_series(g: LieAlgebra, basis: Sequence[Vector] | None = None) -> list[int]:
    """Dimensions of the derived series of ``g`` (or of the subalgebra
    spanned by ``basis``) up to stabilization."""
    cur = list(basis) if basis is not None else [Vector(g.dim, {i: 1}) for i in range(g.dim)]
    dims = [len(cur)]
    while cur:
        nxt = _span_brackets(g, cur)
        dims.append(len(nxt))
        if len(nxt) == len(cur):
            break
        cur = nxt
    return dims


def is_solvable(g: LieAlgebra, basis: Sequence[Vector] | None = None) -> bool:
    return derived_series(g, basis)[-1] == 0


def is_perfect(g: LieAlgebra) -> bool:
    return len(derived_algebra(g)) == g.dim


def _in_span(basis: Sequence[Vector], v: Mapping[int, Fraction]) -> bool:
    ech = Echelon()
    for b in basis:
        ech.add(b.entries)
    return ech.express(v) is not None


def is_ideal(g: LieAlgebra, basis: Sequence[Vector]) -> bool:
    ech = Echelon()
    for b in basis:
        ech.add(b.entries)
    for i in range(g.dim):
        for b in basis:
            if ech.express(g.bracket({i: Fraction(1)}, b.entries)) is None:
                return False
    return True


def is_subalgebra(g: LieAlgebra, basis: Sequence[Vector]) -> bool:
    ech = Echelon()
    for b in basis:
        ech.add(b.entries)
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            if ech.express(g.bracket(basis[a].entries, basis[b].entries)) is None:
                return False
    return True


def radical(g: LieAlgebra) -> list[Vector]:
    """Solvable radical as the Killing-orthogonal complement of [g, g]."""
    kappa = killing_form(g)
    dg = derived_algebra(g)
    if not dg:
        return [Vector(g.dim, {i: 1}) for i in range(g.dim)]
    rows = [[sum((y[j] * kappa[j][i] for j in y.entries), Fraction(0)) for i in range(g.dim)] for y in dg]
    return kernel_basis(SparseMatrix.from_dense(rows, g.dim))


def change_basis(g: LieAlgebra, basis: Sequence[Vector], labels: Sequence[str] | None = None) -> LieAlgebra:
    """Rewrite ``g`` in a new basis given by coordinate vectors."""
    n = g.dim
    if len(basis) != n:
        raise LieError("a change of basis needs dim g vectors")
    ech = Echelon()
    for b in basis:
        if not ech.add(b.entries)[0]:
            raise LieError("new basis vectors are linearly dependent")
    brackets = {}
    for a in range(n):
        for b in range(a + 1, n):
            c = ech.express(g.bracket(basis[a].entries, basis[b].entries))
            assert c is not None
            if c:
                brackets[(a, b)] = c
    return LieAlgebra(labels or [f"b{i}" for i in range(n)], brackets)


# ---------------------------------------------------------------------------
# Levi data


@dataclass(frozen=True, eq=False)
class LeviData:
    """Split extension 0 -> r -> g -> s -> 0 in adapted coordinates.

    Basis vectors ``0 .. ideal_dim-1`` of ``total`` span the radical ``r``,
    the rest span the section (lifts of ``s``).
    """

    total: LieAlgebra
    ideal_dim: int
    radical: LieAlgebra
    quotient: LieAlgebra
    section_action: Representation

    @property
    def section_dim(self) -> int:
        return self.total.dim - self.ideal_dim

    def ideal_span(self) -> list[Vector]:
        return [Vector(self.total.dim, {i: 1}) for i in range(self.ideal_dim)]

    def section_span(self) -> list[Vector]:
        return [Vector(self.total.dim, {i: 1}) for i in range(self.ideal_dim, self.total.dim)]

    def check(self) -> list[str]:
        """List every broken invariant; empty when the data is consistent."""
        problems = []
        g, k = self.total, self.ideal_dim
        if self.radical.dim != k or self.quotient.dim != g.dim - k:
            problems.append("dimensions of radical and quotient do not add up")
            return problems
        if not is_ideal(g, self.ideal_span()):
            problems.append("r-span is not an ideal")
        if not is_solvable(self.radical):
            problems.append("radical is not solvable")
        for i in range(k):
            for j in range(i + 1, k):
                c = g.bracket_basis(i, j)
                if any(t >= k for t in c) or c != self.radical.bracket_basis(i, j):
                    problems.append(f"radical brackets disagree at ({i}, {j})")
        for a in range(self.section_dim):
            for b in range(a + 1, self.section_dim):
                c = g.bracket_basis(k + a, k + b)
                lifted = {t - k: x for t, x in c.items() if t >= k}
                if any(t < k for t in c):
                    problems.append(f"section span not bracket-closed at ({k + a}, {k + b})")
                if lifted != self.quotient.bracket_basis(a, b):
                    problems.append(f"quotient brackets disagree at ({a}, {b})")
        if self.section_action.algebra != self.quotient or self.section_action.dim != k:
            problems.append("section action has the wrong shape")
        else:
            for a, op in enumerate(self.section_action.action):
                if op != _block(g.ad(k + a), range(k), range(k)):
                    problems.append(f"section action of generator {a} disagrees with brackets")
        return problems


def _block(m: SparseMatrix, rows, cols) -> SparseMatrix:
    return m.submatrix(list(rows), list(cols))


def levi_from_semidirect(s: LieAlgebra, r: LieAlgebra, action: Representation) -> LeviData:
    g = semidirect(s, r, action)
    return LeviData(g, r.dim, r, s, action)


def levi_data(g: LieAlgebra, radical_basis: Sequence[Vector], section_basis: Sequence[Vector]) -> LeviData:
    """Assemble Levi data from a radical and a section given in ``g``'s coordinates.

    Raises :class:`LieError` when the radical is not a solvable ideal, the
    two spans are not complementary, or the section is not bracket-closed.
    """
    if len(radical_basis) + len(section_basis) != g.dim:
        raise LieError("radical and section dimensions must add up to dim g")
    if not is_ideal(g, radical_basis):
        raise LieError("radical span is not an ideal")
    if not is_solvable(g, radical_basis):
        raise LieError("radical span is not solvable")
    if not is_subalgebra(g, section_basis):
        raise LieError("section span is not bracket-closed")
    labels = []
    for v in list(radical_basis) + list(section_basis):
        if len(v.entries) == 1 and next(iter(v.entries.values())) == 1:
            labels.append(g.labels[next(iter(v.entries))])
        else:
            labels.append(f"v{len(labels)}")
    if len(set(labels)) != len(labels):
        labels = [f"v{i}" for i in range(g.dim)]
    total = change_basis(g, list(radical_basis) + list(section_basis), labels)
    k = len(radical_basis)
    rad = LieAlgebra(labels[:k], {(i, j): dict(total.bracket_basis(i, j)) for i in range(k) for j in range(i + 1, k)})
    quo = LieAlgebra(
        labels[k:],
        {
            (a, b): {t - k: x for t, x in total.bracket_basis(k + a, k + b).items()}
            for a in range(total.dim - k)
            for b in range(a + 1, total.dim - k)
        },
    )
    act = Representation(quo, k, [_block(total.ad(k + a), range(k), range(k)) for a in range(quo.dim)])
    ld = LeviData(total, k, rad, quo, act)
    problems = ld.check()
    if problems:
        raise LieError("; ".join(problems))
    return ld


def ideal_module(ld: LeviData) -> Representation:
    """r as a g-module (adjoint action restricted to the ideal)."""
    k = ld.ideal_dim
    g = ld.total
    return Representation(g, k, [_block(g.ad(i), range(k), range(k)) for i in range(g.dim)])


def quotient_module(ld: LeviData) -> Representation:
    """s = g/r as a g-module; r acts trivially."""
    k = ld.ideal_dim
    g = ld.total
    idx = range(k, g.dim)
    return Representation(g, g.dim - k, [_block(g.ad(i), idx, idx) for i in range(g.dim)])


def restrict_rep_via_section(ld: LeviData, m: Representation) -> Representation:
    """Pull a g-module back to s along the section x -> its lift."""
    if m.algebra != ld.total:
        raise LieError("module is not a representation of the total algebra")
    problems = ld.check()
    if problems:
        raise LieError("inconsistent Levi data: " + "; ".join(problems))
    return Representation(ld.quotient, m.dim, [m.action[ld.ideal_dim + a] for a in range(ld.section_dim)])


def stacked_action(m: Representation) -> SparseMatrix:
    """The map (dim g copies of M) -> M, (v_i) -> sum rho_i v_i."""
    if not m.action:
        return SparseMatrix.zeros(m.dim, 0)
    return hstack(list(m.action))
