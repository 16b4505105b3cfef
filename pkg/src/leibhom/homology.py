"""Betti numbers, homology bases, induced maps and coinvariants.

Cohomology is never computed directly: the dimension of a cohomology
space with dual coefficients is read off the homology with the original
coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .complexes import ChainComplex, ExteriorIndexer, Kind, TensorIndexer, build_complex
from .lie import (
    LeviData,
    LieAlgebra,
    Representation,
    quotient_module,
    restrict_rep_via_section,
    stacked_action,
    tensor_rep,
    trivial_rep,
    validate_rep,
)
from .linalg import Echelon, SparseMatrix, Vector, matmul, rank


class DegreeOutOfRange(IndexError):
    pass


class ChainMapError(RuntimeError):
    """A supplied map does not commute with the boundaries."""


def _require(c: ChainComplex, n: int) -> None:
    if n < 0:
        raise DegreeOutOfRange("negative degree")
    if not c.complete and n + 1 > c.max_degree:
        raise DegreeOutOfRange(
            f"degree {n} needs boundaries through {n + 1}; complex stops at {c.max_degree}"
        )


def betti(c: ChainComplex, n: int, modular: bool = False) -> int:
    _require(c, n)
    return c.dim(n) - c.boundary_rank(n, modular) - c.boundary_rank(n + 1, modular)


def betti_numbers(c: ChainComplex, modular: bool = False) -> list[int]:
    """Betti numbers of every degree whose outgoing and incoming boundaries exist."""
    top = c.max_degree if c.complete else c.max_degree - 1
    return [betti(c, n, modular) for n in range(top + 1)]


# ---------------------------------------------------------------------------
# homology bases


@dataclass
class _Block:
    indices: list[int]
    echelon: Echelon
    rep_ids: dict[int, int]  # echelon id -> position in the representative list


@dataclass(eq=False)
class HomologyBasis:
    degree: int
    representatives: list[Vector]
    ambient_dim: int
    _blocks: list[_Block] = field(default_factory=list, repr=False)
    _block_of: dict[int, int] = field(default_factory=dict, repr=False)

    @property
    def count(self) -> int:
        return len(self.representatives)

    def express(self, cycle: Vector) -> list[Fraction]:
        """Coordinates of the class of ``cycle`` in this basis.

        Raises ``ValueError`` if ``cycle`` is not a cycle of the complex.
        """
        parts: dict[int, dict[int, Fraction]] = {}
        for i, x in cycle.entries.items():
            parts.setdefault(self._block_of[i], {})[i] = x
        out = [Fraction(0)] * self.count
        for b, part in parts.items():
            block = self._blocks[b]
            combo = block.echelon.express(part)
            if combo is None:
                raise ValueError("vector is not a cycle")
            for vid, x in combo.items():
                pos = block.rep_ids.get(vid)
                if pos is not None:
                    out[pos] += x
        return out


def _chain_blocks(dim: int, d_out: SparseMatrix, d_in: SparseMatrix) -> list[list[int]]:
    """Partition degree-n chain indices so both boundaries split along it."""
    parent = list(range(dim))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        a, b = find(a), find(b)
        if a != b:
            parent[b] = a

    for col in d_in.iter_columns():
        it = iter(col)
        first = next(it, None)
        for r in it:
            union(first, r)
    seen_row: dict[int, int] = {}
    for c, col in enumerate(d_out.iter_columns()):
        for r in col:
            if r in seen_row:
                union(seen_row[r], c)
            else:
                seen_row[r] = c
    groups: dict[int, list[int]] = {}
    for i in range(dim):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def homology_basis(c: ChainComplex, n: int) -> HomologyBasis:
    """Cycles completing an image basis of the incoming boundary to the kernel.

    Works block by block over the joint sparsity pattern of the two
    boundaries; within a block, image columns go in first (index order),
    then kernel vectors in index order, and the kernel vectors that stay
    independent become representatives.
    """
    _require(c, n)
    d_out, d_in = c.boundary(n), c.boundary(n + 1)
    dim = c.dim(n)
    out_cols = list(d_out.iter_columns())
    in_by_block: dict[int, list[dict[int, Fraction]]] = {}
    groups = _chain_blocks(dim, d_out, d_in)
    block_of = {i: b for b, grp in enumerate(groups) for i in grp}
    for col in d_in.iter_columns():
        if col:
            in_by_block.setdefault(block_of[next(iter(col))], []).append(col)

    reps: list[Vector] = []
    blocks: list[_Block] = []
    for b, grp in enumerate(groups):
        ker_ech = Echelon()
        kernel = []
        for i in grp:
            ok, rel = ker_ech.add(out_cols[i])
            if not ok:
                v = {grp[k]: -x for k, x in rel.items()}
                v[i] = Fraction(1)
                kernel.append(v)
        ech = Echelon()
        for col in in_by_block.get(b, []):
            ech.add(col)
        rep_ids = {}
        for v in kernel:
            vid = ech.count
            ok, _ = ech.add(v)
            if ok:
                rep_ids[vid] = len(reps)
                reps.append(Vector._trusted(dim, v))
        blocks.append(_Block(grp, ech, rep_ids))
    return HomologyBasis(n, reps, dim, blocks, block_of)


# ---------------------------------------------------------------------------
# induced maps


@dataclass(frozen=True, eq=False)
class InducedMap:
    source: HomologyBasis
    target: HomologyBasis
    matrix: SparseMatrix

    @property
    def rank(self) -> int:
        return rank(self.matrix)

    @property
    def is_bijective(self) -> bool:
        return self.source.count == self.target.count == self.rank


def check_chain_map(f: Mapping[int, SparseMatrix], src: ChainComplex, dst: ChainComplex, n: int) -> None:
    """Exact check of f∘d = d∘f at degrees n and n+1."""
    for k in (n, n + 1):
        if k < 1:
            continue
        if k not in f or k - 1 not in f:
            raise ChainMapError(f"chain map missing degree {k} or {k - 1}")
        lhs = matmul(f[k - 1], src.boundary(k))
        rhs = matmul(dst.boundary(k), f[k])
        if lhs != rhs:
            raise ChainMapError(f"map does not commute with boundaries at degree {k}")


def induced_on_homology(
    f: Mapping[int, SparseMatrix],
    src: ChainComplex,
    dst: ChainComplex,
    n: int,
    src_basis: HomologyBasis | None = None,
    dst_basis: HomologyBasis | None = None,
) -> InducedMap:
    check_chain_map(f, src, dst, n)
    sb = src_basis or homology_basis(src, n)
    tb = dst_basis or homology_basis(dst, n)
    fn = f[n]
    columns = []
    for v in sb.representatives:
        coords = tb.express(fn.matvec(v))
        columns.append({i: x for i, x in enumerate(coords) if x})
    return InducedMap(sb, tb, SparseMatrix._trusted(tb.count, sb.count, columns))


def chain_action(c: ChainComplex, derivation: SparseMatrix, coefficient_action: SparseMatrix, n: int) -> SparseMatrix:
    """Degree-n matrix of a derivation D of the algebra acting together with
    an operator on the coefficients: m⊗x_1..x_n -> Dm⊗x + sum m⊗..Dx_k..
    """
    g = c.algebra
    mdim = c.coefficients.dim
    dcols = [list(col.items()) for col in derivation.iter_columns()]
    acols = [list(col.items()) for col in coefficient_action.iter_columns()]
    if c.kind is Kind.LODAY:
        idx = TensorIndexer(g.dim, n)
        words = list(idx)
    else:
        idx = ExteriorIndexer(g.dim, n)
        words = list(idx)
    size = idx.size
    columns = []
    for cc in range(mdim):
        for w in words:
            col: dict[int, Fraction] = {}

            def put(r: int, a: Fraction) -> None:
                y = col.get(r, 0) + a
                if y:
                    col[r] = y
                else:
                    del col[r]

            code = idx.encode(w)
            for c2, a in acols[cc]:
                put(c2 * size + code, a)
            for k, x in enumerate(w):
                for y, a in dcols[x]:
                    w2 = w[:k] + (y,) + w[k + 1:]
                    if c.kind is Kind.LODAY:
                        put(cc * size + idx.encode(w2), a)
                    else:
                        sign, s = ExteriorIndexer.sort_sign(w2)
                        if sign:
                            put(cc * size + idx.encode(s), sign * a)
            columns.append(col)
    return SparseMatrix._trusted(mdim * size, mdim * size, columns)


def rep_on_homology(
    c: ChainComplex,
    acting: LieAlgebra,
    derivations: Sequence[SparseMatrix],
    n: int,
    coefficient_actions: Sequence[SparseMatrix] | None = None,
) -> Representation:
    """Representation of ``acting`` on H_n(c), one generator per derivation.

    Each generator acts on chains through :func:`chain_action`; that action
    must commute with the boundaries (checked exactly).
    """
    mdim = c.coefficients.dim
    if coefficient_actions is None:
        coefficient_actions = [SparseMatrix.zeros(mdim, mdim) for _ in derivations]
    basis = homology_basis(c, n)
    mats = []
    for der, act in zip(derivations, coefficient_actions):
        f = {k: chain_action(c, der, act, k) for k in range(max(n - 1, 0), n + 2)}
        mats.append(induced_on_homology(f, c, c, n, basis, basis).matrix)
    rep = Representation(acting, basis.count, mats)
    bad = validate_rep(rep)
    if bad is not None:
        raise ChainMapError(f"induced action is not a representation: {bad}")
    return rep


def coinvariants_dim(m: Representation, modular: bool = False) -> int:
    """dim M/(g.M): dim M minus the rank of the stacked action map."""
    if m.dim == 0:
        return 0
    return m.dim - rank(stacked_action(m), modular=modular)


# ---------------------------------------------------------------------------
# Hochschild-Serre decomposition


def radical_homology_reps(ld: LeviData, qmax: int) -> list[Representation]:
    """s-modules H_q(r) for q = 0..qmax, s acting through the section."""
    r = ld.radical
    c = build_complex(r, trivial_rep(r), Kind.CE, r.dim)
    s = ld.quotient
    ders = list(ld.section_action.action)
    out = []
    for q in range(qmax + 1):
        if q > r.dim:
            out.append(trivial_rep(s, 0))
        else:
            out.append(rep_on_homology(c, s, ders, q))
    return out


@dataclass(frozen=True)
class HSRow:
    degree: int
    lhs: int
    rhs: int
    terms: tuple[tuple[int, int, int, int], ...]  # (p, q, dim H_p(s), coinvariants)

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def hochschild_serre_check(ld: LeviData, max_degree: int, modular: bool = False) -> list[HSRow]:
    """Compare dim H_n(g, s) with sum_{p+q=n} dim H_p(s) * dim H_0(s, H_q(r) ⊗ s)."""
    g, s = ld.total, ld.quotient
    lhs_c = build_complex(g, quotient_module(ld), Kind.CE, g.dim)
    s_c = build_complex(s, trivial_rep(s), Kind.CE, s.dim)
    s_adj = restrict_rep_via_section(ld, quotient_module(ld))
    hr = radical_homology_reps(ld, max_degree)
    coinv = [coinvariants_dim(tensor_rep(h, s_adj), modular) for h in hr]
    rows = []
    for n in range(max_degree + 1):
        terms = []
        for p in range(n + 1):
            q = n - p
            hp = betti(s_c, p, modular)
            terms.append((p, q, hp, coinv[q]))
        rhs = sum(hp * cq for _, _, hp, cq in terms)
        rows.append(HSRow(n, betti(lhs_c, n, modular), rhs, tuple(terms)))
    return rows
