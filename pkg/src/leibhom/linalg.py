"""Exact sparse linear algebra over the rationals.

Matrices are stored column-wise as ``{row: Fraction}`` dicts.  Ranks are
computed by fraction-free integer elimination on the connected blocks of
the sparsity pattern; kernels, images and solves go through a tracked
rational echelon form so that bases come out deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Fraction",
    "SparseMatrix",
    "Vector",
    "Echelon",
    "DimensionMismatch",
    "rank",
    "rank_modular",
    "kernel_basis",
    "image_basis",
    "solve",
    "matmul",
    "to_fraction",
    "components",
]

# primes below 2**62; rank mod p <= rank over Q, equality for all but finitely many p
MODULAR_PRIMES = (4611686018427387847, 4611686018427387817, 4611686018427387787)


class DimensionMismatch(ValueError):
    pass


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point entries are not accepted")
    return Fraction(x)


class Vector:
    """Sparse vector of fixed dimension with no stored zeros."""

    __slots__ = ("dim", "entries")

    def __init__(self, dim: int, entries: Mapping[int, object] | None = None):
        self.dim = dim
        clean: dict[int, Fraction] = {}
        for i, x in (entries or {}).items():
            if not 0 <= i < dim:
                raise IndexError(f"index {i} out of range for dimension {dim}")
            x = to_fraction(x)
            if x:
                clean[i] = x
        self.entries = clean

    @classmethod
    def from_dense(cls, values: Sequence) -> Vector:
        return cls(len(values), {i: x for i, x in enumerate(values)})

    @classmethod
    def _trusted(cls, dim: int, entries: dict[int, Fraction]) -> Vector:
        v = cls.__new__(cls)
        v.dim = dim
        v.entries = entries
        return v

    def to_dense(self) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for i, x in self.entries.items():
            out[i] = x
        return out

    def __getitem__(self, i: int) -> Fraction:
        return self.entries.get(i, Fraction(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Vector):
            return NotImplemented
        return self.dim == other.dim and self.entries == other.entries

    def __repr__(self) -> str:
        return f"Vector({self.dim}, {dict(sorted(self.entries.items()))})"

    def is_zero(self) -> bool:
        return not self.entries


class SparseMatrix:
    """Immutable sparse matrix over Q, stored by columns."""

    __slots__ = ("rows", "cols", "_columns")

    def __init__(self, rows: int, cols: int, columns: Sequence[Mapping[int, object]] | None = None):
        self.rows = rows
        self.cols = cols
        if columns is None:
            self._columns: tuple[dict[int, Fraction], ...] = tuple({} for _ in range(cols))
            return
        if len(columns) != cols:
            raise DimensionMismatch(f"expected {cols} columns, got {len(columns)}")
        built = []
        for col in columns:
            clean = {}
            for r, x in col.items():
                if not 0 <= r < rows:
                    raise IndexError(f"row index {r} out of range for {rows} rows")
                x = to_fraction(x)
                if x:
                    clean[r] = x
            built.append(clean)
        self._columns = tuple(built)

    @classmethod
    def _trusted(cls, rows: int, cols: int, columns: Sequence[dict[int, Fraction]]) -> SparseMatrix:
        m = cls.__new__(cls)
        m.rows = rows
        m.cols = cols
        m._columns = tuple(columns)
        return m

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Mapping[tuple[int, int], object]) -> SparseMatrix:
        columns: list[dict[int, object]] = [{} for _ in range(cols)]
        for (r, c), x in entries.items():
            if not 0 <= c < cols:
                raise IndexError(f"column index {c} out of range for {cols} columns")
            columns[c][r] = x
        return cls(rows, cols, columns)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]], cols: int | None = None) -> SparseMatrix:
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        columns: list[dict[int, object]] = [{} for _ in range(cols)]
        for r, row in enumerate(data):
            if len(row) != cols:
                raise DimensionMismatch("ragged dense matrix")
            for c, x in enumerate(row):
                columns[c][r] = x
        return cls(rows, cols, columns)

    @classmethod
    def from_columns(cls, rows: int, vectors: Sequence[Vector]) -> SparseMatrix:
        for v in vectors:
            if v.dim != rows:
                raise DimensionMismatch("vector dimension does not match row count")
        return cls._trusted(rows, len(vectors), [dict(v.entries) for v in vectors])

    @classmethod
    def identity(cls, n: int) -> SparseMatrix:
        return cls._trusted(n, n, [{i: Fraction(1)} for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> SparseMatrix:
        return cls(rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> dict[tuple[int, int], Fraction]:
        return {(r, c): x for c, col in enumerate(self._columns) for r, x in col.items()}

    def column(self, j: int) -> Vector:
        return Vector._trusted(self.rows, dict(self._columns[j]))

    def iter_columns(self) -> Iterator[dict[int, Fraction]]:
        """Yield the raw column dicts; callers must not mutate them."""
        return iter(self._columns)

    def __getitem__(self, rc: tuple[int, int]) -> Fraction:
        r, c = rc
        return self._columns[c].get(r, Fraction(0))

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._columns)

    def is_zero(self) -> bool:
        return not any(self._columns)

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for c, col in enumerate(self._columns):
            for r, x in col.items():
                out[r][c] = x
        return out

    def transpose(self) -> SparseMatrix:
        columns: list[dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for c, col in enumerate(self._columns):
            for r, x in col.items():
                columns[r][c] = x
        return SparseMatrix._trusted(self.cols, self.rows, columns)

    T = property(transpose)

    def matvec(self, v: Vector) -> Vector:
        if v.dim != self.cols:
            raise DimensionMismatch(f"cannot apply {self.rows}x{self.cols} matrix to vector of dim {v.dim}")
        return Vector._trusted(self.rows, _combine(self._columns, v.entries))

    def __matmul__(self, other):
        if isinstance(other, Vector):
            return self.matvec(other)
        return matmul(self, other)

    def __add__(self, other: SparseMatrix) -> SparseMatrix:
        if self.shape != other.shape:
            raise DimensionMismatch("shape mismatch in addition")
        columns = []
        for a, b in zip(self._columns, other._columns):
            col = dict(a)
            for r, x in b.items():
                y = col.get(r, 0) + x
                if y:
                    col[r] = y
                else:
                    col.pop(r, None)
            columns.append(col)
        return SparseMatrix._trusted(self.rows, self.cols, columns)

    def __neg__(self) -> SparseMatrix:
        return self.scale(-1)

    def __sub__(self, other: SparseMatrix) -> SparseMatrix:
        return self + (-other)

    def scale(self, k) -> SparseMatrix:
        k = to_fraction(k)
        if not k:
            return SparseMatrix(self.rows, self.cols)
        return SparseMatrix._trusted(self.rows, self.cols, [{r: k * x for r, x in c.items()} for c in self._columns])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._columns == other._columns

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> SparseMatrix:
        pos = {r: i for i, r in enumerate(rows)}
        columns = []
        for c in cols:
            columns.append({pos[r]: x for r, x in self._columns[c].items() if r in pos})
        return SparseMatrix._trusted(len(rows), len(cols), columns)


def hstack(blocks: Sequence[SparseMatrix]) -> SparseMatrix:
    if not blocks:
        raise ValueError("nothing to stack")
    rows = blocks[0].rows
    columns: list[dict[int, Fraction]] = []
    for b in blocks:
        if b.rows != rows:
            raise DimensionMismatch("hstack needs equal row counts")
        columns.extend(dict(c) for c in b.iter_columns())
    return SparseMatrix._trusted(rows, len(columns), columns)


def block_diag(blocks: Sequence[SparseMatrix]) -> SparseMatrix:
    columns: list[dict[int, Fraction]] = []
    offset = 0
    for b in blocks:
        columns.extend({r + offset: x for r, x in c.items()} for c in b.iter_columns())
        offset += b.rows
    return SparseMatrix._trusted(offset, len(columns), columns)


def kron(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    columns = []
    for ca in a.iter_columns():
        for cb in b.iter_columns():
            columns.append({ra * b.rows + rb: xa * xb for ra, xa in ca.items() for rb, xb in cb.items()})
    return SparseMatrix._trusted(a.rows * b.rows, a.cols * b.cols, columns)


def _combine(columns: Sequence[Mapping[int, Fraction]], coeffs: Mapping[int, Fraction]) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for j, a in coeffs.items():
        for r, x in columns[j].items():
            y = out.get(r, 0) + a * x
            if y:
                out[r] = y
            else:
                del out[r]
    return out


def matmul(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    acols = a._columns
    return SparseMatrix._trusted(a.rows, b.cols, [_combine(acols, col) for col in b._columns])


# ---------------------------------------------------------------------------
# block structure


def components(m: SparseMatrix) -> list[tuple[list[int], list[int]]]:
    """Split ``m`` into the connected blocks of its bipartite sparsity graph.

    Returns ``(rows, cols)`` index lists, sorted, for every block that has at
    least one nonzero entry.  Rank, kernel and image all decompose over them.
    """
    parent = list(range(m.rows))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for col in m._columns:
        it = iter(col)
        first = next(it, None)
        if first is None:
            continue
        root = find(first)
        for r in it:
            other = find(r)
            if other != root:
                parent[other] = root
    blocks: dict[int, tuple[list[int], list[int]]] = {}
    for c, col in enumerate(m._columns):
        if col:
            root = find(next(iter(col)))
            blocks.setdefault(root, ([], []))[1].append(c)
    for r in range(m.rows):
        root = find(r)
        if root in blocks:
            blocks[root][0].append(r)
    return sorted(blocks.values(), key=lambda rc: rc[1][0])


# ---------------------------------------------------------------------------
# integer elimination (rank only)


def _integer_vectors(vectors: Iterable[Mapping[int, Fraction]]) -> list[dict[int, int]]:
    out = []
    for v in vectors:
        den = 1
        for x in v.values():
            if x.denominator != 1:
                den = lcm(den, x.denominator)
        out.append({i: int(x * den) for i, x in v.items()})
    return out


def _primitive(v: dict[int, int]) -> dict[int, int]:
    g = 0
    for x in v.values():
        g = gcd(g, x)
        if g == 1:
            return v
    if g > 1:
        return {i: x // g for i, x in v.items()}
    return v


def _rank_integer(vectors: list[dict[int, int]]) -> int:
    # process sparsest vectors first to limit fill-in
    vectors = sorted(vectors, key=len)
    pivots: dict[int, dict[int, int]] = {}
    for v in vectors:
        while v:
            lead = min(v)
            p = pivots.get(lead)
            if p is None:
                pivots[lead] = _primitive(v)
                break
            a, b = p[lead], v[lead]
            g = gcd(a, b)
            a //= g
            b //= g
            new = {i: a * x for i, x in v.items()} if a != 1 else dict(v)
            for i, x in p.items():
                y = new.get(i, 0) - b * x
                if y:
                    new[i] = y
                else:
                    new.pop(i, None)
            v = _primitive(new)
    return len(pivots)


def _rank_mod_p(vectors: list[dict[int, int]], p: int) -> int:
    vectors = sorted(vectors, key=len)
    pivots: dict[int, dict[int, int]] = {}
    for v in vectors:
        v = {i: x % p for i, x in v.items() if x % p}
        while v:
            lead = min(v)
            piv = pivots.get(lead)
            if piv is None:
                inv = pow(v[lead], -1, p)
                pivots[lead] = {i: x * inv % p for i, x in v.items()}
                break
            b = v[lead]
            for i, x in piv.items():
                y = (v.get(i, 0) - b * x) % p
                if y:
                    v[i] = y
                else:
                    v.pop(i, None)
    return len(pivots)


def _block_vectors(m: SparseMatrix, rows: list[int], cols: list[int]) -> list[dict[int, Fraction]]:
    # eliminate along whichever side has fewer vectors
    if len(cols) <= len(rows):
        return [m._columns[c] for c in cols]
    pos = {c: i for i, c in enumerate(cols)}
    row_vecs: dict[int, dict[int, Fraction]] = {r: {} for r in rows}
    for c in cols:
        for r, x in m._columns[c].items():
            row_vecs[r][pos[c]] = x
    return list(row_vecs.values())


def rank(m: SparseMatrix, modular: bool = False) -> int:
    """Rank over Q.

    With ``modular=True`` the rank is taken modulo several large primes and
    accepted when they agree; on disagreement the exact path is used.
    """
    if modular:
        return rank_modular(m)
    total = 0
    for rows, cols in components(m):
        if len(rows) == 1 or len(cols) == 1:
            total += 1
            continue
        total += _rank_integer(_integer_vectors(_block_vectors(m, rows, cols)))
    return total


def rank_modular(m: SparseMatrix, primes: Sequence[int] = MODULAR_PRIMES) -> int:
    total = 0
    for rows, cols in components(m):
        vecs = _integer_vectors(_block_vectors(m, rows, cols))
        found = {_rank_mod_p(vecs, p) for p in primes}
        total += found.pop() if len(found) == 1 else _rank_integer(vecs)
    return total


# ---------------------------------------------------------------------------
# tracked rational echelon form


class Echelon:
    """Incremental echelon basis over Q that remembers how it was built.

    Vectors are added one at a time with :meth:`add`; each added vector gets
    the next integer id.  :meth:`express` writes a vector as a combination
    of previously added vectors, and a dependent :meth:`add` reports the
    relation it satisfies.
    """

    def __init__(self):
        self._pivots: dict[int, tuple[dict[int, Fraction], dict[int, Fraction]]] = {}
        self.count = 0
        self.independent: list[int] = []

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def _reduce(self, v: Mapping[int, Fraction]) -> tuple[dict[int, Fraction], dict[int, Fraction]]:
        # returns (residual, combo) with v = residual + sum(combo[id] * added[id])
        v = dict(v)
        combo: dict[int, Fraction] = {}
        pivots = self._pivots
        done: set[int] = set()
        while True:
            keys = [k for k in v if k in pivots and k not in done]
            if not keys:
                return v, combo
            k = min(keys)
            done.add(k)
            c = v.get(k)
            if not c:
                continue
            pvec, pcombo = pivots[k]
            for i, x in pvec.items():
                y = v.get(i, 0) - c * x
                if y:
                    v[i] = y
                else:
                    v.pop(i, None)
            for i, x in pcombo.items():
                y = combo.get(i, 0) + c * x
                if y:
                    combo[i] = y
                else:
                    combo.pop(i, None)

    def add(self, v: Mapping[int, Fraction]) -> tuple[bool, dict[int, Fraction]]:
        """Add ``v``.  Returns ``(independent, relation)``.

        When ``v`` is dependent, ``relation`` holds coefficients ``c`` with
        ``added[new_id] = sum(c[id] * added[id])``; otherwise it is empty.
        """
        vid = self.count
        self.count += 1
        residual, combo = self._reduce(v)
        if not residual:
            return False, combo
        lead = min(residual)
        inv = 1 / residual[lead]
        pvec = {i: x * inv for i, x in residual.items()}
        pcombo = {i: -x * inv for i, x in combo.items()}
        pcombo[vid] = inv
        self._pivots[lead] = (pvec, pcombo)
        self.independent.append(vid)
        return True, {}

    def express(self, v: Mapping[int, Fraction]) -> dict[int, Fraction] | None:
        residual, combo = self._reduce(v)
        if residual:
            return None
        return combo


def _column_relations(m: SparseMatrix, cols: Sequence[int]) -> tuple[list[int], list[tuple[int, dict[int, Fraction]]]]:
    """Echelon the given columns in order; return pivot columns and relations."""
    ech = Echelon()
    pivots = []
    relations = []
    for c in cols:
        ok, rel = ech.add(m._columns[c])
        if ok:
            pivots.append(c)
        else:
            relations.append((c, {cols[i]: x for i, x in rel.items()}))
    return pivots, relations


def kernel_basis(m: SparseMatrix) -> list[Vector]:
    """Basis of the null space, one vector per non-pivot column, in column order."""
    out: dict[int, Vector] = {}
    for c, col in enumerate(m._columns):
        if not col:
            out[c] = Vector._trusted(m.cols, {c: Fraction(1)})
    for _rows, cols in components(m):
        _pivots, relations = _column_relations(m, cols)
        for c, rel in relations:
            entries = {i: -x for i, x in rel.items()}
            entries[c] = Fraction(1)
            out[c] = Vector._trusted(m.cols, entries)
    return [out[c] for c in sorted(out)]


def image_basis(m: SparseMatrix) -> list[Vector]:
    """Independent columns of ``m`` (leftmost choice), spanning its column space."""
    chosen: list[int] = []
    for _rows, cols in components(m):
        pivots, _ = _column_relations(m, cols)
        chosen.extend(pivots)
    return [m.column(c) for c in sorted(chosen)]


def solve(m: SparseMatrix, b: Vector) -> Vector | None:
    """Some ``x`` with ``m @ x == b``, or ``None`` when ``b`` is not in the image."""
    if b.dim != m.rows:
        raise DimensionMismatch(f"right-hand side has dim {b.dim}, matrix has {m.rows} rows")
    if b.is_zero():
        return Vector(m.cols)
    nonempty = [c for c, col in enumerate(m._columns) if col]
    ech = Echelon()
    for c in nonempty:
        ech.add(m._columns[c])
    combo = ech.express(b.entries)
    if combo is None:
        return None
    return Vector._trusted(m.cols, {nonempty[i]: x for i, x in combo.items()})
