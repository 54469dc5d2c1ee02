"""Exact linear algebra over the integers.

Smith normal form with transforms, integer solving, integer kernels and the
homology of two-periodic complexes of free abelian groups.  Everything uses
Python ints, so there is no overflow however large the entries grow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InvariantError


class IntMatrix:
    """Dense rectangular matrix of arbitrary-precision integers."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[int]] = (), rows: int | None = None,
                 cols: int | None = None):
        data = [[int(x) for x in row] for row in entries]
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise InvariantError("matrix is not rectangular with the stated shape")
        self.rows = rows
        self.cols = cols
        self.entries = data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def copy(self) -> "IntMatrix":
        return IntMatrix([row[:] for row in self.entries], self.rows, self.cols)

    def tolist(self) -> list[list[int]]:
        return [row[:] for row in self.entries]

    def transpose(self) -> "IntMatrix":
        return IntMatrix([[self.entries[i][j] for i in range(self.rows)]
                          for j in range(self.cols)], self.cols, self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise InvariantError(f"cannot multiply {self.shape} by {other.shape}")
        cols_b = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = [[sum(a * b for a, b in zip(row, col)) for col in cols_b]
               for row in self.entries]
        return IntMatrix(out, self.rows, other.cols)

    def apply(self, vec: Sequence[int]) -> list[int]:
        if len(vec) != self.cols:
            raise InvariantError("vector length does not match matrix columns")
        return [sum(a * b for a, b in zip(row, vec)) for row in self.entries]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.shape, tuple(map(tuple, self.entries))))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise InvariantError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def to_text(self) -> str:
        """Plain-text grid for debug dumps."""
        if not self.rows or not self.cols:
            return f"<{self.rows}x{self.cols} empty>"
        width = max(len(str(x)) for row in self.entries for x in row)
        return "\n".join(" ".join(str(x).rjust(width) for x in row) for row in self.entries)

    def __repr__(self) -> str:
        return f"IntMatrix({self.entries!r})"


def _as_matrix(m) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix(m)


def smith_normal_form(m) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ m @ V == D``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with nonnegative
    entries, each dividing the next.  Pivots are chosen by smallest absolute
    value, ties broken by lowest (row, column) index.
    """
    m = _as_matrix(m)
    r, c = m.shape
    a = m.tolist()
    u = IntMatrix.identity(r).entries
    v = IntMatrix.identity(c).entries

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(r, c)):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            clean = True
            p = a[t][t]
            for i in range(t + 1, r):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, c):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                # a remainder survived: bring the smallest one to the pivot
                cand = [(abs(a[i][t]), i, t) for i in range(t + 1, r) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t + 1, c) if a[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next((i for i in range(t + 1, r)
                        for j in range(t + 1, c) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    U, D, V = IntMatrix(u, r, r), IntMatrix(a, r, c), IntMatrix(v, c, c)
    assert U @ m @ V == D, "Smith normal form self-check failed"
    return U, D, V


def diagonal(d: IntMatrix) -> list[int]:
    """Nonzero diagonal entries of a Smith form, in order."""
    out = []
    for i in range(min(d.rows, d.cols)):
        if d[i, i] == 0:
            break
        out.append(d[i, i])
    return out


def rank(m) -> int:
    return len(diagonal(smith_normal_form(m)[1]))


def invariant_factors(m) -> list[int]:
    return diagonal(smith_normal_form(m)[1])


def solve_integer(m, b: Sequence[int]) -> list[int] | None:
    """Some integer ``x`` with ``m @ x == b``, or ``None`` if there is none.

    Free parameters of the solution space are set to zero in the Smith basis.
    """
    m = _as_matrix(m)
    b = [int(x) for x in b]
    if len(b) != m.rows:
        raise InvariantError("right-hand side length does not match matrix rows")
    if m.cols == 0:
        return [] if not any(b) else None
    U, D, V = smith_normal_form(m)
    rhs = U.apply(b)
    diag = diagonal(D)
    y = [0] * m.cols
    for i, d in enumerate(diag):
        q, rem = divmod(rhs[i], d)
        if rem:
            return None
        y[i] = q
    if any(rhs[len(diag):]):
        return None
    x = V.apply(y)
    assert m.apply(x) == b
    return x


def integer_kernel(m) -> list[list[int]]:
    """A basis of the integer kernel (a saturated sublattice) of ``m``."""
    m = _as_matrix(m)
    if m.cols == 0:
        return []
    _, D, V = smith_normal_form(m)
    r = len(diagonal(D))
    return [[V[i, j] for i in range(m.cols)] for j in range(r, m.cols)]


@dataclass(frozen=True)
class Homology:
    even_free: int
    even_torsion: tuple[int, ...]
    odd_free: int
    odd_torsion: tuple[int, ...]

    def is_zero(self) -> bool:
        return not (self.even_free or self.odd_free or self.even_torsion or self.odd_torsion)


@dataclass(frozen=True)
class IntComplex:
    """Two-periodic complex ``even --d_even--> odd --d_odd--> even``."""

    even_rank: int
    odd_rank: int
    d_even: IntMatrix = field(default=None)
    d_odd: IntMatrix = field(default=None)

    def __post_init__(self):
        de = self.d_even if self.d_even is not None else IntMatrix.zeros(self.odd_rank, self.even_rank)
        do = self.d_odd if self.d_odd is not None else IntMatrix.zeros(self.even_rank, self.odd_rank)
        de, do = _as_matrix(de), _as_matrix(do)
        if de.rows == 0 and self.odd_rank == 0:
            de = IntMatrix.zeros(0, self.even_rank)
        if do.rows == 0 and self.even_rank == 0:
            do = IntMatrix.zeros(0, self.odd_rank)
        if de.shape != (self.odd_rank, self.even_rank) or do.shape != (self.even_rank, self.odd_rank):
            raise InvariantError("differential shapes do not match the ranks")
        if not (do @ de).is_zero() or not (de @ do).is_zero():
            raise InvariantError("complex axiom violated: d∘d ≠ 0")
        object.__setattr__(self, "d_even", de)
        object.__setattr__(self, "d_odd", do)


def homology(c: IntComplex) -> Homology:
    """Free ranks and torsion of ``ker/im`` in each parity.

    Kernels of integer maps are saturated, so the torsion of the even group
    is exactly the nontrivial invariant factors of ``d_odd`` (and vice versa).
    """
    fe = invariant_factors(c.d_even)
    fo = invariant_factors(c.d_odd)
    return Homology(
        even_free=c.even_rank - len(fe) - len(fo),
        even_torsion=tuple(d for d in fo if d > 1),
        odd_free=c.odd_rank - len(fo) - len(fe),
        odd_torsion=tuple(d for d in fe if d > 1),
    )


def is_acyclic(c: IntComplex) -> bool:
    return homology(c).is_zero()


def _block(blocks: list[list[IntMatrix]], row_sizes, col_sizes) -> IntMatrix:
    out = []
    for bi, rs in enumerate(row_sizes):
        for i in range(rs):
            row = []
            for bj, cs in enumerate(col_sizes):
                blk = blocks[bi][bj]
                row.extend(blk.entries[i] if blk is not None else [0] * cs)
            out.append(row)
    return IntMatrix(out, sum(row_sizes), sum(col_sizes))


def mapping_cone(source: IntComplex, target: IntComplex, f_even, f_odd) -> IntComplex:
    """Cone of a parity-preserving chain map ``f: source -> target``.

    Even part is ``source_odd ⊕ target_even``; the differential is
    ``(x, y) ↦ (-d x, f x + d y)``.
    """
    f_even, f_odd = _as_matrix(f_even), _as_matrix(f_odd)
    if f_even.shape != (target.even_rank, source.even_rank) or \
            f_odd.shape != (target.odd_rank, source.odd_rank):
        raise InvariantError("chain map shape does not match the complexes")
    if f_odd @ source.d_even != target.d_even @ f_even or \
            f_even @ source.d_odd != target.d_odd @ f_odd:
        raise InvariantError("map does not commute with the differentials")
    neg = lambda m: IntMatrix([[-x for x in row] for row in m.entries], m.rows, m.cols)
    d_even = _block([[neg(source.d_odd), None], [f_odd, target.d_even]],
                    [source.even_rank, target.odd_rank], [source.odd_rank, target.even_rank])
    d_odd = _block([[neg(source.d_even), None], [f_even, target.d_odd]],
                   [source.odd_rank, target.even_rank], [source.even_rank, target.odd_rank])
    return IntComplex(source.odd_rank + target.even_rank, source.even_rank + target.odd_rank,
                      d_even, d_odd)
