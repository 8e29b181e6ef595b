"""Linear algebra over F_q: RREF, kernels, canonical subspaces, exhaustive
subspace enumeration, and duals with respect to trace bilinear forms.

Subspaces are always stored through their reduced-row-echelon basis with
strictly increasing pivot columns, so two subspaces are equal as sets iff
their basis matrices are identical tuples.  The subspace enumeration is a
pure index computation (pivot-column subsets in lexicographic order, free
entries counted as base-q integers, most significant digit first), which
makes chunked parallel enumeration coordination-free.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import ParameterError
from .field import FieldContext, trace_to_prime


Row = tuple[int, ...]


def rref(rows: Sequence[Sequence[int]], q: int, cols: int | None = None):
    """Reduced row echelon form over F_q.

    Returns (rref_rows, rank, pivot_columns).  Zero rows are kept so the
    result is row-equivalent to the input; callers that want a basis drop
    them via the rank.
    """
    work = [list(int(x) % q for x in row) for row in rows]
    if cols is None:
        cols = len(work[0]) if work else 0
    nrows = len(work)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, nrows):
            if work[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        inv = pow(work[r][c], -1, q)
        work[r] = [(inv * x) % q for x in work[r]]
        for i in range(nrows):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [(x - f * y) % q for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in work), r, tuple(pivots)


@dataclass(frozen=True)
class FqMatrix:
    """A dense matrix over F_q (row-major tuples)."""

    q: int
    rows: tuple[Row, ...]
    cols: int

    @classmethod
    def from_rows(cls, q: int, rows: Iterable[Sequence[int]], cols: int | None = None) -> "FqMatrix":
        tup = tuple(tuple(int(x) % q for x in row) for row in rows)
        if cols is None:
            if not tup:
                raise ParameterError("column count required for empty matrix")
            cols = len(tup[0])
        if any(len(row) != cols for row in tup):
            raise ParameterError("ragged rows")
        return cls(q, tup, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.cols)

    def transpose(self) -> "FqMatrix":
        if not self.rows:
            return FqMatrix(self.q, tuple(() for _ in range(self.cols)), 0)
        return FqMatrix(self.q, tuple(zip(*self.rows)), len(self.rows))

    def mul(self, other: "FqMatrix") -> "FqMatrix":
        if self.cols != len(other.rows):
            raise ParameterError("dimension mismatch in matrix product")
        q = self.q
        ot = list(zip(*other.rows)) if other.rows else []
        out = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) % q for col in ot)
            for row in self.rows
        )
        return FqMatrix(q, out, other.cols)

    def apply(self, vec: Sequence[int]) -> Row:
        q = self.q
        return tuple(sum(a * b for a, b in zip(row, vec)) % q for row in self.rows)

    def rref(self):
        rows, rank, pivots = rref(self.rows, self.q, self.cols)
        return FqMatrix(self.q, rows, self.cols), rank, pivots

    def rank(self) -> int:
        return self.rref()[1]

    def kernel(self) -> "Subspace":
        """Canonical right null space {v : Mv = 0}."""
        rows, rank, pivots = rref(self.rows, self.q, self.cols)
        pivot_set = set(pivots)
        free = [j for j in range(self.cols) if j not in pivot_set]
        vecs = []
        for j in free:
            v = [0] * self.cols
            v[j] = 1
            for i, p in enumerate(pivots):
                v[p] = (-rows[i][j]) % self.q
            vecs.append(v)
        return span(self.q, self.cols, vecs)


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """An F_q-subspace given by its canonical RREF basis."""

    q: int
    ambient_dim: int
    basis: tuple[Row, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)

    @classmethod
    def zero(cls, q: int, ambient_dim: int) -> "Subspace":
        return cls(q, ambient_dim, ())

    @classmethod
    def full(cls, q: int, ambient_dim: int) -> "Subspace":
        rows = tuple(
            tuple(1 if i == j else 0 for j in range(ambient_dim))
            for i in range(ambient_dim)
        )
        return cls(q, ambient_dim, rows)

    def contains(self, vec: Sequence[int]) -> bool:
        q = self.q
        v = [int(x) % q for x in vec]
        for row, p in zip(self.basis, self.pivots):
            if v[p]:
                f = v[p]
                v = [(x - f * y) % q for x, y in zip(v, row)]
        return not any(v)

    def vectors(self) -> Iterator[Row]:
        """All q^dim member vectors (small subspaces only)."""
        q = self.q
        for coeffs in itertools.product(range(q), repeat=self.dim):
            v = [0] * self.ambient_dim
            for c, row in zip(coeffs, self.basis):
                if c:
                    for i, x in enumerate(row):
                        v[i] = (v[i] + c * x) % q
            yield tuple(v)

    def serialize(self) -> str:
        return ";".join("".join(str(x) for x in row) for row in self.basis)


def span(q: int, ambient_dim: int, vectors: Iterable[Sequence[int]]) -> Subspace:
    rows, rank, _ = rref(list(vectors), q, ambient_dim)
    return Subspace(q, ambient_dim, rows[:rank])


def intersect(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim or a.q != b.q:
        raise ParameterError("ambient mismatch in intersection")
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.q, a.ambient_dim)
    q = a.q
    # pairs (u, v) with u.A = v.B form the kernel of [A; B]^T up to sign
    stacked = list(a.basis) + [tuple((-x) % q for x in row) for row in b.basis]
    m = FqMatrix.from_rows(q, list(zip(*stacked)), cols=len(stacked))
    vecs = []
    for w in m.kernel().basis:
        u = w[: a.dim]
        v = [0] * a.ambient_dim
        for c, row in zip(u, a.basis):
            if c:
                for i, x in enumerate(row):
                    v[i] = (v[i] + c * x) % q
        vecs.append(v)
    return span(q, a.ambient_dim, vecs)


def dual(h: Subspace, gram: FqMatrix) -> Subspace:
    """{v : <u, v> = 0 for all u in h} under the bilinear form given by gram."""
    if h.ambient_dim != gram.cols or len(gram.rows) != gram.cols:
        raise ParameterError("gram dimension mismatch")
    if h.dim == 0:
        return Subspace.full(h.q, h.ambient_dim)
    bg = FqMatrix.from_rows(h.q, h.basis, h.ambient_dim).mul(gram)
    return bg.kernel()


# ---------------------------------------------------------------------------
# trace bilinear forms


def trace_gram(ctx: FieldContext) -> FqMatrix:
    """Gram matrix Tr(b_i b_j) of the power basis of F_{q^n}."""
    n = ctx.n
    basis = [ctx.from_int(ctx.q**i) if i else ctx.one() for i in range(n)]
    rows = tuple(
        tuple(trace_to_prime(basis[i] * basis[j]) for j in range(n))
        for i in range(n)
    )
    return FqMatrix(ctx.q, rows, n)


def product_trace_gram(ctx1: FieldContext, ctx2: FieldContext) -> FqMatrix:
    """Block-diagonal Gram for the flattened product field ambient."""
    if ctx1.q != ctx2.q:
        raise ParameterError("product ambient requires equal characteristic")
    g1, g2 = trace_gram(ctx1), trace_gram(ctx2)
    n1, n2 = ctx1.n, ctx2.n
    rows = []
    for i in range(n1):
        rows.append(g1.rows[i] + (0,) * n2)
    for i in range(n2):
        rows.append((0,) * n1 + g2.rows[i])
    return FqMatrix(ctx1.q, tuple(rows), n1 + n2)


# ---------------------------------------------------------------------------
# exhaustive enumeration of r-dimensional subspaces


def gaussian_binomial(n: int, r: int, q: int) -> int:
    """Number of r-dimensional subspaces of F_q^n."""
    if r < 0 or r > n:
        return 0
    result = 1
    for i in range(r):
        result = result * (q ** (n - i) - 1) // (q ** (i + 1) - 1)
    return result


def _pivot_blocks(n: int, r: int, q: int):
    """Yield (pivots, free_positions, block_size) in enumeration order."""
    for pivots in itertools.combinations(range(n), r):
        pset = set(pivots)
        free = [
            (i, j)
            for i in range(r)
            for j in range(pivots[i] + 1, n)
            if j not in pset
        ]
        yield pivots, free, q ** len(free)


def _basis_at(q: int, n: int, pivots, free, digits) -> tuple[Row, ...]:
    rows = [[0] * n for _ in pivots]
    for i, p in enumerate(pivots):
        rows[i][p] = 1
    for (i, j), d in zip(free, digits):
        rows[i][j] = d
    return tuple(tuple(row) for row in rows)


def enumerate_subspaces(
    n: int,
    r: int,
    q: int,
    chunk_index: int = 0,
    chunk_count: int = 1,
) -> Iterator[Subspace]:
    """All r-dimensional subspaces of F_q^n, each exactly once, canonical.

    With (chunk_index, chunk_count) the stream restricts to the
    index-contiguous slice [T*i//c, T*(i+1)//c) of the full order, where T
    is the Gaussian binomial count.
    """
    if r < 0 or r > n:
        raise ParameterError(f"subspace dimension {r} out of range for F_q^{n}")
    if chunk_count < 1 or chunk_index < 0 or chunk_index >= chunk_count:
        raise ParameterError("bad chunk specification")
    total = gaussian_binomial(n, r, q)
    start = total * chunk_index // chunk_count
    stop = total * (chunk_index + 1) // chunk_count
    pos = 0
    for pivots, free, size in _pivot_blocks(n, r, q):
        if pos + size <= start:
            pos += size
            continue
        if pos >= stop:
            break
        lo = max(0, start - pos)
        hi = min(size, stop - pos)
        digit_stream = itertools.product(range(q), repeat=len(free))
        for digits in itertools.islice(digit_stream, lo, hi):
            yield Subspace(q, n, _basis_at(q, n, pivots, free, digits))
        pos += size


def subspace_at_index(n: int, r: int, q: int, index: int) -> Subspace:
    """The subspace at a given position of the enumeration order."""
    total = gaussian_binomial(n, r, q)
    if index < 0 or index >= total:
        raise ParameterError(f"subspace index {index} out of range")
    pos = 0
    for pivots, free, size in _pivot_blocks(n, r, q):
        if pos + size <= index:
            pos += size
            continue
        offset = index - pos
        digits = []
        for t in range(len(free)):
            power = q ** (len(free) - 1 - t)
            digits.append(offset // power % q)
        return Subspace(q, n, _basis_at(q, n, pivots, free, tuple(digits)))
    raise AssertionError("unreachable")
