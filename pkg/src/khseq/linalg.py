"""Exact linear algebra: GF(2) with bit-packed rows, and integer Smith form.

All GF(2) vectors in this package are plain Python ints; bit ``c`` of the
int is coordinate ``c``.  A matrix stores one int per row, so adding one
row to another is a single arbitrary-precision XOR.  That one trick keeps
the cube-of-resolutions computations fast enough in pure Python.

Integer matrices are kept as dense lists of lists.  They only appear in
the comparatively small per-bidegree blocks of a chain complex, where a
textbook Smith normal form with transform tracking is plenty.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple


class F2Matrix:
    """Matrix over GF(2); ``data[i]`` is row ``i`` packed into an int."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[int]):
        if len(data) != rows:
            raise ValueError(f"expected {rows} rows, got {len(data)}")
        mask = (1 << cols) - 1
        self.rows = rows
        self.cols = cols
        self.data = [r & mask for r in data]

    @classmethod
    def zero(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(rows, cols, [0] * rows)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence[int]]) -> "F2Matrix":
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        data = []
        for row in entries:
            acc = 0
            for c, e in enumerate(row):
                if e & 1:
                    acc |= 1 << c
            data.append(acc)
        return cls(rows, cols, data)

    def entry(self, i: int, c: int) -> int:
        return (self.data[i] >> c) & 1

    def column(self, c: int) -> int:
        """Column ``c`` packed into an int (bit ``i`` = entry in row ``i``)."""
        acc = 0
        for i, r in enumerate(self.data):
            acc |= ((r >> c) & 1) << i
        return acc

    def mul_vec(self, x: int) -> int:
        """Matrix times column vector; ``x`` has one bit per column."""
        acc = 0
        for i, r in enumerate(self.data):
            if (r & x).bit_count() & 1:
                acc |= 1 << i
        return acc

    def transpose(self) -> "F2Matrix":
        out = [0] * self.cols
        for i, r in enumerate(self.data):
            while r:
                low = r & -r
                out[low.bit_length() - 1] |= 1 << i
                r ^= low
        return F2Matrix(self.cols, self.rows, out)

    def matmul(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for r in self.data:
            acc = 0
            rr = r
            while rr:
                low = rr & -rr
                acc ^= other.data[low.bit_length() - 1]
                rr ^= low
            out.append(acc)
        return F2Matrix(self.rows, other.cols, out)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, F2Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self) -> str:
        return f"F2Matrix({self.rows}x{self.cols})"


def f2_rank_kernel(m: F2Matrix) -> Tuple[int, List[int]]:
    """Rank of ``m`` and a kernel basis, as packed vectors in reduced form.

    The kernel basis is the canonical one: one vector per free column,
    equal to 1 at its free column, 0 at every other free column, and
    determined at the pivot columns.  It is deterministic for fixed input.

    >>> f2_rank_kernel(F2Matrix.identity(3))
    (3, [])
    >>> rank, ker = f2_rank_kernel(F2Matrix.from_dense([[1, 1, 0], [0, 0, 1]]))
    >>> rank, [bin(v) for v in ker]
    (2, ['0b11'])
    """
    rows = list(m.data)
    nrows, ncols = m.rows, m.cols
    pivots: List[Tuple[int, int]] = []  # (row index, pivot column)
    r = 0
    for c in range(ncols):
        sel = -1
        for i in range(r, nrows):
            if (rows[i] >> c) & 1:
                sel = i
                break
        if sel < 0:
            continue
        rows[sel], rows[r] = rows[r], rows[sel]
        for i in range(nrows):
            if i != r and (rows[i] >> c) & 1:
                rows[i] ^= rows[r]
        pivots.append((r, c))
        r += 1
        if r == nrows:
            # remaining columns are all free
            break
    rank = r
    pivot_cols = {c for _, c in pivots}
    kernel: List[int] = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        v = 1 << f
        for t, p in pivots:
            if (rows[t] >> f) & 1:
                v |= 1 << p
        kernel.append(v)
    return rank, kernel


class F2Span:
    """Incremental GF(2) span with expression tracking.

    ``add`` feeds vectors one at a time; ``express(w)`` returns a bitmask
    over the indices of the added vectors (in call order) whose XOR is
    ``w``, or None when ``w`` lies outside the span.
    """

    __slots__ = ("_basis", "_n_added")

    def __init__(self) -> None:
        self._basis: dict[int, Tuple[int, int]] = {}  # pivot bit -> (vec, combo)
        self._n_added = 0

    def _reduce(self, v: int, combo: int) -> Tuple[int, int]:
        basis = self._basis
        while v:
            p = v.bit_length() - 1
            row = basis.get(p)
            if row is None:
                break
            v ^= row[0]
            combo ^= row[1]
        return v, combo

    def add(self, v: int) -> bool:
        """Add a vector; True when it enlarged the span."""
        combo = 1 << self._n_added
        self._n_added += 1
        v, combo = self._reduce(v, combo)
        if v == 0:
            return False
        self._basis[v.bit_length() - 1] = (v, combo)
        return True

    def reduce(self, v: int) -> int:
        """Residue of ``v`` after reduction against the current span."""
        return self._reduce(v, 0)[0]

    def contains(self, v: int) -> bool:
        return self._reduce(v, 0)[0] == 0

    def express(self, w: int) -> Optional[int]:
        v, combo = self._reduce(w, 0)
        return combo if v == 0 else None

    @property
    def dim(self) -> int:
        return len(self._basis)


def solve_f2(m: F2Matrix, b: int) -> Optional[int]:
    """One solution of M x = b over GF(2), or None if inconsistent.

    ``b`` is packed over the rows of ``m``; the result is packed over the
    columns.
    """
    span = F2Span()
    for c in range(m.cols):
        span.add(m.column(c))
    return span.express(b)


def echelon_reduce(vectors: Sequence[int]) -> List[int]:
    """Reduced echelon basis of the span of the given packed vectors.

    Rows are returned back-substituted and sorted by decreasing pivot, so
    the output is a canonical form of the subspace.
    """
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            p = v.bit_length() - 1
            if p not in basis:
                basis[p] = v
                break
            v ^= basis[p]
    pivs = sorted(basis, reverse=True)
    # back-substitute: clear each pivot bit from every other row
    for p in pivs:
        v = basis[p]
        for q in pivs:
            if q != p and (basis[q] >> p) & 1:
                basis[q] ^= v
    return [basis[p] for p in pivs]


class ZMatrix:
    """Dense integer matrix, row-major list of lists."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[Sequence[int]]):
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError("entry grid does not match declared shape")
        self.rows = rows
        self.cols = cols
        self.entries = [list(r) for r in entries]

    @classmethod
    def zero(cls, rows: int, cols: int) -> "ZMatrix":
        return cls(rows, cols, [[0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "ZMatrix":
        e = [[0] * n for _ in range(n)]
        for i in range(n):
            e[i][i] = 1
        return cls(n, n, e)

    def mod2(self) -> F2Matrix:
        return F2Matrix.from_dense(self.entries)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ZMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"ZMatrix({self.rows}x{self.cols})"


def z_matmul(a: ZMatrix, b: ZMatrix) -> ZMatrix:
    if a.cols != b.rows:
        raise ValueError("shape mismatch")
    bt = list(zip(*b.entries)) if b.entries else []
    out = []
    for ra in a.entries:
        if b.cols:
            out.append([sum(x * y for x, y in zip(ra, col)) for col in bt])
        else:
            out.append([])
    return ZMatrix(a.rows, b.cols, out)


def smith_normal_form(m: ZMatrix) -> Tuple[List[int], Tuple[ZMatrix, ZMatrix]]:
    """Smith normal form with transforms: U m V is diagonal.

    Returns (diagonal, (U, V)).  The diagonal has length min(rows, cols),
    entries are non-negative, and each divides the next.  U and V are
    unimodular (they are products of elementary integer operations).

    >>> d, _ = smith_normal_form(ZMatrix(2, 2, [[2, 0], [0, 3]]))
    >>> d
    [1, 6]
    """
    a = [row[:] for row in m.entries]
    nr, nc = m.rows, m.cols
    u = [row[:] for row in ZMatrix.identity(nr).entries]
    v = [row[:] for row in ZMatrix.identity(nc).entries]

    def row_op(i: int, j: int, q: int) -> None:
        # row i -= q * row j
        ai, aj = a[i], a[j]
        for c in range(nc):
            ai[c] -= q * aj[c]
        ui, uj = u[i], u[j]
        for c in range(nr):
            ui[c] -= q * uj[c]

    def col_op(i: int, j: int, q: int) -> None:
        # col i -= q * col j
        for r in range(nr):
            a[r][i] -= q * a[r][j]
        for r in range(nc):
            v[r][i] -= q * v[r][j]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for r in range(nr):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(nc):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    def near_q(x: int, p: int) -> int:
        # quotient rounded to nearest, so the remainder is at most |p| / 2
        q, r = divmod(x, p)
        if 2 * abs(r) > abs(p):
            q += 1
        return q

    t = 0
    n = min(nr, nc)
    while t < n:
        # move a least-magnitude nonzero entry of the trailing block to (t, t);
        # re-picking it every pass keeps the intermediate entries tame
        best = None
        best_abs = 0
        for i in range(t, nr):
            for j in range(t, nc):
                e = a[i][j]
                if e and (best is None or abs(e) < best_abs):
                    best = (i, j)
                    best_abs = abs(e)
        if best is None:
            break
        if best[0] != t:
            swap_rows(t, best[0])
        if best[1] != t:
            swap_cols(t, best[1])
        p = a[t][t]
        leftover = False
        for i in range(nr):
            if i != t and a[i][t]:
                row_op(i, t, near_q(a[i][t], p))
                leftover = leftover or a[i][t] != 0
        for j in range(nc):
            if j != t and a[t][j]:
                col_op(j, t, near_q(a[t][j], p))
                leftover = leftover or a[t][j] != 0
        if leftover:
            # some remainder survived; it is at most |p| / 2, so the next
            # pass picks a strictly smaller pivot
            continue
        offender = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if a[i][j] % p:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, -1)  # fold the offending row into the pivot row
            continue
        if p < 0:
            for c in range(nc):
                a[t][c] = -a[t][c]
            for c in range(nr):
                u[t][c] = -u[t][c]
        t += 1

    diag = [a[i][i] if i < t else 0 for i in range(n)]
    return diag, (ZMatrix(nr, nr, u), ZMatrix(nc, nc, v))


def z_rank(m: ZMatrix) -> int:
    """Rank over the rationals, by fraction-free elimination."""
    a = [row[:] for row in m.entries]
    nr, nc = m.rows, m.cols
    rank = 0
    r = 0
    for c in range(nc):
        sel = -1
        for i in range(r, nr):
            if a[i][c]:
                sel = i
                break
        if sel < 0:
            continue
        a[sel], a[r] = a[r], a[sel]
        for i in range(r + 1, nr):
            if a[i][c]:
                p, q = a[r][c], a[i][c]
                a[i] = [p * x - q * y for x, y in zip(a[i], a[r])]
        rank += 1
        r += 1
        if r == nr:
            break
    return rank


def integer_block_homology(
    d_out: ZMatrix, d_in: ZMatrix
) -> Tuple[int, List[int]]:
    """Free rank and torsion orders of ker(d_out)/im(d_in).

    ``d_out`` maps the block outward (its columns index the block);
    ``d_in`` maps into the block (its rows index the block).  Assumes
    the composite vanishes.  Torsion orders are the elementary divisors
    of ``d_in`` that exceed 1, smallest first.
    """
    if d_out.cols != d_in.rows:
        raise ValueError("block dimension mismatch between the two maps")
    dim = d_out.cols
    diag, _ = smith_normal_form(d_in)
    rank_in = sum(1 for d in diag if d)
    rank_out = z_rank(d_out)
    free = dim - rank_out - rank_in
    if free < 0:
        raise ValueError("maps do not compose to zero on this block")
    torsion = [d for d in diag if d > 1]
    return free, torsion


def mod4_lift_boundary(cycle: int, d4: ZMatrix) -> int:
    """Halved image of a lifted mod-2 cycle under a mod-4 differential.

    ``cycle`` is a packed GF(2) vector over the columns of ``d4``.  Lift
    its coordinates to {0, 1}, apply ``d4`` mod 4; every output entry is
    then even, and the bit returned for row ``i`` is entry(i)/2 mod 2.
    Raises ValueError when the input is not a cycle mod 2.
    """
    out = 0
    for i in range(d4.rows):
        row = d4.entries[i]
        s = 0
        c = cycle
        while c:
            low = c & -c
            s += row[low.bit_length() - 1]
            c ^= low
        s &= 3
        if s & 1:
            raise ValueError("input is not a mod-2 cycle for this differential")
        if s == 2:
            out |= 1 << i
    return out


if __name__ == "__main__":
    import doctest

    doctest.testmod()
