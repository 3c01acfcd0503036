"""Exact linear algebra over the integers and rationals.

Everything here is computed with Python ints and ``fractions.Fraction``;
floats are rejected at construction time.  The module provides the three
workhorses the rest of the package is built on:

* ``snf``: Smith normal form with unimodular transforms, using a
  deterministic minimal-pivot scan so results are reproducible.
* ``kernel_lattice``: a saturated basis of the integer kernel.
* ``cochain_cohomology``: the finitely generated abelian group
  ker(d_out)/im(d_in) of one degree of a cochain complex.

>>> S = snf(Matrix([[2, 0], [0, 3]])).S
>>> S.data
[[1, 0], [0, 6]]
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InvariantViolation

Scalar = int | Fraction


def _check_scalar(x) -> Scalar:
    if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
        raise InvariantViolation(f"matrix entries must be int or Fraction, got {type(x).__name__}")
    return x


class Matrix:
    """A dense matrix with exact int/Fraction entries.

    Shapes with zero rows or zero columns are allowed; they show up
    naturally at the ends of cochain complexes.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence[Scalar]], cols: int | None = None):
        data = [list(row) for row in data]
        if data:
            ncols = len(data[0])
        else:
            if cols is None:
                cols = 0
            ncols = cols
        for row in data:
            if len(row) != ncols:
                raise InvariantViolation("ragged matrix data")
            for x in row:
                _check_scalar(x)
        self.rows = len(data)
        self.cols = ncols
        self.data = data

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def from_cols(cls, cols: Sequence[Sequence[Scalar]], rows: int | None = None) -> "Matrix":
        if not cols:
            return cls.zeros(rows or 0, 0)
        n = len(cols[0])
        return cls([[col[i] for col in cols] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def copy(self) -> "Matrix":
        return Matrix([row[:] for row in self.data], cols=self.cols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.shape == other.shape
            and all(self.data[i][j] == other.data[i][j] for i in range(self.rows) for j in range(self.cols))
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __repr__(self) -> str:
        return f"Matrix({self.data!r})"

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise InvariantViolation("shape mismatch in matrix addition")
        return Matrix(
            [[self.data[i][j] + other.data[i][j] for j in range(self.cols)] for i in range(self.rows)],
            cols=self.cols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return Matrix([[-x for x in row] for row in self.data], cols=self.cols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise InvariantViolation("shape mismatch in matrix product")
        out = [[0] * other.cols for _ in range(self.rows)]
        for i in range(self.rows):
            row = self.data[i]
            for k in range(self.cols):
                a = row[k]
                if a == 0:
                    continue
                orow = other.data[k]
                orow_out = out[i]
                for j in range(other.cols):
                    orow_out[j] += a * orow[j]
        return Matrix(out, cols=other.cols)

    def scale(self, c: Scalar) -> "Matrix":
        _check_scalar(c)
        return Matrix([[c * x for x in row] for row in self.data], cols=self.cols)

    def transpose(self) -> "Matrix":
        return Matrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def col(self, j: int) -> list[Scalar]:
        return [self.data[i][j] for i in range(self.rows)]

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise InvariantViolation("shape mismatch in hstack")
        return Matrix(
            [self.data[i] + other.data[i] for i in range(self.rows)],
            cols=self.cols + other.cols,
        )

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise InvariantViolation("shape mismatch in vstack")
        return Matrix(self.data + other.data, cols=self.cols)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    def is_integer(self) -> bool:
        return all(isinstance(x, int) or x.denominator == 1 for row in self.data for x in row)

    def to_int(self) -> "Matrix":
        if not self.is_integer():
            raise InvariantViolation("matrix has non-integer entries")
        return Matrix([[int(x) for x in row] for row in self.data], cols=self.cols)

    def det(self) -> Scalar:
        """Determinant by fraction-free elimination on a working copy."""
        if self.rows != self.cols:
            raise InvariantViolation("determinant of a non-square matrix")
        n = self.rows
        a = [[Fraction(x) for x in row] for row in self.data]
        det = Fraction(1)
        for k in range(n):
            piv = next((i for i in range(k, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            if piv != k:
                a[k], a[piv] = a[piv], a[k]
                det = -det
            det *= a[k][k]
            inv = 1 / a[k][k]
            for i in range(k + 1, n):
                f = a[i][k] * inv
                if f:
                    for j in range(k, n):
                        a[i][j] -= f * a[k][j]
        return int(det) if det.denominator == 1 else det

    def rank(self) -> int:
        a = [[Fraction(x) for x in row] for row in self.data]
        rank = 0
        for j in range(self.cols):
            piv = next((i for i in range(rank, self.rows) if a[i][j] != 0), None)
            if piv is None:
                continue
            a[rank], a[piv] = a[piv], a[rank]
            inv = 1 / a[rank][j]
            for i in range(self.rows):
                if i != rank and a[i][j] != 0:
                    f = a[i][j] * inv
                    for jj in range(j, self.cols):
                        a[i][jj] -= f * a[rank][jj]
            rank += 1
        return rank


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ M @ V == S with U, V unimodular and S in Smith normal form."""

    U: Matrix
    S: Matrix
    V: Matrix

    def diagonal(self) -> list[int]:
        return [self.S.data[i][i] for i in range(min(self.S.rows, self.S.cols))]

    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal() if d != 0]

    def rank(self) -> int:
        return len(self.invariant_factors())


def snf(M: Matrix) -> SmithDecomposition:
    """Smith normal form over the integers.

    The pivot at each step is the submatrix entry of minimal nonzero
    absolute value, scanned row-major, which makes the transforms
    deterministic.  Diagonal entries come out nonnegative and each
    divides the next.

    >>> snf(Matrix([[2, 4], [6, 8]])).diagonal()
    [2, 4]
    """
    if not M.is_integer():
        raise InvariantViolation("snf requires an integer matrix")
    m, n = M.shape
    S = [[int(x) for x in row] for row in M.data]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        if i != j:
            S[i], S[j] = S[j], S[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in S:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row_dst -= q * row_src
        if q:
            Ssrc, Sdst = S[src], S[dst]
            for j in range(n):
                Sdst[j] -= q * Ssrc[j]
            Usrc, Udst = U[src], U[dst]
            for j in range(m):
                Udst[j] -= q * Usrc[j]

    def add_col(src, dst, q):
        # col_dst -= q * col_src
        if q:
            for row in S:
                row[dst] -= q * row[src]
            for row in V:
                row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = S[i][j]
                if v != 0 and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, bi, bj = best
        swap_rows(t, bi)
        swap_cols(t, bj)

        cleared = True
        for i in range(t + 1, m):
            if S[i][t] % S[t][t] == 0:
                add_row(t, i, S[i][t] // S[t][t])
            else:
                add_row(t, i, S[i][t] // S[t][t])
                cleared = False
        for j in range(t + 1, n):
            if S[t][j] % S[t][t] == 0:
                add_col(t, j, S[t][j] // S[t][t])
            else:
                add_col(t, j, S[t][j] // S[t][t])
                cleared = False
        if not cleared:
            continue

        # pivot row and column are zero; enforce divisibility of the rest
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if S[i][j] % S[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, -1)
            continue
        if S[t][t] < 0:
            for j in range(n):
                S[t][j] = -S[t][j]
            for j in range(m):
                U[t][j] = -U[t][j]
        t += 1

    return SmithDecomposition(Matrix(U, cols=m), Matrix(S, cols=n), Matrix(V, cols=n))


def invariant_factors(M: Matrix) -> list[int]:
    return snf(M).invariant_factors()


def kernel_lattice(M: Matrix) -> Matrix:
    """Columns form a basis of ker(M) over the integers.

    The basis is saturated: it spans a direct summand, because its
    columns extend to a unimodular matrix (they are columns of the V
    transform of the Smith decomposition).

    >>> kernel_lattice(Matrix([[2, 0]])).data
    [[0], [1]]
    """
    dec = snf(M)
    r = dec.rank()
    cols = [dec.V.col(j) for j in range(r, M.cols)]
    return Matrix.from_cols(cols, rows=M.cols)


def solve_rational(A: Matrix, B: Matrix) -> Matrix:
    """Solve A @ X = B exactly, for A with full column rank.

    Raises if the system is inconsistent or A is column-rank-deficient.
    """
    m, n = A.shape
    if B.rows != m:
        raise InvariantViolation("shape mismatch in solve")
    k = B.cols
    a = [[Fraction(x) for x in A.data[i]] + [Fraction(x) for x in B.data[i]] for i in range(m)]
    pivots = []
    row = 0
    for j in range(n):
        piv = next((i for i in range(row, m) if a[i][j] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = 1 / a[row][j]
        for i in range(m):
            if i != row and a[i][j] != 0:
                f = a[i][j] * inv
                for jj in range(j, n + k):
                    a[i][jj] -= f * a[row][jj]
        pivots.append(j)
        row += 1
    if len(pivots) < n:
        raise InvariantViolation("solve: matrix does not have full column rank")
    for i in range(row, m):
        if any(a[i][j] != 0 for j in range(n, n + k)):
            raise InvariantViolation("solve: inconsistent linear system")
    out = [[Fraction(0)] * k for _ in range(n)]
    for r_i, j in enumerate(pivots):
        scale = a[r_i][j]
        for c in range(k):
            out[j][c] = a[r_i][n + c] / scale
    X = Matrix(out, cols=k)
    return X


def solve_integer(A: Matrix, B: Matrix) -> Matrix:
    """Like ``solve_rational`` but insists the solution is integral."""
    X = solve_rational(A, B)
    if not X.is_integer():
        raise InvariantViolation("solve: solution is not integral")
    return X.to_int()


@dataclass(frozen=True)
class AbelianGroupInv:
    """A finitely generated abelian group Z^rank + sum of Z/d.

    ``torsion`` is the canonical invariant-factor chain: each entry is
    at least 2 and divides the next.
    """

    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise InvariantViolation("negative rank")
        prev = None
        for d in self.torsion:
            if d < 2:
                raise InvariantViolation("torsion divisors must be >= 2")
            if prev is not None and d % prev != 0:
                raise InvariantViolation("torsion divisors must form a divisibility chain")
            prev = d

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def order(self) -> int | None:
        """Order of the group, or None if infinite."""
        if self.rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def direct_sum(self, other: "AbelianGroupInv") -> "AbelianGroupInv":
        return abelian_group(self.rank + other.rank, list(self.torsion) + list(other.torsion))

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def abelian_group(rank: int, divisors: Sequence[int] = ()) -> AbelianGroupInv:
    """Build an AbelianGroupInv, canonicalizing arbitrary divisors.

    >>> str(abelian_group(1, [2, 3]))
    'Z + Z/6'
    """
    divisors = [abs(int(d)) for d in divisors]
    if any(d == 0 for d in divisors):
        raise InvariantViolation("zero divisor; use rank for free summands")
    divisors = [d for d in divisors if d > 1]
    if not divisors:
        return AbelianGroupInv(rank, ())
    n = len(divisors)
    diag = Matrix([[divisors[i] if i == j else 0 for j in range(n)] for i in range(n)])
    chain = [d for d in invariant_factors(diag) if d > 1]
    return AbelianGroupInv(rank, tuple(chain))


def cochain_cohomology(d_in: Matrix, d_out: Matrix) -> AbelianGroupInv:
    """Cohomology ker(d_out)/im(d_in) at the middle of C_prev -> C -> C_next.

    ``d_in`` maps C_prev into C (shape dim C x dim C_prev), ``d_out``
    maps C into C_next.  Requires d_out @ d_in == 0.

    >>> str(cochain_cohomology(Matrix.zeros(2, 1), Matrix([[2, 0]])))
    'Z'
    """
    if not (d_in.is_integer() and d_out.is_integer()):
        raise InvariantViolation("cochain differentials must be integer matrices")
    if d_in.rows != d_out.cols:
        raise InvariantViolation("cochain dimensions do not match")
    if not (d_out @ d_in).is_zero():
        raise InvariantViolation("d_out o d_in != 0: not a cochain complex")
    K = kernel_lattice(d_out)
    # im(d_in) sits inside ker(d_out); saturation makes the coordinates integral
    X = solve_integer(K, d_in) if K.cols else Matrix.zeros(0, d_in.cols)
    factors = invariant_factors(X)
    rank = K.cols - len(factors)
    return abelian_group(rank, factors)


def complex_cohomology(differentials: Sequence[Matrix]) -> list[AbelianGroupInv]:
    """All cohomology groups of a finite cochain complex.

    ``differentials[j]`` maps degree j to degree j+1; the list has one
    entry per degree except the top, and the complex is padded with zero
    maps at both ends.

    >>> [str(g) for g in complex_cohomology([Matrix.zeros(2, 1), Matrix([[2, 0]])])]
    ['Z', 'Z', 'Z/2']
    """
    if not differentials:
        raise InvariantViolation("empty complex")
    dims = [d.cols for d in differentials] + [differentials[-1].rows]
    for j in range(len(differentials) - 1):
        if differentials[j].rows != differentials[j + 1].cols:
            raise InvariantViolation("cochain dimensions do not match")
    padded = [Matrix.zeros(dims[0], 0)] + list(differentials) + [Matrix.zeros(0, dims[-1])]
    return [cochain_cohomology(padded[j], padded[j + 1]) for j in range(len(dims))]
