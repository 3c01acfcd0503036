"""Finite groups acting on tori, and their (twisted) character theory.

The geometric side: ``Lattice`` and ``AffineTorusMap`` model affine maps
x -> Ax + b of R^n that descend to the quotient torus R^n / lattice, and
``close_affine_group`` generates a finite group of such maps.

The algebraic side: ``FiniteGroup`` is a plain multiplication table,
``character_table`` computes exact irreducible characters by eigenvector
splitting of class-sum matrices over a finite field followed by a lift
to cyclotomic integers, and ``twisted_character_table`` handles
characters projective with respect to a 2-cocycle by passing through the
associated central extension.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm

from .cyclotomic import Cyclotomic, zeta
from .errors import GroupClosureError, InvariantViolation, SchemaError
from .exactla import Matrix, solve_rational

# ---------------------------------------------------------------------------
# lattices and affine maps
# ---------------------------------------------------------------------------


class Lattice:
    """A full-rank lattice B Z^n in R^n, columns of ``basis`` generating."""

    def __init__(self, basis_columns):
        cols = [tuple(int(x) for x in c) for c in basis_columns]
        n = len(cols)
        if n == 0 or any(len(c) != n for c in cols):
            raise SchemaError("lattice basis must be a square integer matrix")
        self.dim = n
        self.matrix = Matrix.from_cols(cols)
        if self.matrix.det() == 0:
            raise SchemaError("lattice basis is singular")
        inv = solve_rational(self.matrix, Matrix.identity(n))
        self.inverse = inv

    def to_coords(self, point) -> tuple[Fraction, ...]:
        """Lattice coordinates B^{-1} x of an ambient point."""
        return tuple(
            sum(self.inverse.data[i][j] * Fraction(point[j]) for j in range(self.dim))
            for i in range(self.dim)
        )

    def from_coords(self, coords) -> tuple[Fraction, ...]:
        return tuple(
            sum(self.matrix.data[i][j] * Fraction(coords[j]) for j in range(self.dim))
            for i in range(self.dim)
        )

    def reduce(self, point) -> tuple[Fraction, ...]:
        """The representative of point mod lattice with coordinates in [0,1)."""
        coords = self.to_coords(point)
        frac = tuple(c - (c.numerator // c.denominator) for c in coords)
        return self.from_coords(frac)

    def contains(self, vector) -> bool:
        return all(c.denominator == 1 for c in self.to_coords(vector))

    def key(self):
        return tuple(tuple(row) for row in self.matrix.data)

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Lattice({[self.matrix.col(j) for j in range(self.dim)]!r})"


class AffineTorusMap:
    """x -> A x + b on R^n, descending to the torus R^n / lattice.

    A must be an integer matrix with determinant +-1 that maps the
    lattice onto itself; b is rational and is stored reduced mod the
    lattice, so equality means equality of the induced torus map.
    """

    __slots__ = ("lattice", "matrix", "shift")

    def __init__(self, lattice: Lattice, matrix, shift):
        n = lattice.dim
        rows = tuple(tuple(int(x) for x in row) for row in matrix)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise SchemaError("affine map matrix has wrong shape")
        A = Matrix([list(r) for r in rows])
        if abs(A.det()) != 1:
            raise SchemaError("affine map matrix must have determinant +-1")
        conj = lattice.inverse @ A @ lattice.matrix
        if not conj.is_integer():
            raise SchemaError("affine map does not preserve the lattice")
        b = tuple(Fraction(x) for x in shift)
        if len(b) != n:
            raise SchemaError("affine map shift has wrong length")
        object.__setattr__(self, "lattice", lattice)
        object.__setattr__(self, "matrix", rows)
        object.__setattr__(self, "shift", lattice.reduce(b))

    def __setattr__(self, *a):
        raise AttributeError("AffineTorusMap is immutable")

    @staticmethod
    def identity(lattice: Lattice) -> "AffineTorusMap":
        n = lattice.dim
        return AffineTorusMap(lattice, [[1 if i == j else 0 for j in range(n)] for i in range(n)], [0] * n)

    def apply(self, point) -> tuple[Fraction, ...]:
        """Image of an ambient point, not reduced mod the lattice."""
        n = self.lattice.dim
        return tuple(
            sum(self.matrix[i][j] * Fraction(point[j]) for j in range(n)) + self.shift[i]
            for i in range(n)
        )

    def apply_linear(self, vector) -> tuple[Fraction, ...]:
        n = self.lattice.dim
        return tuple(sum(self.matrix[i][j] * Fraction(vector[j]) for j in range(n)) for i in range(n))

    def compose(self, other: "AffineTorusMap") -> "AffineTorusMap":
        """self after other: x -> self(other(x))."""
        if self.lattice != other.lattice:
            raise InvariantViolation("composing maps over different lattices")
        n = self.lattice.dim
        A = [
            [sum(self.matrix[i][k] * other.matrix[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]
        b = self.apply(other.shift)
        return AffineTorusMap(self.lattice, A, b)

    def inverse(self) -> "AffineTorusMap":
        n = self.lattice.dim
        A = Matrix([list(r) for r in self.matrix])
        Ainv = solve_rational(A, Matrix.identity(n)).to_int()
        b = tuple(-sum(Ainv.data[i][j] * self.shift[j] for j in range(n)) for i in range(n))
        return AffineTorusMap(self.lattice, Ainv.data, b)

    def inverse_transpose(self) -> tuple[tuple[Fraction, ...], ...]:
        """(A^{-1})^T, the matrix transporting hyperplane normals."""
        n = self.lattice.dim
        A = Matrix([list(r) for r in self.matrix])
        Ainv = solve_rational(A, Matrix.identity(n)).to_int()
        return tuple(tuple(Ainv.data[j][i] for j in range(n)) for i in range(n))

    def is_identity(self) -> bool:
        n = self.lattice.dim
        return all(self.matrix[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n)) and all(
            x == 0 for x in self.shift
        )

    def key(self):
        return (self.matrix, self.shift)

    def __eq__(self, other):
        return isinstance(other, AffineTorusMap) and self.lattice == other.lattice and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"AffineTorusMap({self.matrix!r}, shift={self.shift!r})"


def close_affine_group(generators, max_order: int = 64) -> list[AffineTorusMap]:
    """All products of the generators, identity first, in search order.

    Raises GroupClosureError if the closure exceeds ``max_order``
    elements.  Enumeration order is deterministic: breadth-first from
    the identity over the generators sorted by canonical key.
    """
    if not generators:
        raise SchemaError("no generators given")
    lattice = generators[0].lattice
    gens = sorted(generators, key=lambda g: g.key())
    ident = AffineTorusMap.identity(lattice)
    elements = [ident]
    seen = {ident: 0}
    queue = [ident]
    while queue:
        g = queue.pop(0)
        for s in gens:
            h = g.compose(s)
            if h not in seen:
                if len(elements) >= max_order:
                    raise GroupClosureError(
                        f"group closure exceeds the bound of {max_order} elements"
                    )
                seen[h] = len(elements)
                elements.append(h)
                queue.append(h)
    return elements


# ---------------------------------------------------------------------------
# abstract finite groups
# ---------------------------------------------------------------------------


class FiniteGroup:
    """A finite group given by its multiplication table.

    Elements are arbitrary hashable labels; the identity is always at
    index 0.  All structural queries (classes, centralizers, subgroup
    closures) work on indices.
    """

    def __init__(self, elements, table):
        self.elements = list(elements)
        self.n = len(self.elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != self.n:
            raise InvariantViolation("duplicate group elements")
        self.table = [list(row) for row in table]
        self._inverse = [None] * self.n
        for i in range(self.n):
            for j in range(self.n):
                if self.table[i][j] == 0:
                    self._inverse[i] = j
        if any(v is None for v in self._inverse):
            raise InvariantViolation("multiplication table has no inverses")
        if any(self.table[0][j] != j or self.table[j][0] != j for j in range(self.n)):
            raise InvariantViolation("element 0 is not the identity")
        self._classes = None

    @classmethod
    def from_elements(cls, elements, compose) -> "FiniteGroup":
        """Build the table from element labels and a composition rule.

        The identity is located and moved to index 0; the remaining
        elements keep their given order.
        """
        elements = list(elements)
        probe = elements[0]
        ident = None
        for e in elements:
            if compose(e, probe) == probe and compose(probe, e) == probe:
                if all(compose(e, x) == x for x in elements):
                    ident = e
                    break
        if ident is None:
            raise InvariantViolation("no identity element found")
        ordered = [ident] + [e for e in elements if e != ident]
        pos = {e: i for i, e in enumerate(ordered)}
        table = []
        for a in ordered:
            row = []
            for b in ordered:
                c = compose(a, b)
                if c not in pos:
                    raise InvariantViolation("composition leaves the element set")
                row.append(pos[c])
            table.append(row)
        return cls(ordered, table)

    def mult(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self._inverse[i]

    def conj(self, g: int, x: int) -> int:
        """g x g^{-1}."""
        return self.mult(self.mult(g, x), self.inv(g))

    def power(self, i: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv(i), -k)
        out = 0
        for _ in range(k):
            out = self.mult(out, i)
        return out

    def element_order(self, i: int) -> int:
        k, cur = 1, i
        while cur != 0:
            cur = self.mult(cur, i)
            k += 1
        return k

    def exponent(self) -> int:
        out = 1
        for i in range(self.n):
            out = lcm(out, self.element_order(i))
        return out

    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        """Classes as sorted index tuples, ordered by smallest member."""
        if self._classes is None:
            seen = [False] * self.n
            classes = []
            for i in range(self.n):
                if seen[i]:
                    continue
                cls = sorted({self.conj(g, i) for g in range(self.n)})
                for x in cls:
                    seen[x] = True
                classes.append(tuple(cls))
            self._classes = tuple(sorted(classes, key=lambda c: c[0]))
        return self._classes

    def class_map(self) -> list[int]:
        out = [None] * self.n
        for k, cls in enumerate(self.conjugacy_classes()):
            for i in cls:
                out[i] = k
        return out

    def centralizer(self, i: int) -> tuple[int, ...]:
        return tuple(g for g in range(self.n) if self.mult(g, i) == self.mult(i, g))

    def center(self) -> tuple[int, ...]:
        return tuple(
            i for i in range(self.n) if all(self.mult(i, g) == self.mult(g, i) for g in range(self.n))
        )

    def subgroup_closure(self, gens) -> tuple[int, ...]:
        seen = {0}
        queue = [0]
        gens = sorted(set(gens))
        while queue:
            g = queue.pop(0)
            for s in gens:
                h = self.mult(g, s)
                if h not in seen:
                    seen.add(h)
                    queue.append(h)
        return tuple(sorted(seen))

    def is_subgroup(self, indices) -> bool:
        s = set(indices)
        return 0 in s and all(self.mult(a, b) in s for a in s for b in s)

    def is_normal(self, indices) -> bool:
        s = set(indices)
        return all(self.conj(g, x) in s for g in range(self.n) for x in s)

    def subgroup(self, indices) -> "FiniteGroup":
        """The subgroup on the given indices, as a group whose element
        labels are the parent indices (identity 0 first)."""
        indices = tuple(sorted(set(indices)))
        if not self.is_subgroup(indices):
            raise InvariantViolation("index set is not closed under multiplication")
        pos = {p: i for i, p in enumerate(indices)}
        table = [[pos[self.mult(a, b)] for b in indices] for a in indices]
        return FiniteGroup(list(indices), table)


# ---------------------------------------------------------------------------
# cocycles and central extensions
# ---------------------------------------------------------------------------


class Cocycle:
    """A normalized 2-cocycle on a finite group with values in Z/m.

    Values are stored additively as integers mod m; the corresponding
    root of unity is ``omega``.  Construction validates normalization
    (value 0 whenever either argument is the identity) and the cocycle
    identity on all triples.
    """

    def __init__(self, group: FiniteGroup, modulus: int, values):
        if modulus < 1:
            raise SchemaError("cocycle modulus must be positive")
        self.group = group
        self.modulus = modulus
        n = group.n
        self.values = [[int(values[i][j]) % modulus for j in range(n)] for i in range(n)]
        for g in range(n):
            if self.values[0][g] or self.values[g][0]:
                raise SchemaError("cocycle is not normalized at the identity")
        for g in range(n):
            for h in range(n):
                gh = group.mult(g, h)
                for k in range(n):
                    lhs = self.values[g][h] + self.values[gh][k]
                    rhs = self.values[g][group.mult(h, k)] + self.values[h][k]
                    if (lhs - rhs) % modulus:
                        raise SchemaError("2-cocycle identity fails")

    @classmethod
    def from_pairs(cls, group: FiniteGroup, modulus: int, pairs: dict) -> "Cocycle":
        """Build from a sparse dict keyed by pairs of element labels."""
        n = group.n
        values = [[0] * n for _ in range(n)]
        for (a, b), v in pairs.items():
            if a not in group.index or b not in group.index:
                raise SchemaError("cocycle entry references unknown group element")
            values[group.index[a]][group.index[b]] = int(v) % modulus
        return cls(group, modulus, values)

    @classmethod
    def trivial(cls, group: FiniteGroup, modulus: int = 1) -> "Cocycle":
        return cls(group, modulus, [[0] * group.n for _ in range(group.n)])

    def value(self, i: int, j: int) -> int:
        return self.values[i][j]

    def omega(self, i: int, j: int) -> Cyclotomic:
        return zeta(self.modulus, self.values[i][j])

    def is_trivial(self) -> bool:
        return all(all(v == 0 for v in row) for row in self.values)

    def conjugate(self) -> "Cocycle":
        m = self.modulus
        return Cocycle(self.group, m, [[(-v) % m for v in row] for row in self.values])

    def restrict(self, sub: FiniteGroup) -> "Cocycle":
        """Restriction to a subgroup whose labels are parent indices."""
        vals = [[self.values[a][b] for b in sub.elements] for a in sub.elements]
        return Cocycle(sub, self.modulus, vals)

    def is_regular(self, i: int) -> bool:
        """Whether the conjugacy class of i supports projective characters."""
        return all(
            self.values[i][h] == self.values[h][i] for h in self.group.centralizer(i)
        )

    def regular_classes(self) -> tuple[int, ...]:
        return tuple(
            k for k, cls in enumerate(self.group.conjugacy_classes()) if self.is_regular(cls[0])
        )


def central_extension(group: FiniteGroup, cocycle: Cocycle) -> FiniteGroup:
    """The extension Z/m x_c G with (a,g)(b,h) = (a + b + c(g,h), gh).

    Element labels are pairs (a, parent index), ordered identity first.
    """
    m = cocycle.modulus
    labels = [(a, gi) for gi in range(group.n) for a in range(m)]

    def compose(x, y):
        (a, gi), (b, hi) = x, y
        return ((a + b + cocycle.value(gi, hi)) % m, group.mult(gi, hi))

    return FiniteGroup.from_elements(labels, compose)


# ---------------------------------------------------------------------------
# modular arithmetic helpers for the character algorithm
# ---------------------------------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _character_prime(exponent: int, order: int) -> int:
    """Smallest prime p = 1 mod exponent with p > 2 * order."""
    p = exponent + 1
    while p <= 2 * order or not _is_prime(p):
        p += exponent
    return p


def _element_of_order(e: int, p: int) -> int:
    """An element of multiplicative order exactly e in F_p (e | p-1)."""
    for g in range(2, p):
        z = pow(g, (p - 1) // e, p)
        ok = True
        for q in _prime_factors(e):
            if pow(z, e // q, p) == 1:
                ok = False
                break
        if ok:
            return z
    raise InvariantViolation("no element of required order mod p")


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _solve_mod(B, Y, p):
    """Solve B X = Y mod p for B with full column rank; returns X."""
    m = len(B)
    n = len(B[0]) if B else 0
    k = len(Y[0]) if Y else 0
    a = [[B[i][j] % p for j in range(n)] + [Y[i][j] % p for j in range(k)] for i in range(m)]
    pivots = []
    row = 0
    for j in range(n):
        piv = next((i for i in range(row, m) if a[i][j]), None)
        if piv is None:
            raise InvariantViolation("mod-p solve: rank deficiency")
        a[row], a[piv] = a[piv], a[row]
        inv = pow(a[row][j], p - 2, p)
        for i in range(m):
            if i != row and a[i][j]:
                f = a[i][j] * inv % p
                for jj in range(j, n + k):
                    a[i][jj] = (a[i][jj] - f * a[row][jj]) % p
        pivots.append(j)
        row += 1
    for i in range(row, m):
        if any(a[i][n + c] for c in range(k)):
            raise InvariantViolation("mod-p solve: inconsistent system")
    X = [[0] * k for _ in range(n)]
    for r_i, j in enumerate(pivots):
        inv = pow(a[r_i][j], p - 2, p)
        for c in range(k):
            X[j][c] = a[r_i][n + c] * inv % p
    return X


def _nullspace_mod(M, p):
    """Basis of the kernel of M mod p, as a list of vectors."""
    m = len(M)
    n = len(M[0]) if M else 0
    a = [[x % p for x in row] for row in M]
    pivots = {}
    row = 0
    for j in range(n):
        piv = next((i for i in range(row, m) if a[i][j]), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = pow(a[row][j], p - 2, p)
        for i in range(m):
            if i != row and a[i][j]:
                f = a[i][j] * inv % p
                for jj in range(j, n):
                    a[i][jj] = (a[i][jj] - f * a[row][jj]) % p
        pivots[j] = row
        row += 1
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for j in free:
        v = [0] * n
        v[j] = 1
        for pj, pr in pivots.items():
            inv = pow(a[pr][pj], p - 2, p)
            v[pj] = (-a[pr][j] * inv) % p
        basis.append(v)
    return basis


def _charpoly_mod(M, p):
    """Characteristic polynomial mod p (low degree first), via a
    Hessenberg similarity reduction and the standard recurrence."""
    n = len(M)
    H = [[x % p for x in row] for row in M]
    for k in range(n - 2):
        piv = next((i for i in range(k + 1, n) if H[i][k]), None)
        if piv is None:
            continue
        if piv != k + 1:
            H[k + 1], H[piv] = H[piv], H[k + 1]
            for row in H:
                row[k + 1], row[piv] = row[piv], row[k + 1]
        inv = pow(H[k + 1][k], p - 2, p)
        for i in range(k + 2, n):
            f = H[i][k] * inv % p
            if f:
                Hi, Hk = H[i], H[k + 1]
                for j in range(n):
                    Hi[j] = (Hi[j] - f * Hk[j]) % p
                for r in range(n):
                    H[r][k + 1] = (H[r][k + 1] + f * H[r][i]) % p
    polys = [[1]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        cur = [0] * (m + 1)
        for idx, c in enumerate(prev):
            cur[idx + 1] = (cur[idx + 1] + c) % p
            cur[idx] = (cur[idx] - H[m - 1][m - 1] * c) % p
        beta = 1
        for i in range(m - 1, 0, -1):
            beta = beta * H[i][i - 1] % p
            term = H[i - 1][m - 1] * beta % p
            if term:
                for idx, c in enumerate(polys[i - 1]):
                    cur[idx] = (cur[idx] - term * c) % p
        polys.append(cur)
    return polys[n]


def _poly_roots_mod(poly, p):
    out = []
    for x in range(p):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % p
        if acc == 0:
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# ordinary character tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CharacterTable:
    """Exact irreducible characters, one row per character.

    ``chars[i][k]`` is the value of the i-th character on the k-th
    conjugacy class; rows are sorted by degree, then by value key.
    """

    group: FiniteGroup
    classes: tuple[tuple[int, ...], ...]
    chars: tuple[tuple[Cyclotomic, ...], ...]

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(int(row[0].to_fraction()) for row in self.chars)

    def value(self, i: int, elem: int) -> Cyclotomic:
        return self.chars[i][self.group.class_map()[elem]]


def character_table(group: FiniteGroup) -> CharacterTable:
    """All irreducible characters, computed exactly.

    Uses simultaneous eigenvector splitting of the class-sum matrices
    over a prime field, then lifts eigenvalue multiplicities back to
    cyclotomic integers.
    """
    classes = group.conjugacy_classes()
    r = len(classes)
    reps = [c[0] for c in classes]
    class_of = group.class_map()
    sizes = [len(c) for c in classes]
    n = group.n
    e = group.exponent()
    p = _character_prime(e, n)

    # class-sum matrices: (M_i)[j][k] = #{x in C_i : x^{-1} rep_k in C_j}
    mats = []
    for i in range(r):
        M = [[0] * r for _ in range(r)]
        for k in range(r):
            z = reps[k]
            for x in classes[i]:
                j = class_of[group.mult(group.inv(x), z)]
                M[j][k] += 1
        mats.append(M)

    # split F_p^r into common eigenspaces of all class-sum matrices
    subspaces = [[[1 if i == j else 0 for j in range(r)] for i in range(r)]]
    # a subspace is a list of basis vectors (rows)
    for i in range(1, r):
        M = mats[i]
        new = []
        for basis in subspaces:
            s = len(basis)
            if s == 1:
                new.append(basis)
                continue
            B = [[basis[v][row] for v in range(s)] for row in range(r)]
            MB = [[sum(M[row][k] * B[k][v] for k in range(r)) % p for v in range(s)] for row in range(r)]
            R = _solve_mod(B, MB, p)
            for lam in _poly_roots_mod(_charpoly_mod(R, p), p):
                shifted = [[(R[a][b] - (lam if a == b else 0)) % p for b in range(s)] for a in range(s)]
                vecs = [
                    [sum(B[row][c] * v[c] for c in range(s)) % p for row in range(r)]
                    for v in _nullspace_mod(shifted, p)
                ]
                if vecs:
                    new.append(vecs)
        subspaces = new
        if all(len(b) == 1 for b in subspaces):
            break
    if len(subspaces) != r or any(len(b) != 1 for b in subspaces):
        raise InvariantViolation("class algebra failed to split into lines")

    z_e = _element_of_order(e, p)
    chars = []
    for basis in subspaces:
        u = basis[0]
        if u[0] % p == 0:
            raise InvariantViolation("degenerate eigenvector in class algebra")
        inv0 = pow(u[0], p - 2, p)
        omega = [x * inv0 % p for x in u]
        denom = 0
        for j in range(r):
            jstar = class_of[group.inv(reps[j])]
            denom = (denom + omega[j] * omega[jstar] * pow(sizes[j], p - 2, p)) % p
        d2 = n * pow(denom, p - 2, p) % p
        deg = next((d for d in range(1, isqrt(n) + 1) if d * d % p == d2), None)
        if deg is None:
            raise InvariantViolation("character degree not recovered")
        chi_mod = [deg * omega[j] * pow(sizes[j], p - 2, p) % p for j in range(r)]

        row = []
        for j in range(r):
            nj = group.element_order(reps[j])
            lam = pow(z_e, e // nj, p)
            inv_nj = pow(nj, p - 2, p)
            val = Cyclotomic.rational(0)
            for t in range(nj):
                acc = 0
                for l in range(nj):
                    acc = (acc + chi_mod[class_of[group.power(reps[j], l)]] * pow(lam, (-l * t) % (p - 1), p)) % p
                mult = acc * inv_nj % p
                if mult:
                    val = val + mult * zeta(nj, t)
            row.append(val)
        chars.append(tuple(row))

    chars.sort(key=lambda row: (row[0].key(), tuple(v.key() for v in row)))
    table = CharacterTable(group, classes, tuple(chars))
    _validate_orthogonality(table, sizes)
    return table


def _validate_orthogonality(table: CharacterTable, sizes) -> None:
    n = table.group.n
    class_of = table.group.class_map()
    reps = [c[0] for c in table.classes]
    conj_class = [class_of[table.group.inv(rep)] for rep in reps]
    for i, row_i in enumerate(table.chars):
        for j in range(i, len(table.chars)):
            row_j = table.chars[j]
            acc = Cyclotomic.rational(0)
            for k in range(len(reps)):
                acc = acc + sizes[k] * (row_i[k] * row_j[conj_class[k]])
            want = n if i == j else 0
            if acc != Cyclotomic.rational(want):
                raise InvariantViolation("character table fails row orthogonality")


# ---------------------------------------------------------------------------
# twisted character tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwistedCharacterTable:
    """Characters of irreducible projective representations.

    ``values[i][g]`` is the full character function on every group
    element (twisted characters are not class functions in general).
    """

    group: FiniteGroup
    cocycle: Cocycle
    values: tuple[tuple[Cyclotomic, ...], ...]

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(int(row[0].to_fraction()) for row in self.values)

    @property
    def count(self) -> int:
        return len(self.values)


def twisted_character_table(group: FiniteGroup, cocycle: Cocycle) -> TwistedCharacterTable:
    """Characters of the irreducible cocycle-projective representations.

    Passes through the central extension: an extension character lies
    over the cocycle exactly when the distinguished central element acts
    by the primitive root of unity, and its restriction to the fiber
    over G is the projective character.  The number of rows always
    equals the number of regular classes.
    """
    if cocycle.group.elements != group.elements or cocycle.group.table != group.table:
        raise InvariantViolation("cocycle belongs to a different group")
    if cocycle.is_trivial():
        tab = character_table(group)
        class_of = group.class_map()
        values = tuple(
            tuple(row[class_of[g]] for g in range(group.n)) for row in tab.chars
        )
        rows = sorted(values, key=_twisted_sort_key)
        return TwistedCharacterTable(group, cocycle, tuple(rows))

    m = cocycle.modulus
    ext = central_extension(group, cocycle)
    tab = character_table(ext)
    central = ext.index[(1 % m, 0)]
    target = zeta(m)
    rows = []
    for i, row in enumerate(tab.chars):
        deg = row[0]
        if tab.value(i, central) == deg * target:
            rows.append(tuple(tab.value(i, ext.index[(0, g)]) for g in range(group.n)))
    expected = len(cocycle.regular_classes())
    if len(rows) != expected:
        raise InvariantViolation(
            f"twisted character count {len(rows)} != regular class count {expected}"
        )
    rows.sort(key=_twisted_sort_key)
    return TwistedCharacterTable(group, cocycle, tuple(rows))


def _twisted_sort_key(row):
    return (row[0].key(), tuple(v.key() for v in row))


def char_inner_product(order: int, f, g) -> Cyclotomic:
    """(1/order) sum_h f(h) conj(g(h)) over matching value tuples."""
    acc = Cyclotomic.rational(0)
    for a, b in zip(f, g):
        acc = acc + a * b.conjugate()
    return acc / order


def restriction_matrix(
    parent_tab: TwistedCharacterTable, sub_tab: TwistedCharacterTable
) -> Matrix:
    """Multiplicity matrix of restriction along a subgroup inclusion.

    ``sub_tab.group`` must have parent element indices as its labels.
    Entry [j][i] is the multiplicity of the j-th subgroup character in
    the restriction of the i-th parent character; columns give the
    restriction map in the character bases.
    """
    sub = sub_tab.group
    rows = []
    for j, psi in enumerate(sub_tab.values):
        row = []
        for i, chi in enumerate(parent_tab.values):
            restricted = tuple(chi[p] for p in sub.elements)
            val = char_inner_product(sub.n, restricted, psi)
            if not val.is_integer() or val.to_fraction() < 0:
                raise InvariantViolation("restriction multiplicity is not a nonnegative integer")
            row.append(int(val.to_fraction()))
        rows.append(row)
    M = Matrix(rows, cols=len(parent_tab.values))
    for i, chi in enumerate(parent_tab.values):
        total = sum(M.data[j][i] * sub_tab.degrees[j] for j in range(len(sub_tab.values)))
        if total != parent_tab.degrees[i]:
            raise InvariantViolation("restriction loses dimension")
    return M


def conjugated_character(
    parent: FiniteGroup, cocycle: Cocycle, w: int, sub: FiniteGroup, chi
) -> tuple[Cyclotomic, ...]:
    """The character of the w-conjugate of a projective representation.

    ``chi`` is a value tuple over ``sub.elements`` (parent indices); the
    result is a value tuple over the conjugated subgroup w sub w^{-1},
    ordered by its sorted parent indices.  The cocycle correction makes
    the result projective for the same cocycle again:

        (w.chi)(v) = conj(c(w^{-1}, w)) c(w^{-1}, v) c(w^{-1} v, w) chi(w^{-1} v w)
    """
    winv = parent.inv(w)
    pref = cocycle.omega(winv, w).conjugate()
    chi_at = {h: chi[i] for i, h in enumerate(sub.elements)}
    conj_elems = sorted(parent.conj(w, h) for h in sub.elements)
    out = []
    for v in conj_elems:
        inner = parent.mult(winv, parent.mult(v, w))
        factor = pref * cocycle.omega(winv, v) * cocycle.omega(parent.mult(winv, v), w)
        out.append(factor * chi_at[inner])
    return tuple(out)


def conjugation_matrix(
    parent: FiniteGroup,
    cocycle: Cocycle,
    w: int,
    source_tab: TwistedCharacterTable,
    target_tab: TwistedCharacterTable,
) -> Matrix:
    """Permutation matrix matching w-conjugates of source characters to
    target characters; source and target groups are subgroups of
    ``parent`` given by parent-index labels, with target = w source w^{-1}."""
    src = source_tab.group
    tgt = target_tab.group
    if sorted(parent.conj(w, h) for h in src.elements) != sorted(tgt.elements):
        raise InvariantViolation("target subgroup is not the w-conjugate of the source")
    order = {h: i for i, h in enumerate(tgt.elements)}
    rows = [[0] * len(source_tab.values) for _ in range(len(target_tab.values))]
    for i, chi in enumerate(source_tab.values):
        moved = conjugated_character(parent, cocycle, w, src, chi)
        # reindex from sorted conjugate indices to target element order
        sorted_conj = sorted(parent.conj(w, h) for h in src.elements)
        as_target = [None] * len(tgt.elements)
        for pos, v in enumerate(sorted_conj):
            as_target[order[v]] = moved[pos]
        hits = 0
        for j, psi in enumerate(target_tab.values):
            val = char_inner_product(tgt.n, tuple(as_target), psi)
            if val == Cyclotomic.rational(1):
                rows[j][i] = 1
                hits += 1
            elif not val.is_zero():
                raise InvariantViolation("conjugated character is not a target character")
        if hits != 1:
            raise InvariantViolation("conjugated character matches no target character")
    return Matrix(rows, cols=len(source_tab.values))


def one_dimensional_match(tab: TwistedCharacterTable, prescribed: dict) -> int:
    """Index of the unique degree-1 row matching prescribed values.

    ``prescribed`` maps element labels of ``tab.group`` to Cyclotomic
    values.  Raises unless exactly one row matches.
    """
    hits = []
    for i, row in enumerate(tab.values):
        if tab.degrees[i] != 1:
            continue
        if all(row[tab.group.index[g]] == v for g, v in prescribed.items()):
            hits.append(i)
    if len(hits) != 1:
        raise InvariantViolation(
            f"{len(hits)} one-dimensional characters match the prescribed values (need exactly 1)"
        )
    return hits[0]


def lying_over_indices(
    tab: TwistedCharacterTable, sub: FiniteGroup, iota
) -> list[int]:
    """Indices of characters restricting to a multiple of conj(iota).

    ``sub`` is a subgroup of ``tab.group`` with parent-index labels;
    ``iota`` is a value tuple over ``sub.elements``.  A character lies
    over iota when chi(v) = chi(1) conj(iota(v)) for every v in sub.
    """
    out = []
    for i, row in enumerate(tab.values):
        deg = row[0]
        if all(row[p] == deg * iota[k].conjugate() for k, p in enumerate(sub.elements)):
            out.append(i)
    return out
