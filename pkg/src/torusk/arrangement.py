"""Cell complexes on tori cut out by finite hyperplane arrangements.

A family is a primitive integer normal together with rational offsets;
on the torus R^n / lattice it describes finitely many parallel
sub-tori.  The complex is built in a finite window of the universal
cover large enough that every cell near the fundamental domain is cut
exactly as in the periodic arrangement, then cells are identified under
lattice translation.  Cells of every dimension are enumerated by sign
vectors: chambers of arrangements are convex, so a sign vector
determines a cell, and the face relation is the componentwise one.

The module also installs cellular actions of finite groups of affine
torus maps, computes the hyperplane families needed to make an action
pointwise-regular (fixed loci of all group elements), and provides the
resulting equivariant refinement.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import ceil, floor, gcd

from .errors import InvariantViolation, NonCellularError, UnsupportedDimension
from .exactla import Matrix, kernel_lattice, snf, solve_rational
from .groups import AffineTorusMap, Lattice

# ---------------------------------------------------------------------------
# hyperplane families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HyperplaneFamily:
    """All torus hyperplanes with a common primitive normal.

    The locus is {x : <normal, x> = c + k * period, c in offsets, k in Z};
    ``period`` is the positive generator of <normal, lattice>, so the
    offsets live mod period and are stored reduced, sorted, deduplicated.
    """

    normal: tuple[int, ...]
    offsets: tuple[Fraction, ...]
    period: int


def make_family(lattice: Lattice, normal, offsets) -> HyperplaneFamily:
    """Canonicalize a family: primitive normal with positive leading
    entry, offsets reduced mod the lattice period of the normal."""
    nu = [int(x) for x in normal]
    if all(x == 0 for x in nu):
        raise InvariantViolation("zero normal vector")
    g = 0
    for x in nu:
        g = gcd(g, x)
    nu = [x // g for x in nu]
    sign = next(x for x in nu if x != 0)
    scale = 1 if sign > 0 else -1
    nu = [scale * x for x in nu]
    period = 0
    for j in range(lattice.dim):
        period = gcd(period, sum(nu[i] * lattice.matrix.data[i][j] for i in range(lattice.dim)))
    period = abs(period)
    if period == 0:
        raise InvariantViolation("normal vanishes on the lattice")
    # original offsets were for the unscaled normal; rescale by 1/g and sign
    offs = sorted({(Fraction(c) * scale / g) % period for c in offsets})
    return HyperplaneFamily(tuple(nu), tuple(offs), period)


def family_image(lattice: Lattice, fam: HyperplaneFamily, w: AffineTorusMap) -> HyperplaneFamily:
    """The image family w(locus): normal A^{-T} nu, offsets shifted."""
    nu2 = w.inverse_transpose()
    n = lattice.dim
    new_normal = [sum(nu2[i][j] * fam.normal[j] for j in range(n)) for i in range(n)]
    new_normal = [int(x) for x in new_normal]
    shift = sum(Fraction(new_normal[i]) * w.shift[i] for i in range(n))
    new_offsets = [c + shift for c in fam.offsets]
    return make_family(lattice, new_normal, new_offsets)


def merge_families(families) -> tuple[HyperplaneFamily, ...]:
    """Merge families with equal normals, uniting their offset sets."""
    by_normal: dict[tuple[int, ...], tuple[int, set]] = {}
    for f in families:
        if f.normal in by_normal:
            per, offs = by_normal[f.normal]
            if per != f.period:
                raise InvariantViolation("same normal with different periods")
            offs.update(f.offsets)
        else:
            by_normal[f.normal] = (f.period, set(f.offsets))
    out = [
        HyperplaneFamily(nu, tuple(sorted(offs)), per)
        for nu, (per, offs) in by_normal.items()
    ]
    return tuple(sorted(out, key=lambda f: (f.normal, f.offsets)))


def orbit_close_families(lattice: Lattice, families, maps) -> tuple[HyperplaneFamily, ...]:
    """Smallest family set containing the input and closed under maps."""
    current = merge_families(make_family(lattice, f.normal, f.offsets) for f in families)
    while True:
        extended = list(current)
        for f in current:
            for w in maps:
                extended.append(family_image(lattice, f, w))
        merged = merge_families(extended)
        if merged == current:
            return current
        current = merged


# ---------------------------------------------------------------------------
# fixed loci of affine torus maps
# ---------------------------------------------------------------------------


def fixed_point_components(lattice: Lattice, w: AffineTorusMap):
    """Components of the fixed-point set of w on the torus.

    Returns (dim, data) pairs: dim 0 components carry the fixed point,
    codimension-one components carry a HyperplaneFamily collecting all
    parallel fixed hyperplanes of w at once.  Intermediate dimensions
    raise UnsupportedDimension.

    Solved in lattice coordinates: with T the matrix of w and t its
    shift there, fixed points satisfy (T - I) y = -t mod Z^n; a Smith
    form U (T - I) V = D turns this into independent scalar conditions.
    """
    n = lattice.dim
    B, Binv = lattice.matrix, lattice.inverse
    A = Matrix([list(r) for r in w.matrix])
    T = (Binv @ A @ B).to_int()
    t = lattice.to_coords(w.shift)
    S = T - Matrix.identity(n)
    dec = snf(S)
    D = dec.diagonal()
    s = [
        -sum(dec.U.data[i][j] * t[j] for j in range(n))
        for i in range(n)
    ]
    free = [i for i in range(n) if D[i] == 0]
    for i in free:
        if Fraction(s[i]).denominator != 1:
            return []  # no solutions on the torus
    bound = [i for i in range(n) if D[i] != 0]
    codim = len(bound)
    if codim == 0:
        return []  # w is the identity
    if 0 < len(free) < n - 1:
        raise UnsupportedDimension(
            "fixed locus of intermediate dimension; only points and "
            "hyperplanes are supported"
        )

    choice_ranges = [range(abs(D[i])) for i in bound]
    if len(free) == 0:
        out = []
        for ks in product(*choice_ranges):
            z = [Fraction(0)] * n
            for pos, i in enumerate(bound):
                z[i] = (Fraction(s[i]) + ks[pos]) / D[i]
            y = [
                sum(Fraction(dec.V.data[r][c]) * z[c] for c in range(n))
                for r in range(n)
            ]
            point = lattice.reduce(lattice.from_coords(y))
            out.append((0, point))
        seen = set()
        dedup = []
        for d, p in out:
            if p not in seen:
                seen.add(p)
                dedup.append((d, p))
        return dedup

    # one bound coordinate: a family of parallel fixed hyperplanes
    i0 = bound[0]
    Vinv = solve_rational(dec.V, Matrix.identity(n)).to_int()
    rho = Vinv.data[i0]  # integer covector: z_{i0} = <rho, y>
    # ambient normal proportional to B^{-T} rho
    raw = [sum(Binv.data[i][j] * rho[i] for i in range(n)) for j in range(n)]
    den = 1
    for x in raw:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    nu = [int(Fraction(x) * den) for x in raw]
    # <nu, x> = den * z_{i0}; offsets from the admissible z_{i0} values
    offsets = [den * (Fraction(s[i0]) + k) / D[i0] for k in range(abs(D[i0]))]
    fam = make_family(lattice, nu, offsets)
    return [(n - 1, fam)]


def fixed_locus_families(lattice: Lattice, maps) -> tuple:
    """Families covering all positive-codimension fixed loci of the maps.

    Codimension-one loci contribute directly; isolated fixed points
    contribute one axis family (constant lattice coordinate) per
    coordinate through each point, which suffices to pin the points as
    vertices of the arrangement.
    """
    fams = []
    points = []
    for w in maps:
        if w.is_identity():
            continue
        for dim, data in fixed_point_components(lattice, w):
            if dim == 0:
                points.append(data)
            else:
                fams.append(data)
    n = lattice.dim
    for p in points:
        coords = lattice.to_coords(p)
        for j in range(n):
            raw = [lattice.inverse.data[j][c] for c in range(n)]
            den = 1
            for x in raw:
                den = den * x.denominator // gcd(den, x.denominator)
            nu = [int(x * den) for x in raw]
            fams.append(make_family(lattice, nu, [den * coords[j]]))
    return merge_families(fams) if fams else ()


# ---------------------------------------------------------------------------
# the torus complex
# ---------------------------------------------------------------------------


@dataclass
class CoverCell:
    """A cell of the windowed cover arrangement.

    ``code`` encodes the stratum: one integer per family giving the
    position of the cell relative to that family's sorted levels in the
    window (even = on level index code/2, odd = in the open gap above
    level (code-1)/2; -1 = below all levels).
    """

    dim: int
    code: tuple[int, ...]
    sample: tuple[Fraction, ...]
    verts: tuple = ()
    bary: tuple | None = None
    tid: int | None = None
    lam: tuple[int, ...] | None = None


@dataclass
class TorusCell:
    """A cell of the quotient complex, with its canonical cover data."""

    tid: int
    dim: int
    rep: int  # index into cover cells
    bary: tuple[Fraction, ...]
    verts: tuple
    frame: tuple
    cover_faces: tuple  # (face tid, lattice translation, incidence sign)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _rref_key(rows):
    """Canonical key for the row space of a rational matrix."""
    a = [[Fraction(x) for x in row] for row in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    rank = 0
    for j in range(n):
        piv = next((i for i in range(rank, m) if a[i][j] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = 1 / a[rank][j]
        a[rank] = [x * inv for x in a[rank]]
        for i in range(m):
            if i != rank and a[i][j] != 0:
                f = a[i][j]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return tuple(tuple(row) for row in a[:rank])


class TorusComplex:
    """The cell complex induced on a torus by hyperplane families."""

    def __init__(self, lattice: Lattice, families):
        self.lattice = lattice
        self.families = merge_families(
            make_family(lattice, f.normal, f.offsets) for f in families
        )
        self.n = lattice.dim
        self._build()

    # -- construction ---------------------------------------------------

    def _build(self):
        n = self.n
        lat = self.lattice
        normals = Matrix([list(f.normal) for f in self.families], cols=n)
        if normals.rank() < n:
            raise NonCellularError(
                "family normals do not span; the arrangement has unbounded cells"
            )

        # extent bound: vertices of the polytope cut by one period-slab
        # per family bound every cell's diameter
        gaps = []
        for f in self.families:
            offs = list(f.offsets) + [f.offsets[0] + f.period]
            gaps.append(max(b - a for a, b in zip(offs, offs[1:])))
        E = self._slab_extent(gaps)
        M = max(1, ceil(2 * E))
        self._margin = M
        lo, hi = -2 * M, 2 * M + 1  # window for kept samples/vertices
        wlo, whi = -3 * M - 1, 3 * M + 2  # hyperplane coverage window

        # per family: sorted level values with (offset idx, translate k)
        self.levels = []
        corners = list(product([Fraction(wlo), Fraction(whi)], repeat=n))
        for f in self.families:
            vals = [
                sum(Fraction(f.normal[i]) * pt[i] for i in range(n))
                for pt in (lat.from_coords(c) for c in corners)
            ]
            vmin, vmax = min(vals), max(vals)
            fam_levels = []
            for oi, c in enumerate(f.offsets):
                kmin = floor((vmin - c) / f.period) - 1
                kmax = ceil((vmax - c) / f.period) + 1
                for k in range(kmin, kmax + 1):
                    fam_levels.append((c + k * f.period, oi, k))
            fam_levels.sort()
            self.levels.append(fam_levels)
        self._level_values = [[v for v, _o, _k in fl] for fl in self.levels]

        self._box = (Fraction(lo), Fraction(hi))
        cells = self._enumerate_cells()
        self.cover_cells = cells
        self._by_code = {c.code: i for i, c in enumerate(cells)}

        # vertex sets, barycenters, torus identification
        vertex_idx = [i for i, c in enumerate(cells) if c.dim == 0]
        for ci, c in enumerate(cells):
            if c.dim == 0:
                c.verts = (c.sample,)
                c.bary = c.sample
                continue
            vs = [cells[vi].sample for vi in vertex_idx if self._face_rel(cells[vi].code, c.code)]
            if not vs:
                continue  # peripheral junk, never used
            vs.sort()
            c.verts = tuple(vs)
            c.bary = tuple(sum(v[i] for v in vs) / len(vs) for i in range(self.n))
            if self._code_of(c.bary) != c.code:
                c.verts = ()
                c.bary = None  # truncated peripheral cell

        canon_key = {}
        canonical = []
        for ci, c in enumerate(cells):
            if c.bary is None:
                continue
            coords = lat.to_coords(c.bary)
            lam = tuple(x.numerator // x.denominator for x in coords)
            c.lam = lam
            if all(x == 0 for x in lam):
                key = (c.dim, coords)
                if key in canon_key:
                    raise InvariantViolation("duplicate canonical cell")
                canon_key[key] = ci
                canonical.append(ci)

        canonical.sort(key=lambda ci: (cells[ci].dim, lat.to_coords(cells[ci].bary)))
        tid_of = {ci: tid for tid, ci in enumerate(canonical)}
        for ci, c in enumerate(cells):
            if c.bary is None:
                continue
            coords = lat.to_coords(c.bary)
            red = tuple(x - (x.numerator // x.denominator) for x in coords)
            hit = canon_key.get((c.dim, red))
            c.tid = tid_of.get(hit) if hit is not None else None

        self.cells: list[TorusCell] = []
        for tid, ci in enumerate(canonical):
            c = cells[ci]
            frame = self._frame(c.verts)
            faces = []
            for fi_, fc in enumerate(cells):
                if fc.dim != c.dim - 1 or fc.bary is None:
                    continue
                if not self._face_rel(fc.code, c.code):
                    continue
                if fc.tid is None:
                    raise InvariantViolation("face of a canonical cell is unidentified")
                sign = self._incidence(fc, c, frame_c=frame)
                faces.append((fc.tid, fc.lam, sign))
            faces.sort()
            self.cells.append(
                TorusCell(tid, c.dim, ci, c.bary, c.verts, frame, tuple(faces))
            )

        self.dim_index = [
            [z.tid for z in self.cells if z.dim == d] for d in range(n + 1)
        ]
        self.counts = tuple(len(ix) for ix in self.dim_index)
        self._build_differentials()
        self._check_complex()

    def _slab_extent(self, gaps) -> Fraction:
        n = self.n
        lat = self.lattice
        rows = []
        rhs = []
        for f, gap in zip(self.families, gaps):
            rows.append(list(f.normal))
            rhs.append(gap)
        best = Fraction(0)
        idxs = range(len(rows))
        for combo in combinations(idxs, n):
            for signs in product((-1, 1), repeat=n):
                A = Matrix([[signs[k] * rows[combo[k]][j] for j in range(n)] for k in range(n)])
                if A.det() == 0:
                    continue
                b = Matrix([[Fraction(rhs[combo[k]])] for k in range(n)])
                try:
                    x = solve_rational(A, b)
                except InvariantViolation:
                    continue
                pt = tuple(x.data[i][0] for i in range(n))
                ok = all(
                    abs(sum(Fraction(r[j]) * pt[j] for j in range(n))) <= g
                    for r, g in zip(rows, rhs)
                )
                if ok:
                    coords = lat.to_coords(pt)
                    best = max(best, max(abs(c) for c in coords))
        if best == 0:
            raise NonCellularError("degenerate arrangement geometry")
        return best

    def _dot(self, fi: int, point) -> Fraction:
        nu = self.families[fi].normal
        return sum(Fraction(nu[i]) * point[i] for i in range(self.n))

    def _code_of(self, point) -> tuple[int, ...]:
        code = []
        for fi in range(len(self.families)):
            v = self._dot(fi, point)
            vals = self._level_values[fi]
            i = bisect_left(vals, v)
            if i < len(vals) and vals[i] == v:
                code.append(2 * i)
            else:
                code.append(2 * i - 1)
        return tuple(code)

    @staticmethod
    def _face_rel(code_y, code_c) -> bool:
        """Covector order: y lies in the closure of c."""
        for cy, cc in zip(code_y, code_c):
            if cy == cc:
                continue
            if cy >= 0 and cy % 2 == 0 and (cc == cy - 1 or cc == cy + 1):
                continue
            return False
        return True

    def on_levels(self, code) -> tuple:
        """The (family idx, offset idx, translate) triples whose
        hyperplane contains the stratum with this code."""
        out = []
        for fi, c in enumerate(code):
            if c >= 0 and c % 2 == 0:
                _v, oi, k = self.levels[fi][c // 2]
                out.append((fi, oi, k))
        return tuple(out)

    def _zero_families(self, code) -> list[int]:
        return [fi for fi, c in enumerate(code) if c >= 0 and c % 2 == 0]

    def _in_box(self, point) -> bool:
        lo, hi = self._box
        return all(lo <= c <= hi for c in self.lattice.to_coords(point))

    def _enumerate_cells(self) -> list[CoverCell]:
        n = self.n
        fams = self.families
        # vertices: intersections of n pairwise independent family levels
        points = set()
        for fcombo in combinations(range(len(fams)), n):
            A = Matrix([list(fams[fi].normal) for fi in fcombo], cols=n)
            if A.det() == 0:
                continue
            for rhs in product(*(self._level_values[fi] for fi in fcombo)):
                b = Matrix([[v] for v in rhs])
                x = solve_rational(A, b)
                pt = tuple(x.data[i][0] for i in range(n))
                if self._in_box(pt):
                    points.add(pt)
        cells: list[CoverCell] = []
        seen: dict[tuple, int] = {}
        for pt in sorted(points):
            code = self._code_of(pt)
            if code not in seen:
                seen[code] = len(cells)
                cells.append(CoverCell(0, code, pt))

        frontier = list(range(len(cells)))
        for dim in range(1, n + 1):
            new_frontier = []
            for ci in frontier:
                cell = cells[ci]
                x = cell.sample
                Z = self._zero_families(cell.code)
                size = n - dim  # rank of the target direction kernels
                kernels = {}
                for T in combinations(Z, size):
                    Nmat = Matrix([list(fams[fi].normal) for fi in T], cols=n)
                    if Nmat.rank() != size:
                        continue
                    K = kernel_lattice(Nmat)
                    key = _rref_key([[K.data[i][j] for i in range(n)] for j in range(K.cols)])
                    if key not in kernels:
                        kernels[key] = K
                for K in kernels.values():
                    u = self._generic_direction(K, Z)
                    for direction in (u, tuple(-x_ for x_ in u)):
                        sample = self._step(x, direction)
                        if sample is None or not self._in_box(sample):
                            continue
                        code = self._code_of(sample)
                        if code in seen:
                            continue
                        seen[code] = len(cells)
                        cells.append(CoverCell(dim, code, sample))
                        new_frontier.append(len(cells) - 1)
            frontier = new_frontier
        return cells

    def _generic_direction(self, K: Matrix, Z) -> tuple[Fraction, ...]:
        """A vector in the column space of K avoiding every zero-set
        normal that is not orthogonal to all of K."""
        n, k = K.rows, K.cols
        bad = []
        for fi in Z:
            nu = self.families[fi].normal
            prods = [sum(Fraction(nu[r]) * K.data[r][c] for r in range(n)) for c in range(k)]
            if any(p != 0 for p in prods):
                bad.append(prods)
        for radius in range(1, 10):
            for combo in product(range(-radius, radius + 1), repeat=k):
                if all(c == 0 for c in combo):
                    continue
                if max(abs(c) for c in combo) != radius:
                    continue
                ok = all(
                    sum(c * p for c, p in zip(combo, prods)) != 0 for prods in bad
                )
                if ok:
                    return tuple(
                        sum(Fraction(combo[c]) * K.data[r][c] for c in range(k))
                        for r in range(n)
                    )
        raise InvariantViolation("no generic stepping direction found")

    def _step(self, x, u):
        """Sample a short positive step from x along u, landing in the
        adjacent cell: step half the distance to the first crossing."""
        best = None
        for fi in range(len(self.families)):
            du = self._dot(fi, u)
            if du == 0:
                continue
            v0 = self._dot(fi, x)
            vals = self._level_values[fi]
            if du > 0:
                j = bisect_right(vals, v0)
                if j == len(vals):
                    continue
                t = (vals[j] - v0) / du
            else:
                j = bisect_left(vals, v0) - 1
                if j < 0:
                    continue
                t = (vals[j] - v0) / du
            if best is None or t < best:
                best = t
        eps = (best / 2) if best is not None else Fraction(1, 2)
        return tuple(x[r] + eps * u[r] for r in range(self.n))

    def _frame(self, verts) -> tuple:
        if len(verts) <= 1:
            return ()
        n = self.n
        base = verts[0]
        chosen = []
        rows = []
        for v in verts[1:]:
            d = tuple(v[i] - base[i] for i in range(n))
            test = Matrix(rows + [list(d)], cols=n)
            if test.rank() == len(rows) + 1:
                rows.append(list(d))
                chosen.append(d)
        return tuple(chosen)

    def _incidence(self, face: CoverCell, cell: CoverCell, frame_c) -> int:
        """Incidence sign [face : cell] via outward-first orientation.

        Frames depend only on vertex differences, so the frame computed
        from any lattice translate agrees with the canonical one.
        """
        frame_f = self._frame(face.verts)
        n = self.n
        u = tuple(face.bary[i] - cell.bary[i] for i in range(n))
        cols = [list(u)] + [list(v) for v in frame_f]
        Fc = Matrix.from_cols([list(v) for v in frame_c], rows=n)
        T = Matrix.from_cols(cols, rows=n)
        X = solve_rational(Fc, T)
        s = X.det()
        return 1 if s > 0 else -1

    def _build_differentials(self):
        n = self.n
        local = [
            {tid: pos for pos, tid in enumerate(ix)} for ix in self.dim_index
        ]
        self.differentials = []
        for k in range(n):
            rows = len(self.dim_index[k + 1])
            cols = len(self.dim_index[k])
            D = [[0] * cols for _ in range(rows)]
            for z in self.cells:
                if z.dim != k + 1:
                    continue
                r = local[k + 1][z.tid]
                for ftid, _lam, sign in z.cover_faces:
                    D[r][local[k][ftid]] += sign
            self.differentials.append(Matrix(D, cols=cols))

    def _check_complex(self):
        euler = sum((-1) ** d * c for d, c in enumerate(self.counts))
        if euler != 0:
            raise InvariantViolation(f"torus Euler characteristic {euler} != 0")
        for a, b in zip(self.differentials, self.differentials[1:]):
            if not (b @ a).is_zero():
                raise InvariantViolation("differentials do not square to zero")

    # -- queries ----------------------------------------------------------

    def cell(self, tid: int) -> TorusCell:
        return self.cells[tid]

    def locate(self, point) -> tuple[int, tuple[int, ...]]:
        """(cell id, lattice translation) of the cell containing point."""
        lat = self.lattice
        coords = lat.to_coords(point)
        lam0 = tuple(x.numerator // x.denominator for x in coords)
        red = lat.from_coords(tuple(a - b for a, b in zip(coords, lam0)))
        ci = self._by_code.get(self._code_of(red))
        if ci is None:
            raise InvariantViolation("point location failed")
        c = self.cover_cells[ci]
        if c.tid is None:
            raise InvariantViolation("point located in an unidentified cell")
        return c.tid, tuple(a + b for a, b in zip(lam0, c.lam))

    def locate_cover(self, point) -> int:
        """Index of the cover cell containing an (unreduced) point."""
        ci = self._by_code.get(self._code_of(point))
        if ci is None:
            raise InvariantViolation("cover point location failed")
        return ci

    def translate_point(self, point, lam) -> tuple[Fraction, ...]:
        off = self.lattice.from_coords([Fraction(x) for x in lam])
        return tuple(p + o for p, o in zip(point, off))

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.counts))


def build_torus_complex(lattice: Lattice, families) -> TorusComplex:
    return TorusComplex(lattice, families)


# ---------------------------------------------------------------------------
# group actions on the complex
# ---------------------------------------------------------------------------


@dataclass
class TorusAction:
    """A cellular action of a list of affine maps on a TorusComplex.

    ``image[w][z]`` is the cell w(z); ``sign[w][z]`` compares the pushed
    orientation frame of z with the frame of w(z); ``pointwise[w][z]``
    says whether w restricted to z is the identity map.
    """

    complex: TorusComplex
    maps: list
    image: list
    sign: list
    pointwise: list

    def stabilizer_indices(self, z: int) -> tuple[int, ...]:
        return tuple(wi for wi in range(len(self.maps)) if self.image[wi][z] == z)


def install_action(cx: TorusComplex, maps) -> TorusAction:
    """Locate the image of every cell under every map and validate that
    the action is cellular (vertex sets map onto vertex sets exactly)."""
    lat = cx.lattice
    n = cx.n
    images, signs, pointwise = [], [], []
    for w in maps:
        img_row, sign_row, pw_row = [], [], []
        for z in cx.cells:
            p = w.apply(z.bary)
            try:
                tid, lam = cx.locate(p)
            except InvariantViolation as exc:
                raise NonCellularError(f"cell image escapes the complex: {exc}") from exc
            target = cx.cells[tid]
            if target.dim != z.dim:
                raise NonCellularError("map does not send cells to cells of equal dimension")
            moved = sorted(w.apply(v) for v in z.verts)
            expect = sorted(cx.translate_point(v, lam) for v in target.verts)
            if moved != expect:
                raise NonCellularError("cell image is not a cell of the complex")
            if z.dim:
                FA = Matrix.from_cols([list(w.apply_linear(v)) for v in z.frame], rows=n)
                Ft = Matrix.from_cols([list(v) for v in target.frame], rows=n)
                X = solve_rational(Ft, FA)
                s = 1 if X.det() > 0 else -1
            else:
                s = 1
            pw = False
            if tid == z.tid:
                offset = lat.from_coords([Fraction(x) for x in lam])
                pw = all(
                    w.apply(v) == tuple(a + b for a, b in zip(v, offset)) for v in z.verts
                )
            img_row.append(tid)
            sign_row.append(s)
            pw_row.append(pw)
        images.append(img_row)
        signs.append(sign_row)
        pointwise.append(pw_row)
    return TorusAction(cx, list(maps), images, signs, pointwise)


def equivariant_refine(lattice: Lattice, families, maps) -> tuple[TorusComplex, TorusAction]:
    """Refine the arrangement by all fixed loci of the maps (orbit
    closed), build the complex, and install the action.

    On the result, every cell stabilizer acts pointwise on its cell:
    any map fixing a cell setwise fixes its barycenter, and the fixed
    locus through the barycenter is either a full cell of the refined
    arrangement or the point itself, so the cell is contained in it.
    """
    fams = list(families) + list(fixed_locus_families(lattice, maps))
    fams = orbit_close_families(lattice, fams, maps)
    cx = build_torus_complex(lattice, fams)
    action = install_action(cx, maps)
    for wi in range(len(maps)):
        for z in cx.cells:
            if action.image[wi][z.tid] == z.tid and not action.pointwise[wi][z.tid]:
                raise InvariantViolation(
                    "refined action is not regular: a stabilizer moves points of its cell"
                )
    return cx, action
