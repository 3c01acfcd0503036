"""Equivariant cochain complexes with representation-ring coefficients.

A coefficient system assigns to every cell a free Z-module with a
distinguished basis, to every face inclusion a restriction map, and to
every group element a transport isomorphism.  The equivariant cochain
complex is the subcomplex of group-invariant cochains of the total
complex; its cohomology is computed exactly.

Three systems are provided: constant coefficients, the twisted
representation rings of the cell stabilizers (for the blown-up space),
and the sub-lattices of characters lying over the sliced weight
character (for the base space).  The latter two match fiberwise, which
``check_fiber_bijection`` verifies.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cyclotomic import root_of_unity
from .errors import InvariantViolation
from .exactla import (
    AbelianGroupInv,
    Matrix,
    complex_cohomology,
    kernel_lattice,
    solve_integer,
)
from .groups import (
    Cocycle,
    FiniteGroup,
    TwistedCharacterTable,
    char_inner_product,
    conjugation_matrix,
    lying_over_indices,
    one_dimensional_match,
    twisted_character_table,
)


class EquivariantCells:
    """A finite cell complex with a group action, degree by degree.

    ``degrees[k]`` lists the cell ids of dimension k; ``faces[cid]``
    gives (face id, incidence) pairs, one per geometric face; ``image``
    and ``sign`` give the permutation action and the orientation
    comparison; ``stab[cid]`` is the sorted tuple of stabilizer indices.
    """

    def __init__(self, group: FiniteGroup, degrees, faces, image, sign, stab):
        self.group = group
        self.degrees = [list(ix) for ix in degrees]
        self.faces = faces
        self.image = image
        self.sign = sign
        self.stab = stab

    def faces_of(self, cid: int):
        return self.faces[cid]

    def stabilizer(self, cid: int) -> tuple[int, ...]:
        return self.stab[cid]


def blowup_cells(bx) -> EquivariantCells:
    """The blown-up complex as an equivariant cell structure."""
    faces = {c.bid: tuple(bx.faces_of(c.bid)) for c in bx.cells}
    stab = {c.bid: bx.stabilizer_indices(c.bid) for c in bx.cells}
    return EquivariantCells(bx.group, bx.dim_index, faces, bx.image, bx.sign, stab)


def base_cells(bx) -> EquivariantCells:
    """The base complex of a blow-up as an equivariant cell structure."""
    cx, act = bx.base, bx.base_action
    faces = {
        z.tid: tuple((ftid, s) for ftid, _lam, s in z.cover_faces) for z in cx.cells
    }
    stab = {z.tid: act.stabilizer_indices(z.tid) for z in cx.cells}
    return EquivariantCells(bx.group, cx.dim_index, faces, act.image, act.sign, stab)


# ---------------------------------------------------------------------------
# coefficient systems
# ---------------------------------------------------------------------------


class ConstantCoefficients:
    """The constant system Z with identity restrictions and transports."""

    def __init__(self, cells: EquivariantCells):
        self.cells = cells
        self._one = Matrix([[1]], cols=1)

    def size(self, cid: int) -> int:
        return 1

    def labels(self, cid: int):
        return ("1",)

    def res(self, fcid: int, cid: int) -> Matrix:
        return self._one

    def act(self, w: int, cid: int) -> Matrix:
        return self._one


def _restriction_by_labels(
    parent_tab: TwistedCharacterTable, sub_tab: TwistedCharacterTable
) -> Matrix:
    """Restriction multiplicities when both groups carry ambient labels.

    Unlike ``restriction_matrix`` this does not require the subgroup to
    be labeled by positions in the parent; both tables belong to
    subgroups of a common ambient group and the subgroup's elements are
    looked up in the parent by label.
    """
    sub = sub_tab.group
    par = parent_tab.group
    rows = []
    for psi in sub_tab.values:
        row = []
        for chi in parent_tab.values:
            restricted = tuple(chi[par.index[lab]] for lab in sub.elements)
            val = char_inner_product(sub.n, restricted, psi)
            if not val.is_integer() or val.to_fraction() < 0:
                raise InvariantViolation(
                    "restriction multiplicity is not a nonnegative integer"
                )
            row.append(int(val.to_fraction()))
        rows.append(row)
    M = Matrix(rows, cols=parent_tab.count)
    for i in range(parent_tab.count):
        total = sum(M.data[j][i] * sub_tab.degrees[j] for j in range(sub_tab.count))
        if total != parent_tab.degrees[i]:
            raise InvariantViolation("restriction loses dimension")
    return M


class TwistedRepCoefficients:
    """Cocycle-twisted representation rings of the cell stabilizers.

    Restriction along a face is restriction of projective characters to
    the smaller stabilizer; transport by a group element is conjugation
    of characters, a permutation of the basis.
    """

    def __init__(self, cells: EquivariantCells, cocycle: Cocycle):
        if cocycle.group is not cells.group and (
            cocycle.group.elements != cells.group.elements
            or cocycle.group.table != cells.group.table
        ):
            raise InvariantViolation("cocycle belongs to a different group")
        self.cells = cells
        self.cocycle = cocycle
        self._tabs: dict[tuple, TwistedCharacterTable] = {}
        self._res: dict[tuple, Matrix] = {}
        self._act: dict[tuple, Matrix] = {}

    def table(self, stab: tuple[int, ...]) -> TwistedCharacterTable:
        tab = self._tabs.get(stab)
        if tab is None:
            sub = self.cells.group.subgroup(stab)
            tab = twisted_character_table(sub, self.cocycle.restrict(sub))
            self._tabs[stab] = tab
        return tab

    def size(self, cid: int) -> int:
        return self.table(self.cells.stabilizer(cid)).count

    def labels(self, cid: int):
        return tuple(range(self.size(cid)))

    def res(self, fcid: int, cid: int) -> Matrix:
        big = self.cells.stabilizer(fcid)
        small = self.cells.stabilizer(cid)
        if not set(small) <= set(big):
            raise InvariantViolation("stabilizer grows from a cell to its face")
        key = (big, small)
        M = self._res.get(key)
        if M is None:
            M = _restriction_by_labels(self.table(big), self.table(small))
            self._res[key] = M
        return M

    def act(self, w: int, cid: int) -> Matrix:
        src = self.cells.stabilizer(cid)
        dst = self.cells.stabilizer(self.cells.image[w][cid])
        key = (w, src, dst)
        M = self._act.get(key)
        if M is None:
            M = conjugation_matrix(
                self.cells.group, self.cocycle, w, self.table(src), self.table(dst)
            )
            self._act[key] = M
        return M


class LyingOverCoefficients:
    """Characters of the base-cell stabilizers lying over the sliced weights.

    At a base cell z the sliced reflections through z generate a normal
    subgroup of the stabilizer; their weights extend to a unique
    one-dimensional projective character iota of that subgroup (for the
    conjugate cocycle), and the coefficient module is spanned by the
    stabilizer characters whose restriction is a multiple of the
    conjugate of iota.  Restrictions and transports of the full
    representation rings preserve these spans, which is validated.
    """

    def __init__(self, bx, cocycle: Cocycle):
        self.bx = bx
        self.cells = base_cells(bx)
        self.full = TwistedRepCoefficients(self.cells, cocycle)
        self.cocycle = cocycle
        self._basis: dict[int, tuple[int, ...]] = {}
        for z in bx.base.cells:
            self._basis[z.tid] = self._lying_basis(z.tid)

    def _lying_basis(self, tid: int) -> tuple[int, ...]:
        group = self.cells.group
        stab = self.cells.stabilizer(tid)
        tab = self.full.table(stab)
        wp = self.bx.wprime_group(tid)
        if wp == (0,):
            return tuple(range(tab.count))
        wp_sub = group.subgroup(wp)
        bar = self.cocycle.conjugate().restrict(wp_sub)
        wp_tab = twisted_character_table(wp_sub, bar)
        prescribed = {
            widx: root_of_unity(r) for widx, r in self.bx.wprime[tid].items()
        }
        iota_row = wp_tab.values[one_dimensional_match(wp_tab, prescribed)]
        iota_of = {lab: iota_row[k] for k, lab in enumerate(wp_sub.elements)}
        # express the sliced subgroup in positions of the stabilizer table
        positions = sorted(tab.group.index[lab] for lab in wp)
        inner = tab.group.subgroup(positions)
        iota = tuple(iota_of[tab.group.elements[p]] for p in inner.elements)
        return tuple(lying_over_indices(tab, inner, iota))

    def basis(self, cid: int) -> tuple[int, ...]:
        return self._basis[cid]

    def size(self, cid: int) -> int:
        return len(self._basis[cid])

    def labels(self, cid: int):
        return self._basis[cid]

    def res(self, fcid: int, cid: int) -> Matrix:
        M = self.full.res(fcid, cid)
        rows, cols = self._basis[cid], self._basis[fcid]
        keep = set(rows)
        for i in range(M.rows):
            if i in keep:
                continue
            if any(M.data[i][j] for j in cols):
                raise InvariantViolation(
                    "restriction leaves the lying-over span"
                )
        return Matrix([[M.data[i][j] for j in cols] for i in rows], cols=len(cols))

    def act(self, w: int, cid: int) -> Matrix:
        M = self.full.act(w, cid)
        rows = self._basis[self.cells.image[w][cid]]
        cols = self._basis[cid]
        keep = set(rows)
        for i in range(M.rows):
            if i in keep:
                continue
            if any(M.data[i][j] for j in cols):
                raise InvariantViolation(
                    "transport leaves the lying-over span"
                )
        out = Matrix([[M.data[i][j] for j in cols] for i in rows], cols=len(cols))
        for j in range(out.cols):
            if sum(out.data[i][j] for i in range(out.rows)) != 1:
                raise InvariantViolation("transport is not a basis permutation")
        return out


def check_fiber_bijection(bx, cocycle: Cocycle) -> None:
    """Base modules and blow-up modules must match cell by cell.

    The lying-over characters of a base stabilizer correspond to the
    twisted characters of the stabilizer of any cell in the fiber.
    """
    lying = LyingOverCoefficients(bx, cocycle)
    upstairs = TwistedRepCoefficients(blowup_cells(bx), cocycle)
    for cell in bx.cells:
        a = lying.size(cell.base)
        b = upstairs.size(cell.bid)
        if a != b:
            raise InvariantViolation(
                f"cell {cell.base} has {a} lying-over characters but its "
                f"fiber cell {cell.bid} has {b} twisted characters"
            )


# ---------------------------------------------------------------------------
# the invariant cochain complex
# ---------------------------------------------------------------------------


@dataclass
class InvariantComplex:
    """Invariant cochains in a distinguished integral basis.

    ``bases[k]`` has full-cochain columns spanning the invariants in
    degree k (a saturated sublattice); ``differentials[k]`` is the
    induced map in those bases.
    """

    ranks: tuple[int, ...]
    differentials: list[Matrix]
    bases: list[Matrix]

    def cohomology(self) -> list[AbelianGroupInv]:
        return complex_cohomology(self.differentials)


def _layout(system, k: int):
    offs = {}
    total = 0
    for cid in system.cells.degrees[k]:
        offs[cid] = total
        total += system.size(cid)
    return offs, total


def _full_differential(system, k: int, lay_lo, lay_hi) -> Matrix:
    offs_lo, n_lo = lay_lo
    offs_hi, n_hi = lay_hi
    D = [[0] * n_lo for _ in range(n_hi)]
    for cid in system.cells.degrees[k + 1]:
        r0 = offs_hi[cid]
        for fcid, s in system.cells.faces_of(cid):
            R = system.res(fcid, cid)
            c0 = offs_lo[fcid]
            for i in range(R.rows):
                row = R.data[i]
                for j in range(R.cols):
                    if row[j]:
                        D[r0 + i][c0 + j] += s * row[j]
    return Matrix(D, cols=n_lo)


def _group_operator(system, w: int, lay) -> Matrix:
    offs, n = lay
    cells = system.cells
    T = [[0] * n for _ in range(n)]
    for cid in offs:
        A = system.act(w, cid)
        eps = cells.sign[w][cid]
        r0 = offs[cells.image[w][cid]]
        c0 = offs[cid]
        for i in range(A.rows):
            row = A.data[i]
            for j in range(A.cols):
                if row[j]:
                    T[r0 + i][c0 + j] = eps * row[j]
    return Matrix(T, cols=n)


def invariant_complex(system) -> InvariantComplex:
    """The subcomplex of group-invariant cochains, over the integers."""
    cells = system.cells
    degs = len(cells.degrees)
    lays = [_layout(system, k) for k in range(degs)]
    bases = []
    for k in range(degs):
        n = lays[k][1]
        stack = []
        for w in range(1, cells.group.n):
            T = _group_operator(system, w, lays[k])
            for i in range(n):
                row = T.data[i][:]
                row[i] -= 1
                stack.append(row)
        bases.append(kernel_lattice(Matrix(stack, cols=n)))
    diffs = []
    for k in range(degs - 1):
        full = _full_differential(system, k, lays[k], lays[k + 1])
        diffs.append(solve_integer(bases[k + 1], full @ bases[k]))
    return InvariantComplex(
        tuple(B.cols for B in bases), diffs, bases
    )


def equivariant_cohomology(system) -> list[AbelianGroupInv]:
    """Cohomology of the invariant cochain complex.

    The degree-zero group is a subgroup of a lattice and must be
    torsion-free; this is asserted.
    """
    H = invariant_complex(system).cohomology()
    if H[0].torsion:
        raise InvariantViolation("degree-zero cohomology has torsion")
    return H


def validate_system(system) -> None:
    """Check the compatibility laws of a coefficient system.

    The identity transports trivially, transports compose, the full
    differential commutes with every transport operator, and
    restriction is transitive along two-step face chains.
    """
    cells = system.cells
    degs = len(cells.degrees)
    lays = [_layout(system, k) for k in range(degs)]
    ops = [
        [_group_operator(system, w, lays[k]) for w in range(cells.group.n)]
        for k in range(degs)
    ]
    for k in range(degs):
        n = lays[k][1]
        if ops[k][0] != Matrix.identity(n):
            raise InvariantViolation("identity transport is not the identity")
        for g in range(cells.group.n):
            for h in range(cells.group.n):
                gh = cells.group.mult(g, h)
                if ops[k][gh] != ops[k][g] @ ops[k][h]:
                    raise InvariantViolation("transports do not compose")
    for k in range(degs - 1):
        full = _full_differential(system, k, lays[k], lays[k + 1])
        for w in range(cells.group.n):
            if full @ ops[k][w] != ops[k + 1][w] @ full:
                raise InvariantViolation(
                    "differential does not commute with a transport"
                )
    for k in range(degs - 2):
        for cid in cells.degrees[k + 2]:
            for mid, _s in cells.faces_of(cid):
                for fcid, _t in cells.faces_of(mid):
                    lhs = system.res(mid, cid) @ system.res(fcid, mid)
                    if lhs != system.res(fcid, cid):
                        raise InvariantViolation("restriction is not transitive")
