"""Blow-up of a torus complex along designated reflection loci.

Given a complex with a cellular action and a set of sliced loci (for
each designated reflection, the translates of its fixed hyperplane
family that carry a root-of-unity weight), the blown-up space replaces
every cell z by one copy per local component of the complement of the
sliced hyperplanes through z.  Components are computed combinatorially:
the star of z is the set of cover cells whose closure contains z, the
sliced members are removed, and the rest is glued along the face
relation.

The construction validates the structure this is meant to produce: the
fiber over z biject with the group generated by the sliced reflections
through z, which acts simply transitively on it; cell stabilizers
upstairs complement that group inside the downstairs stabilizer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvariantViolation, SchemaError
from .exactla import Matrix
from .groups import AffineTorusMap, FiniteGroup
from .arrangement import (
    HyperplaneFamily,
    TorusAction,
    TorusComplex,
    family_image,
    fixed_point_components,
    make_family,
)


@dataclass(frozen=True)
class SlicedLocus:
    """A reflection with the sliced translates of its fixed locus.

    ``iota`` assigns each sliced offset a rational r standing for the
    root of unity e^{2 pi i r}.
    """

    reflection: AffineTorusMap
    family: HyperplaneFamily
    iota: tuple[tuple[Fraction, Fraction], ...]

    @staticmethod
    def make(lattice, reflection, normal, iota_by_offset) -> "SlicedLocus":
        fam = make_family(lattice, normal, list(iota_by_offset))
        pairs = []
        for off, r in iota_by_offset.items():
            canon = make_family(lattice, normal, [off])
            pairs.append((canon.offsets[0], Fraction(r)))
        return SlicedLocus(reflection, fam, tuple(sorted(pairs)))


@dataclass
class BlowupCell:
    bid: int
    base: int  # torus cell id downstairs
    comp: tuple  # cover-cell indices of the germ component
    dim: int


class BlowupComplex:
    """The blown-up cell complex with its transported group action."""

    def __init__(self, group: FiniteGroup, cx: TorusComplex, action: TorusAction,
                 sliced: list[SlicedLocus]):
        self.group = group
        self.base = cx
        self.base_action = action
        self.sliced = list(sliced)
        self._resolve_designations()
        self._check_equivariance()
        self._build_fibers()
        self._build_cells()
        self._install_action()
        self._validate_structure()
        self._build_differentials()

    # -- designation bookkeeping ---------------------------------------

    def _resolve_designations(self):
        cx = self.base
        lat = cx.lattice
        famindex = {f.normal: fi for fi, f in enumerate(cx.families)}
        self.sliced_levels: dict[tuple[int, int], tuple[int, Fraction]] = {}
        for loc in self.sliced:
            try:
                widx = self.group.elements.index(loc.reflection)
            except ValueError:
                raise SchemaError("sliced reflection is not a group element")
            if self.group.mult(widx, widx) != 0 or widx == 0:
                raise SchemaError("sliced reflection must be an involution")
            comps = fixed_point_components(lat, loc.reflection)
            if lat.dim == 1:
                # isolated fixed points are the codimension-one loci here
                points = [p for d, p in comps if d == 0]
                fixed = (
                    make_family(lat, loc.family.normal,
                                [loc.family.normal[0] * p[0] for p in points])
                    if points else None
                )
            else:
                fixed = next(
                    (fam for d, fam in comps
                     if d == lat.dim - 1 and fam.normal == loc.family.normal),
                    None,
                )
            if fixed is None:
                raise InvariantViolation(
                    "sliced locus normal is not fixed by its reflection"
                )
            if not set(loc.family.offsets) <= set(fixed.offsets):
                raise InvariantViolation(
                    "sliced offsets are not part of the reflection's fixed locus"
                )
            fi = famindex.get(loc.family.normal)
            if fi is None:
                raise InvariantViolation("sliced family missing from the arrangement")
            offsets = cx.families[fi].offsets
            for off, r in loc.iota:
                if off not in offsets:
                    raise InvariantViolation("sliced offset missing from the arrangement")
                key = (fi, offsets.index(off))
                if key in self.sliced_levels:
                    raise SchemaError("sliced locus designated twice")
                self.sliced_levels[key] = (widx, r)

    def _check_equivariance(self):
        """The sliced data must be stable under the whole group: w maps
        the locus of r to the locus of w r w^{-1} with the same weight."""
        cx = self.base
        lat = cx.lattice
        g = self.group
        for (fi, oi), (widx, r) in self.sliced_levels.items():
            fam = cx.families[fi]
            single = HyperplaneFamily(fam.normal, (fam.offsets[oi],), fam.period)
            for ai, a in enumerate(g.elements):
                img = family_image(lat, single, a)
                conj = g.mult(g.mult(ai, widx), g.inv(ai))
                fj = next(
                    (j for j, f in enumerate(cx.families) if f.normal == img.normal), None
                )
                if fj is None or img.offsets[0] not in cx.families[fj].offsets:
                    raise InvariantViolation("sliced locus image leaves the arrangement")
                key = (fj, cx.families[fj].offsets.index(img.offsets[0]))
                entry = self.sliced_levels.get(key)
                if entry != (conj, r):
                    raise InvariantViolation(
                        "sliced data is not equivariant under the group"
                    )

    # -- germ components -------------------------------------------------

    def _marked(self, code) -> bool:
        return any((fi, oi) in self.sliced_levels for fi, oi, _k in self.base.on_levels(code))

    def _build_fibers(self):
        cx = self.base
        cover = cx.cover_cells
        self.star: list[list[int]] = []
        self.comp_of: list[dict[int, int]] = []
        self.fiber: list[list[tuple]] = []
        self.wprime: list[dict[int, Fraction]] = []
        for z in cx.cells:
            rep = cover[z.rep]
            star = [
                ci for ci, c in enumerate(cover)
                if c.bary is not None and cx._face_rel(rep.code, c.code)
            ]
            unmarked = [ci for ci in star if not self._marked(cover[ci].code)]
            parent = {ci: ci for ci in unmarked}

            def find(a):
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            for i, a in enumerate(unmarked):
                for b in unmarked[i + 1:]:
                    ca, cb = cover[a].code, cover[b].code
                    if cx._face_rel(ca, cb) or cx._face_rel(cb, ca):
                        ra, rb = find(a), find(b)
                        if ra != rb:
                            parent[ra] = rb
            groups: dict[int, list[int]] = {}
            for ci in unmarked:
                groups.setdefault(find(ci), []).append(ci)
            comps = sorted(
                (tuple(sorted(members)) for members in groups.values()),
                key=lambda ms: min(cover[ci].sample for ci in ms),
            )
            comp_of = {ci: k for k, ms in enumerate(comps) for ci in ms}
            self.star.append(star)
            self.fiber.append(comps)
            self.comp_of.append(comp_of)

            gens: dict[int, Fraction] = {}
            for fi, oi, _k in cx.on_levels(rep.code):
                hit = self.sliced_levels.get((fi, oi))
                if hit is None:
                    continue
                widx, r = hit
                if widx in gens and gens[widx] != r:
                    raise InvariantViolation("conflicting weights at a cell")
                gens[widx] = r
            self.wprime.append(gens)

    def wprime_group(self, tid: int) -> tuple[int, ...]:
        return self.group.subgroup_closure(tuple(self.wprime[tid]))

    # -- cells of the blow-up ---------------------------------------------

    def _build_cells(self):
        cx = self.base
        self.cells: list[BlowupCell] = []
        self._bid_of: dict[tuple[int, int], int] = {}
        order = sorted(
            ((z.dim, z.tid, k) for z in cx.cells for k in range(len(self.fiber[z.tid])))
        )
        for dim, tid, k in order:
            bid = len(self.cells)
            self.cells.append(BlowupCell(bid, tid, self.fiber[tid][k], dim))
            self._bid_of[(tid, k)] = bid
        self.dim_index = [
            [c.bid for c in self.cells if c.dim == d] for d in range(cx.n + 1)
        ]
        self.counts = tuple(len(ix) for ix in self.dim_index)

    def bid_of(self, tid: int, comp_id: int) -> int:
        return self._bid_of[(tid, comp_id)]

    def pi(self, bid: int) -> int:
        return self.cells[bid].base

    def _component_at(self, tid: int, point) -> int:
        """Germ component of cell tid whose closure star contains the
        cover cell at the given (window) point."""
        ci = self.base.locate_cover(point)
        comp = self.comp_of[tid].get(ci)
        if comp is None:
            raise InvariantViolation("point does not lie in an unmarked star cell")
        return comp

    def _transport(self, tid: int, comp_k: int, dest_tid: int, offset) -> int:
        """Component of dest_tid matching component comp_k of tid after
        translating the star by -offset (ambient vector)."""
        cover = self.base.cover_cells
        rep_ci = self.fiber[tid][comp_k][0]
        p = tuple(a - b for a, b in zip(cover[rep_ci].sample, offset))
        return self._component_at(dest_tid, p)

    # -- faces and differentials ------------------------------------------

    def faces_of(self, bid: int) -> list[tuple[int, int]]:
        """(face bid, incidence sign) pairs, one per cover face."""
        cx = self.base
        cell = self.cells[bid]
        z = cx.cells[cell.base]
        comp_k = self.fiber[cell.base].index(cell.comp)
        out = []
        for ftid, lam, sign in z.cover_faces:
            offset = cx.lattice.from_coords([Fraction(x) for x in lam])
            fcomp = self._transport(cell.base, comp_k, ftid, offset)
            out.append((self.bid_of(ftid, fcomp), sign))
        return out

    def _build_differentials(self):
        cx = self.base
        n = cx.n
        local = [{bid: pos for pos, bid in enumerate(ix)} for ix in self.dim_index]
        self.differentials = []
        for k in range(n):
            rows, cols = len(self.dim_index[k + 1]), len(self.dim_index[k])
            D = [[0] * cols for _ in range(rows)]
            for bid in self.dim_index[k + 1]:
                r = local[k + 1][bid]
                for fbid, sign in self.faces_of(bid):
                    D[r][local[k][fbid]] += sign
            self.differentials.append(Matrix(D, cols=cols))
        for a, b in zip(self.differentials, self.differentials[1:]):
            if not (b @ a).is_zero():
                raise InvariantViolation("blow-up differentials do not square to zero")

    # -- the action upstairs -----------------------------------------------

    def _install_action(self):
        cx = self.base
        act = self.base_action
        lat = cx.lattice
        self.image: list[list[int]] = []
        self.sign: list[list[int]] = []
        for wi, w in enumerate(self.group.elements):
            img_row, sign_row = [], []
            for cell in self.cells:
                z = cx.cells[cell.base]
                dest = act.image[wi][cell.base]
                _tid, lam = cx.locate(w.apply(z.bary))
                if _tid != dest:
                    raise InvariantViolation("action transport mismatch")
                offset = lat.from_coords([Fraction(x) for x in lam])
                rep_ci = cell.comp[0]
                p = tuple(
                    a - b for a, b in zip(w.apply(cx.cover_cells[rep_ci].sample), offset)
                )
                fcomp = self._component_at(dest, p)
                img_row.append(self.bid_of(dest, fcomp))
                sign_row.append(act.sign[wi][cell.base])
            if sorted(img_row) != list(range(len(self.cells))):
                raise InvariantViolation("group does not permute blow-up cells")
            self.image.append(img_row)
            self.sign.append(sign_row)

    def stabilizer_indices(self, bid: int) -> tuple[int, ...]:
        return tuple(
            wi for wi in range(self.group.n) if self.image[wi][bid] == bid
        )

    # -- structure validation ------------------------------------------------

    def _validate_structure(self):
        g = self.group
        cx = self.base
        act = self.base_action
        for z in cx.cells:
            tid = z.tid
            wp = self.wprime_group(tid)
            if len(self.fiber[tid]) != len(wp):
                raise InvariantViolation(
                    f"fiber over cell {tid} has size {len(self.fiber[tid])}, "
                    f"expected {len(wp)}"
                )
            for wi in wp:
                if not act.pointwise[wi][tid]:
                    raise InvariantViolation(
                        "sliced reflection does not fix its locus cell"
                    )
            # freeness of the sliced group on the fiber
            for wi in wp:
                if wi == 0:
                    continue
                for k in range(len(self.fiber[tid])):
                    bid = self.bid_of(tid, k)
                    if self.image[wi][bid] == bid:
                        raise InvariantViolation(
                            "sliced group has a fixed germ component"
                        )
            # stabilizers upstairs complement the sliced group
            wz = set(act.stabilizer_indices(tid))
            for k in range(len(self.fiber[tid])):
                bid = self.bid_of(tid, k)
                wt = set(self.stabilizer_indices(bid))
                if not wt <= wz:
                    raise InvariantViolation("blow-up stabilizer escapes the base one")
                if set(wp) & wt != {0}:
                    raise InvariantViolation("sliced group meets a cell stabilizer")
                if len(wp) * len(wt) != len(wz):
                    raise InvariantViolation("stabilizer does not factor over the fiber")
            for a in wz:
                for r in wp:
                    if g.mult(g.mult(a, r), g.inv(a)) not in wp:
                        raise InvariantViolation("sliced group is not normal in the stabilizer")
            # faces carry at least the sliced reflections of the cell
            for ftid, _lam, _s in z.cover_faces:
                if not set(self.wprime[tid]) <= set(self.wprime[ftid]):
                    raise InvariantViolation("sliced reflections drop across a face")
                for wi, r in self.wprime[tid].items():
                    if self.wprime[ftid][wi] != r:
                        raise InvariantViolation("weights disagree across a face")


def blow_up(group: FiniteGroup, cx: TorusComplex, action: TorusAction,
            sliced: list[SlicedLocus]) -> BlowupComplex:
    return BlowupComplex(group, cx, action, sliced)
