"""Tests for group structure, affine torus maps, and character theory."""

import random
from fractions import Fraction
from itertools import permutations

import pytest

from torusk.cyclotomic import Cyclotomic, zeta
from torusk.errors import GroupClosureError, InvariantViolation, SchemaError
from torusk.exactla import Matrix
from torusk.groups import (
    AffineTorusMap,
    Cocycle,
    FiniteGroup,
    Lattice,
    central_extension,
    char_inner_product,
    character_table,
    close_affine_group,
    conjugation_matrix,
    lying_over_indices,
    one_dimensional_match,
    restriction_matrix,
    twisted_character_table,
)

# ---------------------------------------------------------------------------
# group zoo
# ---------------------------------------------------------------------------


def cyclic(n):
    return FiniteGroup.from_elements(list(range(n)), lambda a, b: (a + b) % n)


def dihedral(k):
    els = [(i, a) for a in range(2) for i in range(k)]

    def compose(x, y):
        (i, a), (j, b) = x, y
        if a == 0:
            return ((i + j) % k, b)
        return ((i - j) % k, 1 - b)

    return FiniteGroup.from_elements(els, compose)


def direct_product(g, h):
    els = [(a, b) for a in g.elements for b in h.elements]

    def compose(x, y):
        return (
            g.elements[g.mult(g.index[x[0]], g.index[y[0]])],
            h.elements[h.mult(h.index[x[1]], h.index[y[1]])],
        )

    return FiniteGroup.from_elements(els, compose)


def quaternion():
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    base = {
        ("1", "1"): "1", ("1", "i"): "i", ("1", "j"): "j", ("1", "k"): "k",
        ("i", "1"): "i", ("j", "1"): "j", ("k", "1"): "k",
        ("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
        ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
        ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j",
    }

    def compose(a, b):
        sa, ua = (-1 if a.startswith("-") else 1), a.lstrip("-")
        sb, ub = (-1 if b.startswith("-") else 1), b.lstrip("-")
        r = base[(ua, ub)]
        s = sa * sb * (-1 if r.startswith("-") else 1)
        ru = r.lstrip("-")
        return ru if s == 1 else "-" + ru

    return FiniteGroup.from_elements(names, compose)


def alternating4():
    els = [p for p in permutations(range(4)) if _parity(p) == 0]

    def compose(a, b):
        return tuple(a[b[i]] for i in range(4))

    return FiniteGroup.from_elements(els, compose)


def _parity(p):
    n = 0
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                n += 1
    return n % 2


def small_groups():
    return [
        ("C1", cyclic(1)),
        ("C2", cyclic(2)),
        ("C3", cyclic(3)),
        ("C4", cyclic(4)),
        ("C6", cyclic(6)),
        ("C2xC2", direct_product(cyclic(2), cyclic(2))),
        ("C2xC4", direct_product(cyclic(2), cyclic(4))),
        ("C2xC2xC2", direct_product(cyclic(2), direct_product(cyclic(2), cyclic(2)))),
        ("C12", cyclic(12)),
        ("C16", cyclic(16)),
        ("S3", dihedral(3)),
        ("D8", dihedral(4)),
        ("D10", dihedral(5)),
        ("D12", dihedral(6)),
        ("D16", dihedral(8)),
        ("Q8", quaternion()),
        ("A4", alternating4()),
        ("C2xS3", direct_product(cyclic(2), dihedral(3))),
    ]


# ---------------------------------------------------------------------------
# lattices and affine maps
# ---------------------------------------------------------------------------


class TestLattice:
    def test_reduce(self):
        lat = Lattice([(2, 0), (0, 2)])
        assert lat.reduce((Fraction(5, 2), Fraction(-1, 2))) == (Fraction(1, 2), Fraction(3, 2))
        assert lat.contains((4, -2))
        assert not lat.contains((1, 0))

    def test_coords_roundtrip(self):
        lat = Lattice([(2, 1), (0, 3)])
        pt = (Fraction(1, 3), Fraction(5, 7))
        assert lat.from_coords(lat.to_coords(pt)) == pt

    def test_singular_rejected(self):
        with pytest.raises(SchemaError):
            Lattice([(1, 1), (2, 2)])


class TestAffineTorusMap:
    def setup_method(self):
        self.lat = Lattice([(2, 0), (0, 2)])

    def test_shift_reduced(self):
        g = AffineTorusMap(self.lat, [[1, 0], [0, 1]], [Fraction(5, 2), 0])
        assert g.shift == (Fraction(1, 2), Fraction(0))

    def test_compose_and_inverse(self):
        s = AffineTorusMap(self.lat, [[0, 1], [1, 0]], [0, 0])
        t = AffineTorusMap(self.lat, [[1, 0], [0, -1]], [0, 0])
        st = s.compose(t)
        assert st.matrix == ((0, -1), (1, 0))
        assert st.compose(st.inverse()).is_identity()

    def test_lattice_preservation_enforced(self):
        skew = Lattice([(2, 0), (0, 1)])
        with pytest.raises(SchemaError):
            AffineTorusMap(skew, [[0, 1], [1, 0]], [0, 0])

    def test_determinant_enforced(self):
        with pytest.raises(SchemaError):
            AffineTorusMap(self.lat, [[2, 0], [0, 1]], [0, 0])

    def test_apply(self):
        g = AffineTorusMap(self.lat, [[0, 1], [1, 0]], [Fraction(1, 2), 0])
        assert g.apply((1, 0)) == (Fraction(1, 2), Fraction(1))


class TestClosure:
    def test_square_symmetries(self):
        lat = Lattice([(2, 0), (0, 2)])
        s = AffineTorusMap(lat, [[0, 1], [1, 0]], [0, 0])
        t = AffineTorusMap(lat, [[1, 0], [0, -1]], [0, 0])
        neg = AffineTorusMap(lat, [[-1, 0], [0, -1]], [0, 0])
        elems = close_affine_group([s, t, neg])
        assert len(elems) == 8
        assert elems[0].is_identity()

    def test_bound_enforced(self):
        lat = Lattice([(1, 0), (0, 1)])
        rot = AffineTorusMap(lat, [[0, -1], [1, 0]], [0, 0])
        with pytest.raises(GroupClosureError):
            close_affine_group([rot], max_order=3)
        assert len(close_affine_group([rot], max_order=4)) == 4

    def test_glide(self):
        lat = Lattice([(1, 0), (0, 1)])
        glide = AffineTorusMap(lat, [[1, 0], [0, -1]], [Fraction(1, 2), 0])
        elems = close_affine_group([glide])
        assert len(elems) == 2

    def test_deterministic_order(self):
        lat = Lattice([(2, 0), (0, 2)])
        s = AffineTorusMap(lat, [[0, 1], [1, 0]], [0, 0])
        t = AffineTorusMap(lat, [[1, 0], [0, -1]], [0, 0])
        a = close_affine_group([s, t])
        b = close_affine_group([t, s])
        assert [g.key() for g in a] == [g.key() for g in b]


class TestFiniteGroup:
    def test_classes_s3(self):
        S3 = dihedral(3)
        classes = S3.conjugacy_classes()
        assert sorted(len(c) for c in classes) == [1, 2, 3]
        assert classes[0] == (0,)

    def test_center_d8(self):
        assert len(dihedral(4).center()) == 2

    def test_subgroup_closure(self):
        D4 = dihedral(4)
        r = D4.index[(1, 0)]
        sub = D4.subgroup_closure([r])
        assert len(sub) == 4
        assert D4.is_normal(sub)

    def test_subgroup_relabels(self):
        D4 = dihedral(4)
        sub = D4.subgroup(D4.subgroup_closure([D4.index[(1, 0)]]))
        assert sub.elements[0] == 0
        assert sub.n == 4

    def test_exponent(self):
        assert dihedral(4).exponent() == 4
        assert quaternion().exponent() == 4
        assert alternating4().exponent() == 6


# ---------------------------------------------------------------------------
# ordinary character tables: structural properties for all orders <= 16
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name,group", small_groups())
class TestCharacterTableProperties:
    def test_counts_and_degrees(self, name, group):
        tab = character_table(group)
        classes = group.conjugacy_classes()
        assert len(tab.chars) == len(classes)
        degrees = tab.degrees
        assert sum(d * d for d in degrees) == group.n
        assert all(group.n % d == 0 for d in degrees)

    def test_row_orthogonality_per_element(self, name, group):
        tab = character_table(group)
        class_of = group.class_map()
        rows = [
            tuple(tab.chars[i][class_of[g]] for g in range(group.n))
            for i in range(len(tab.chars))
        ]
        for i in range(len(rows)):
            for j in range(i, len(rows)):
                ip = char_inner_product(group.n, rows[i], rows[j])
                assert ip == Cyclotomic.rational(1 if i == j else 0)

    def test_column_orthogonality(self, name, group):
        tab = character_table(group)
        classes = group.conjugacy_classes()
        for k in range(len(classes)):
            for l in range(len(classes)):
                acc = Cyclotomic.rational(0)
                for row in tab.chars:
                    acc = acc + row[k] * row[l].conjugate()
                want = group.n // len(classes[k]) if k == l else 0
                assert acc == Cyclotomic.rational(want)

    def test_deterministic(self, name, group):
        a = character_table(group)
        b = character_table(group)
        assert a.chars == b.chars


class TestKnownTables:
    def test_d8(self):
        assert sorted(character_table(dihedral(4)).degrees) == [1, 1, 1, 1, 2]

    def test_q8(self):
        assert sorted(character_table(quaternion()).degrees) == [1, 1, 1, 1, 2]

    def test_a4(self):
        assert sorted(character_table(alternating4()).degrees) == [1, 1, 1, 3]

    def test_c5_values(self):
        tab = character_table(cyclic(5))
        values = {v for row in tab.chars for v in row}
        assert zeta(5) in values
        assert zeta(5, 2) in values


# ---------------------------------------------------------------------------
# randomized subgroup chains: restriction transitivity
# ---------------------------------------------------------------------------


class TestSubgroupChains:
    def test_restriction_transitivity_randomized(self):
        rng = random.Random(1234)
        zoo = small_groups()
        for _ in range(12):
            name, G = zoo[rng.randrange(len(zoo))]
            if G.n < 4:
                continue
            g1 = [rng.randrange(G.n) for _ in range(2)]
            H1 = G.subgroup(G.subgroup_closure(g1))
            # subgroup of H1, labels are G indices
            g2 = [H1.elements[rng.randrange(H1.n)] for _ in range(1)]
            h2_parent = G.subgroup_closure(g2)
            H2_in_G = G.subgroup(h2_parent)
            H2_in_H1 = H1.subgroup(sorted(H1.index[p] for p in h2_parent))

            triv = Cocycle.trivial(G)
            tab_G = twisted_character_table(G, triv)
            tab_H1 = twisted_character_table(H1, triv.restrict(H1))
            tab_H2 = twisted_character_table(H2_in_G, triv.restrict(H2_in_G))
            # H2 as subgroup of H1 carries H1-index labels; rebuild its
            # table with values reindexed through H1 to compare maps
            triv_H1 = Cocycle.trivial(H1)
            tab_H2_via = twisted_character_table(
                H1.subgroup(sorted(H1.index[p] for p in h2_parent)),
                triv_H1.restrict(H2_in_H1),
            )

            R_G_H1 = restriction_matrix(tab_G, tab_H1)
            R_G_H2 = restriction_matrix(tab_G, tab_H2)
            R_H1_H2 = restriction_matrix(tab_H1, tab_H2_via)
            # identify tab_H2_via rows with tab_H2 rows (same underlying
            # subgroup of G, but H1-relative labels): match by values
            lookup = {}
            for a, row in enumerate(tab_H2_via.values):
                key = tuple(v.key() for v in row)
                lookup[key] = a
            perm = []
            for row in tab_H2.values:
                perm.append(lookup[tuple(v.key() for v in row)])
            for i in range(len(tab_G.values)):
                for j in range(len(tab_H2.values)):
                    composed = sum(
                        R_H1_H2.data[perm[j]][k] * R_G_H1.data[k][i]
                        for k in range(len(tab_H1.values))
                    )
                    assert composed == R_G_H2.data[j][i]

    def test_index_two_restriction_dimensions(self):
        rng = random.Random(77)
        for k in (3, 4, 5, 6):
            G = dihedral(k)
            rot = G.subgroup(G.subgroup_closure([G.index[(1, 0)]]))
            triv = Cocycle.trivial(G)
            R = restriction_matrix(
                twisted_character_table(G, triv),
                twisted_character_table(rot, triv.restrict(rot)),
            )
            tab = character_table(G)
            for i, d in enumerate(tab.degrees):
                assert sum(R.data[j][i] for j in range(rot.n)) in (1, 2)


# ---------------------------------------------------------------------------
# twisted character tables
# ---------------------------------------------------------------------------


def v4_with_cocycle():
    V = FiniteGroup.from_elements(
        [(a, b) for a in range(2) for b in range(2)],
        lambda x, y: ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2),
    )
    pairs = {}
    for x in V.elements:
        for y in V.elements:
            if x[1] * y[0] % 2:
                pairs[(x, y)] = 1
    return V, Cocycle.from_pairs(V, 2, pairs)


class TestTwisted:
    def test_v4_heisenberg(self):
        V, coc = v4_with_cocycle()
        assert central_extension(V, coc).n == 8
        tw = twisted_character_table(V, coc)
        assert tw.degrees == (2,)
        assert len(coc.regular_classes()) == 1

    def test_regularity_is_class_invariant(self):
        V, coc = v4_with_cocycle()
        for cls in V.conjugacy_classes():
            flags = {coc.is_regular(i) for i in cls}
            assert len(flags) == 1

    def test_trivial_cocycle_matches_ordinary(self):
        G = dihedral(3)
        tw = twisted_character_table(G, Cocycle.trivial(G))
        assert sorted(tw.degrees) == sorted(character_table(G).degrees)

    def test_coboundary_preserves_degrees(self):
        rng = random.Random(5)
        for name, G in [("S3", dihedral(3)), ("C4", cyclic(4)), ("D8", dihedral(4))]:
            m = 4
            mu = [0] + [rng.randrange(m) for _ in range(G.n - 1)]
            vals = [
                [(mu[i] + mu[j] - mu[G.mult(i, j)]) % m for j in range(G.n)]
                for i in range(G.n)
            ]
            coc = Cocycle(G, m, vals)
            tw = twisted_character_table(G, coc)
            assert sorted(tw.degrees) == sorted(character_table(G).degrees)
            assert len(coc.regular_classes()) == len(G.conjugacy_classes())

    def test_twisted_orthonormality(self):
        V, coc = v4_with_cocycle()
        tw = twisted_character_table(V, coc)
        ip = char_inner_product(V.n, tw.values[0], tw.values[0])
        assert ip == Cyclotomic.rational(1)

    def test_cocycle_identity_enforced(self):
        G = cyclic(2)
        with pytest.raises(SchemaError):
            Cocycle(G, 2, [[0, 0], [1, 0]])


class TestConjugation:
    def test_inner_conjugation_trivial(self):
        D4 = dihedral(4)
        triv = Cocycle.trivial(D4)
        C4 = D4.subgroup(D4.subgroup_closure([D4.index[(1, 0)]]))
        tab = twisted_character_table(C4, triv.restrict(C4))
        w = D4.index[(1, 0)]
        P = conjugation_matrix(D4, triv, w, tab, tab)
        assert P == Matrix.identity(4)

    def test_flip_conjugation_swaps(self):
        D4 = dihedral(4)
        triv = Cocycle.trivial(D4)
        C4 = D4.subgroup(D4.subgroup_closure([D4.index[(1, 0)]]))
        tab = twisted_character_table(C4, triv.restrict(C4))
        w = D4.index[(0, 1)]
        P = conjugation_matrix(D4, triv, w, tab, tab)
        assert P != Matrix.identity(4)
        assert P @ P == Matrix.identity(4)
        assert all(sum(row) == 1 for row in P.data)


class TestLyingOver:
    def v4_matrix_group(self):
        lat = Lattice([(2, 0), (0, 2)])
        t = AffineTorusMap(lat, [[1, 0], [0, -1]], [0, 0])
        neg = AffineTorusMap(lat, [[-1, 0], [0, -1]], [0, 0])
        elems = close_affine_group([t, neg])
        G = FiniteGroup.from_elements(elems, lambda a, b: a.compose(b))
        sub = G.subgroup(G.subgroup_closure([G.index[t]]))
        return G, sub, t

    def test_trivial_iota_rank_two(self):
        G, sub, t = self.v4_matrix_group()
        tab = twisted_character_table(G, Cocycle.trivial(G))
        iota = tuple(Cyclotomic.rational(1) for _ in sub.elements)
        idx = lying_over_indices(tab, sub, iota)
        assert len(idx) == 2

    def test_sign_iota_rank_two(self):
        G, sub, t = self.v4_matrix_group()
        tab = twisted_character_table(G, Cocycle.trivial(G))
        iota = tuple(
            Cyclotomic.rational(1) if p == 0 else Cyclotomic.rational(-1)
            for p in sub.elements
        )
        idx = lying_over_indices(tab, sub, iota)
        assert len(idx) == 2

    def test_one_dimensional_match(self):
        G, sub, t = self.v4_matrix_group()
        sub_tab = twisted_character_table(
            G.subgroup(sub.elements), Cocycle.trivial(G).restrict(G.subgroup(sub.elements))
        )
        t_idx = G.index[t]
        pick = one_dimensional_match(sub_tab, {t_idx: Cyclotomic.rational(-1)})
        assert sub_tab.values[pick][sub_tab.group.index[t_idx]] == Cyclotomic.rational(-1)
        with pytest.raises(InvariantViolation):
            one_dimensional_match(sub_tab, {})
