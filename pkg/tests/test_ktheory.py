"""Tests for the spectral-sequence assembly of K-groups."""

import pytest
from hypothesis import given, settings, strategies as st

from torusk.errors import SchemaError
from torusk.exactla import AbelianGroupInv, abelian_group
from torusk.ktheory import (
    CrossCheck,
    assemble_report,
    cross_check,
    e2_page,
    k_groups,
    rational_k,
)

Z = abelian_group
ZERO = AbelianGroupInv(0)


# the eight minimal-Levi rows: Bredon groups and the resulting K-pairs
SP4_ROWS = [
    ((Z(2), ZERO, ZERO), (Z(2), ZERO)),
    ((Z(4), ZERO, ZERO), (Z(4), ZERO)),
    ((Z(1), Z(1), ZERO), (Z(1), Z(1))),
    ((Z(6), ZERO, ZERO), (Z(6), ZERO)),
    ((Z(9), ZERO, ZERO), (Z(9), ZERO)),
    ((Z(2), Z(2), ZERO), (Z(2), Z(2))),
    ((Z(3), Z(3), ZERO), (Z(3), Z(3))),
    ((Z(1), Z(2), Z(1)), (Z(2), Z(2))),
]


class TestKGroups:
    @pytest.mark.parametrize("groups,expected", SP4_ROWS, ids=[f"case{i+1}" for i in range(8)])
    def test_dimension_two_rows(self, groups, expected):
        k = k_groups(groups, 2)
        assert k.exact
        assert (k.k0, k.k1) == expected
        assert (k.rank0, k.rank1) == (k.k0.rank, k.k1.rank)

    def test_torsion_survives_into_k0(self):
        k = k_groups((Z(1), Z(1), Z(0, [2])), 2)
        assert k.k0 == Z(1, [2])
        assert k.k1 == Z(1)

    def test_dimension_one(self):
        k = k_groups((Z(3), ZERO), 1)
        assert (k.k0, k.k1) == (Z(3), ZERO)
        free = k_groups((Z(1), Z(1)), 1)
        assert (free.k0, free.k1) == (Z(1), Z(1))

    def test_dimension_zero(self):
        k = k_groups((Z(2),), 0)
        assert (k.k0, k.k1) == (Z(2), ZERO)

    def test_high_dimension_is_rational_only(self):
        groups = (Z(1), Z(2), Z(1, [3]), Z(1))
        k = k_groups(groups, 3)
        assert not k.exact
        assert k.k0 is None and k.k1 is None
        assert (k.rank0, k.rank1) == (2, 3)
        assert k.caveat

    def test_rank_bookkeeping(self):
        for groups, _ in SP4_ROWS:
            k = k_groups(groups, 2)
            assert k.rank0 + k.rank1 == sum(g.rank for g in groups)

    def test_rejects_wrong_degree_count(self):
        with pytest.raises(SchemaError):
            k_groups((Z(1), Z(1)), 2)


class TestRational:
    def test_parity_sums(self):
        assert rational_k((Z(1), Z(2), Z(1))) == (2, 2)
        assert rational_k((Z(1), Z(1), ZERO)) == (1, 1)

    def test_torsion_is_invisible(self):
        assert rational_k((Z(0, [2, 4]), Z(1, [3]))) == (0, 1)


class TestE2Page:
    def test_dimension_two_layout(self):
        groups = (Z(1), Z(2), Z(1, [5]))
        table = e2_page(groups, 2)
        assert table == {(1, 1): Z(1, [5]), (2, 1): Z(2), (3, 1): Z(1)}

    def test_dimension_one_layout(self):
        table = e2_page((Z(3), Z(1)), 1)
        assert table == {(1, 0): Z(1), (2, 0): Z(3)}

    def test_zero_groups_are_omitted(self):
        table = e2_page((Z(2), ZERO, ZERO), 2)
        assert table == {(3, 1): Z(2)}

    def test_parity_vanishing(self):
        for n, groups in [(1, (Z(1), Z(2))), (2, (Z(1), Z(1), Z(1))), (3, (Z(1), Z(1), Z(1), Z(1)))]:
            for (p, q) in e2_page(groups, n):
                assert (q + n) % 2 == 1


class TestCrossCheck:
    def test_agreement(self):
        v = cross_check((Z(2), ZERO), (Z(2), ZERO))
        assert v.ok and str(v) == "agree"

    def test_first_failing_degree(self):
        v = cross_check((Z(2), ZERO, Z(1)), (Z(2), Z(1), ZERO))
        assert not v.ok
        assert v.degree == 1
        assert (v.left, v.right) == (ZERO, Z(1))
        assert "degree 1" in str(v)

    def test_length_mismatch(self):
        v = cross_check((Z(1),), (Z(1), ZERO))
        assert not v.ok and v.degree is None


class TestReport:
    def test_two_system_report(self):
        groups = (Z(2), ZERO, ZERO)
        report = assemble_report("case", 2, {"x-side": groups, "blowup": groups})
        assert report.verdict.ok
        assert report.exact
        assert (report.k0, report.k1) == (Z(2), ZERO)
        assert report.e2 == {(3, 1): Z(2)}

    def test_single_system_report(self):
        report = assemble_report("solo", 1, {"blowup": (Z(1), Z(1))})
        assert report.verdict is None
        assert (report.k0, report.k1) == (Z(1), Z(1))

    def test_blowup_side_drives_k(self):
        report = assemble_report(
            "mismatch", 1, {"x-side": (Z(1), ZERO), "blowup": (Z(2), ZERO)}
        )
        assert not report.verdict.ok
        assert report.k0 == Z(2)

    def test_rejects_empty(self):
        with pytest.raises(SchemaError):
            assemble_report("nothing", 1, {})


@settings(max_examples=80, deadline=None)
@given(
    st.integers(min_value=0, max_value=2),
    st.lists(
        st.tuples(st.integers(0, 3), st.sampled_from([(), (2,), (3,), (2, 4)])),
        min_size=3,
        max_size=3,
    ),
)
def test_exact_groups_match_rational_ranks(n, raw):
    groups = tuple(abelian_group(r, list(t)) for r, t in raw[: n + 1])
    k = k_groups(groups, n)
    assert k.exact
    assert (k.k0.rank, k.k1.rank) == rational_k(groups)
    assert k.rank0 + k.rank1 == sum(g.rank for g in groups)
    assert all((q + n) % 2 == 1 for (_, q) in e2_page(groups, n))
