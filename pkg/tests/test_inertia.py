import itertools
from fractions import Fraction as F

import pytest

from orbidegen.errors import ValidationError
from orbidegen.inertia import (
    CRProfile,
    FiniteGroupTable,
    SectorDatum,
    conjugacy_classes,
    cr_poincare_polynomial,
    degree_shift,
    inverse_class,
    monodromy_table,
    pairing_check,
)


def s3_table() -> FiniteGroupTable:
    """S3 built here from permutation composition, independent of the module."""
    perms = sorted(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    rows = [[index[tuple(p[q[i]] for i in range(3))] for q in perms] for p in perms]
    return FiniteGroupTable.from_rows(rows, identity=index[(0, 1, 2)])


def brute_force_classes(group: FiniteGroupTable):
    """Independent conjugation-orbit oracle."""
    n = group.order
    inv = [next(b for b in range(n)
                if group.mul[a][b] == group.identity and group.mul[b][a] == group.identity)
           for a in range(n)]
    remaining = set(range(n))
    classes = []
    while remaining:
        a = min(remaining)
        orbit = {group.mul[group.mul[g][a]][inv[g]] for g in range(n)}
        classes.append(frozenset(orbit))
        remaining -= orbit
    return classes


def sector(group, rep, rotations, betti=None):
    cls = next(c for c in conjugacy_classes(group) if rep in c.members)
    return SectorDatum(cls=cls, rotations=tuple(F(r) for r in rotations),
                       betti=betti or {0: 1})


def plane_profile(group, assignments, ambient=2, untwisted_betti=None):
    """Profile on C^ambient with rotations per class representative; every
    sector gets the minimal Poincare-symmetric Betti table for its dimension."""
    betti_top = untwisted_betti or {0: 1, 2: 2, 4: 1}
    sectors = []
    for cls in conjugacy_classes(group):
        rotations = tuple(F(r) for r in assignments[cls.representative])
        if cls.representative == group.identity:
            betti = betti_top
        else:
            dim = ambient - sum(1 for t in rotations if t != 0)
            betti = {0: 1} if dim == 0 else {0: 1, 2 * dim: 1}
        sectors.append(SectorDatum(cls=cls, rotations=rotations, betti=betti))
    return CRProfile(group=group, ambient_dim=ambient, sectors=tuple(sectors))


Z2_PLANE = {0: ("0", "0"), 1: ("1/2", "1/2")}
Z3_PLANE = {0: ("0", "0"), 1: ("1/3", "2/3"), 2: ("2/3", "1/3")}
Z6_PLANE = {0: ("0", "0"), 1: ("1/6", "5/6"), 2: ("1/3", "2/3"),
            3: ("1/2", "1/2"), 4: ("2/3", "1/3"), 5: ("5/6", "1/6")}
S3_PLANE = {0: ("0", "0"), 1: ("0", "1/2"), 3: ("1/3", "2/3")}


def all_test_profiles():
    out = [
        ("trivial", plane_profile(FiniteGroupTable.cyclic(1), {0: ("0", "0")})),
        ("z2", plane_profile(FiniteGroupTable.cyclic(2), Z2_PLANE)),
        ("z3", plane_profile(FiniteGroupTable.cyclic(3), Z3_PLANE)),
        ("z6", plane_profile(FiniteGroupTable.cyclic(6), Z6_PLANE)),
    ]
    group = s3_table()
    assignments = {}
    for cls in conjugacy_classes(group):
        assignments[cls.representative] = S3_PLANE[cls.representative]
    out.append(("s3", plane_profile(group, assignments)))
    return out


class TestGroupTable:
    def test_cyclic_passes(self):
        FiniteGroupTable.cyclic(6).validate()

    def test_non_associative_names_triple(self):
        rows = [[0, 1], [1, 1]]  # 1*1 = 1 breaks inverses/associativity
        with pytest.raises(ValidationError):
            FiniteGroupTable.from_rows(rows)

    def test_missing_identity_detected(self):
        rows = [[1, 0], [0, 1]]
        with pytest.raises(ValidationError, match="unit"):
            FiniteGroupTable.from_rows(rows, identity=0)

    def test_element_order(self):
        group = FiniteGroupTable.cyclic(6)
        assert [group.element_order(a) for a in range(6)] == [1, 6, 3, 2, 3, 6]


class TestConjugacyClasses:
    def test_trivial_group(self):
        classes = conjugacy_classes(FiniteGroupTable.cyclic(1))
        assert len(classes) == 1

    def test_cyclic_three_singletons(self):
        classes = conjugacy_classes(FiniteGroupTable.cyclic(3))
        assert [sorted(c.members) for c in classes] == [[0], [1], [2]]

    def test_s3_sizes_against_oracle(self):
        group = s3_table()
        got = sorted(len(c.members) for c in conjugacy_classes(group))
        oracle = sorted(len(c) for c in brute_force_classes(group))
        assert got == oracle == [1, 2, 3]

    def test_identity_class_first(self):
        for group in (FiniteGroupTable.cyclic(4), s3_table()):
            assert group.identity in conjugacy_classes(group)[0].members

    def test_partition(self):
        group = s3_table()
        classes = conjugacy_classes(group)
        union = sorted(x for c in classes for x in c.members)
        assert union == list(range(group.order))


class TestInverseClass:
    def test_identity_fixed(self):
        group = FiniteGroupTable.cyclic(5)
        identity_class = conjugacy_classes(group)[0]
        assert inverse_class(group, identity_class) == identity_class

    def test_cyclic_generator(self):
        group = FiniteGroupTable.cyclic(3)
        classes = conjugacy_classes(group)
        gen = next(c for c in classes if 1 in c.members)
        assert 2 in inverse_class(group, gen).members

    def test_transpositions_self_inverse(self):
        group = s3_table()
        classes = conjugacy_classes(group)
        transpositions = next(c for c in classes if len(c.members) == 3)
        assert inverse_class(group, transpositions) == transpositions

    def test_involution(self):
        for group in (FiniteGroupTable.cyclic(6), s3_table()):
            for cls in conjugacy_classes(group):
                assert inverse_class(group, inverse_class(group, cls)) == cls


class TestDegreeShift:
    def test_untwisted_zero(self):
        group = FiniteGroupTable.cyclic(2)
        assert degree_shift(sector(group, 0, ("0",), {0: 1})) == 0

    def test_z2_half(self):
        group = FiniteGroupTable.cyclic(2)
        assert degree_shift(sector(group, 1, ("1/2",))) == F(1, 2)

    def test_z3_sum_one(self):
        group = FiniteGroupTable.cyclic(3)
        assert degree_shift(sector(group, 1, ("1/3", "2/3"))) == 1

    def test_rotation_out_of_range(self):
        group = FiniteGroupTable.cyclic(2)
        with pytest.raises(ValidationError):
            sector(group, 1, ("3/2",))

    def test_denominator_must_divide_order(self):
        group = FiniteGroupTable.cyclic(2)
        with pytest.raises(ValidationError):
            sector(group, 1, ("1/3",))

    @pytest.mark.parametrize("name,profile", all_test_profiles())
    def test_shift_sum_is_nonzero_rotation_count(self, name, profile):
        # iota(g) + iota(g^-1) = #(nonzero rotations) = n - sector_dim, exactly
        for datum in profile.sectors:
            inv = inverse_class(profile.group, datum.cls)
            partner = profile.sector_of(inv)
            nonzero = sum(1 for t in datum.rotations if t != 0)
            assert datum.shift + partner.shift == nonzero
            assert nonzero == profile.ambient_dim - datum.sector_dim(profile.ambient_dim)

    @pytest.mark.parametrize("name,profile", all_test_profiles())
    def test_shift_range_and_denominator(self, name, profile):
        for datum in profile.sectors:
            assert 0 <= datum.shift < profile.ambient_dim
            assert datum.cls.ord % datum.shift.denominator == 0


class TestCRPolynomial:
    def test_manifold_no_shift(self):
        group = FiniteGroupTable.cyclic(1)
        profile = CRProfile(group=group, ambient_dim=1, sectors=(
            SectorDatum(cls=conjugacy_classes(group)[0], rotations=(F(0),),
                        betti={0: 1, 2: 1}),))
        assert cr_poincare_polynomial(profile) == [(F(0), 1), (F(2), 1)]

    def test_z2_sector_contributes_shifted(self):
        profile = plane_profile(FiniteGroupTable.cyclic(2), Z2_PLANE)
        poly = dict(cr_poincare_polynomial(profile))
        # twisted sector: betti {0:1} shifted by 2 * (1/2 + 1/2) = 2
        assert poly[F(2)] == 2 + 1  # untwisted q^2 multiplicity 2 plus the sector

    def test_z3_inverse_pair(self):
        group = FiniteGroupTable.cyclic(3)
        assignments = {0: ("0",), 1: ("1/3",), 2: ("2/3",)}
        sectors = []
        for cls in conjugacy_classes(group):
            betti = {0: 1, 2: 1} if cls.representative == 0 else {0: 1}
            sectors.append(SectorDatum(cls=cls,
                                       rotations=(F(assignments[cls.representative][0]),),
                                       betti=betti))
        profile = CRProfile(group=group, ambient_dim=1, sectors=tuple(sectors))
        poly = dict(cr_poincare_polynomial(profile))
        assert poly[F(2, 3)] == 1 and poly[F(4, 3)] == 1

    @pytest.mark.parametrize("name,profile", all_test_profiles())
    def test_total_rank_matches_betti(self, name, profile):
        poly = cr_poincare_polynomial(profile)
        assert sum(m for _, m in poly) == sum(s.total_rank() for s in profile.sectors)

    def test_raises_on_pairing_violation(self):
        profile = _corrupted_z2()
        with pytest.raises(ValidationError, match="pairing"):
            cr_poincare_polynomial(profile)


def _corrupted_z2():
    group = FiniteGroupTable.cyclic(2)
    classes = conjugacy_classes(group)
    return CRProfile(group=group, ambient_dim=2, sectors=(
        SectorDatum(cls=classes[0], rotations=(F(0), F(0)), betti={0: 1, 2: 2, 4: 1}),
        SectorDatum(cls=classes[1], rotations=(F(1, 2), F(1, 2)), betti={0: 1, 2: 1}),
    ))


class TestPairingCheck:
    @pytest.mark.parametrize("name,profile", all_test_profiles())
    def test_valid_profiles_pass(self, name, profile):
        assert pairing_check(profile).ok

    def test_corrupted_profile_located(self):
        report = pairing_check(_corrupted_z2())
        assert not report.ok
        assert any(v.sector == "c1" and v.degree == 2 for v in report.violations)

    def test_cr_degrees_pair_to_2n(self):
        profile = plane_profile(FiniteGroupTable.cyclic(3), Z3_PLANE)
        n = profile.ambient_dim
        for datum in profile.sectors:
            partner = profile.sector_of(inverse_class(profile.group, datum.cls))
            dim = datum.sector_dim(n)
            for d in datum.betti:
                cr_left = d + 2 * datum.shift
                cr_right = (2 * dim - d) + 2 * partner.shift
                assert cr_left + cr_right == 2 * n

    @pytest.mark.parametrize("name,profile", all_test_profiles())
    def test_rank_invariant_under_inverse_swap(self, name, profile):
        total = sum(s.total_rank() for s in profile.sectors)
        swapped = 0
        for datum in profile.sectors:
            partner = profile.sector_of(inverse_class(profile.group, datum.cls))
            swapped += partner.total_rank()
        assert swapped == total


class TestMonodromyTableFromGroup:
    def test_s3_labels(self):
        table = monodromy_table(s3_table())
        assert table.orders == {"c0": 1, "c1": 2, "c2": 3}
        assert table.inverse_of("c2") == "c2"
